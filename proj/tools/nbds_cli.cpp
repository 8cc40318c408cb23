#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nbds/builtins.hpp"
#include "nbds/errors.hpp"
#include "nbds/metrics.hpp"
#include "nbds/montecarlo.hpp"
#include "nbds/netlist.hpp"
#include "nbds/parser.hpp"
#include "nbds/sim.hpp"
#include "nbds/waveform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitThreshold = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw nbds::ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw nbds::ValidationError("cannot open '" + path + "' for writing");
    f << text;
}

// key=value device overrides, one per line, '#' comments.
void apply_params(nbds::Device& dev, const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw nbds::ValidationError("params line " + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            const size_t b = s.find_first_not_of(" \t\r");
            const size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string vs = trim(line.substr(eq + 1));
        double value;
        try {
            size_t pos;
            value = std::stod(vs, &pos);
            if (pos != vs.size()) throw std::invalid_argument(vs);
        } catch (const std::exception&) {
            throw nbds::ValidationError("params line " + std::to_string(lineno) +
                                        ": bad number '" + vs + "'");
        }
        if (key == "n_n") dev.sub.n_n = value;
        else if (key == "n_p") dev.sub.n_p = value;
        else if (key == "v_t") dev.sub.v_t = value;
        else if (key == "i_sn") dev.sub.i_sn = value;
        else if (key == "i_sp") dev.sub.i_sp = value;
        else if (key == "k_n") dev.si.k_n = value;
        else if (key == "k_p") dev.si.k_p = value;
        else if (key == "v_th") dev.si.v_th = value;
        else if (key == "v_dd") { dev.sub.v_dd = value; dev.si.v_dd = value; }
        else if (key == "v_b") { dev.sub.v_b = value; dev.si.v_b = value; }
        else
            throw nbds::ValidationError("unknown device parameter '" + key + "'");
    }
    dev.validate();
}

struct SystemOpts {
    std::string builtin;
    std::string file;
    std::string params;
    bool init_outside = false;
};

void add_system_opts(CLI::App* cmd, SystemOpts& o) {
    auto* b = cmd->add_option("--builtin", o.builtin, "builtin system name");
    auto* f = cmd->add_option("--file", o.file, "system description file");
    b->excludes(f);
    cmd->add_option("--params", o.params,
                    "device parameter overrides (key=value lines); "
                    "falls back to $NBDS_PARAMS");
    cmd->add_flag("--init-outside", o.init_outside,
                  "start the hopf builtin outside the stable cycle");
}

nbds::DynSystem load_system(const SystemOpts& o) {
    nbds::DynSystem sys;
    if (!o.builtin.empty())
        sys = nbds::builtin_by_name(o.builtin);
    else if (!o.file.empty())
        sys = nbds::parse(read_file(o.file));
    else
        throw CLI::RequiredError("--builtin or --file");
    if (o.init_outside) {
        if (o.builtin != "hopf")
            throw nbds::ValidationError("--init-outside applies to the hopf builtin");
        sys.states[0].init = 0.9e-9;
        sys.states[1].init = 0.0;
    }
    std::string params = o.params;
    if (params.empty())
        if (const char* env = std::getenv("NBDS_PARAMS")) params = env;
    if (!params.empty()) apply_params(sys.device, params);
    return sys;
}

struct SimOpts {
    double dt = 0.0;
    double t_end = 0.0;
    std::string integrator = "rk4";
    int stride = 1;
    bool clip = false;
};

void add_sim_opts(CLI::App* cmd, SimOpts& o) {
    cmd->add_option("--dt", o.dt, "step size [s] (default tau_min/2000)");
    cmd->add_option("--t-end", o.t_end, "horizon [s] (default 40*tau_max)");
    cmd->add_option("--integrator", o.integrator, "rk4 or euler")
        ->check(CLI::IsMember({"rk4", "euler"}));
    cmd->add_option("--stride", o.stride, "record every n-th sample")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--clip", o.clip, "enforce capacitor-voltage clamping");
}

nbds::SimConfig sim_config(const SimOpts& o) {
    nbds::SimConfig cfg;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    cfg.integrator = o.integrator == "euler" ? nbds::Integrator::euler
                                             : nbds::Integrator::rk4;
    cfg.record_stride = o.stride;
    cfg.clipping = o.clip;
    return cfg;
}

nbds::MappingConstant mapping_of(const std::string& s) {
    return s == "derived" ? nbds::MappingConstant::derived
                          : nbds::MappingConstant::paper;
}

int run(int argc, char** argv) {
    CLI::App app{"Synthesis and behavioral simulation of nonlinear bilateral "
                 "dynamical systems as current-mode circuits"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "list the builtin systems");

    auto* synth_cmd = app.add_subcommand("synth", "lower a system to a netlist");
    SystemOpts synth_sys;
    add_system_opts(synth_cmd, synth_sys);
    std::string synth_mapping = "paper";
    synth_cmd->add_option("--mapping", synth_mapping, "capacitor mapping preset")
        ->check(CLI::IsMember({"paper", "derived"}));
    std::string synth_out;
    synth_cmd->add_option("-o,--output", synth_out, "output path (default stdout)");

    auto* sim_cmd = app.add_subcommand("sim", "integrate a system and write a CSV");
    SystemOpts sim_sys;
    add_system_opts(sim_cmd, sim_sys);
    std::string sim_netlist;
    sim_cmd->add_option("--netlist", sim_netlist, "simulate a netlist JSON file");
    std::string sim_model = "circuit";
    sim_cmd->add_option("--model", sim_model, "circuit (device level) or math")
        ->check(CLI::IsMember({"circuit", "math"}));
    std::string sim_mapping = "paper";
    sim_cmd->add_option("--mapping", sim_mapping, "capacitor mapping preset")
        ->check(CLI::IsMember({"paper", "derived"}));
    SimOpts sim_opts;
    add_sim_opts(sim_cmd, sim_opts);
    std::string sim_out;
    sim_cmd->add_option("-o,--output", sim_out, "output path (default stdout)");

    auto* cmp_cmd = app.add_subcommand(
        "compare", "run both models and report the normalized error");
    SystemOpts cmp_sys;
    add_system_opts(cmp_cmd, cmp_sys);
    std::string cmp_mapping = "paper";
    cmp_cmd->add_option("--mapping", cmp_mapping, "capacitor mapping preset")
        ->check(CLI::IsMember({"paper", "derived"}));
    std::string cmp_rescale = "auto";
    cmp_cmd->add_option("--rescale", cmp_rescale,
                        "auto: undo the known mapping time warp; none: compare raw")
        ->check(CLI::IsMember({"auto", "none"}));
    double cmp_max = 1e-3;
    cmp_cmd->add_option("--max-nrmse", cmp_max, "failure threshold");
    SimOpts cmp_opts;
    add_sim_opts(cmp_cmd, cmp_opts);

    auto* mc_cmd = app.add_subcommand("mc", "device-mismatch study");
    SystemOpts mc_sys;
    add_system_opts(mc_cmd, mc_sys);
    std::uint64_t mc_seed = 0;
    mc_cmd->add_option("--seed", mc_seed, "master seed")->required();
    int mc_runs = 100;
    mc_cmd->add_option("--runs", mc_runs, "sample count")->check(CLI::PositiveNumber);
    double mc_sigma = 0.05;
    mc_cmd->add_option("--sigma", mc_sigma, "lognormal parameter spread");
    std::string mc_channel;
    mc_cmd->add_option("--channel", mc_channel, "analyzed state (default: first)");
    std::string mc_mapping = "paper";
    mc_cmd->add_option("--mapping", mc_mapping, "capacitor mapping preset")
        ->check(CLI::IsMember({"paper", "derived"}));
    SimOpts mc_opts;
    add_sim_opts(mc_cmd, mc_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (list_cmd->parsed()) {
        for (const auto& name : nbds::builtin_names())
            std::printf("%-10s %s\n", name.c_str(),
                        nbds::builtin_description(name).c_str());
        return kExitOk;
    }

    if (synth_cmd->parsed()) {
        const nbds::DynSystem sys = load_system(synth_sys);
        const nbds::Netlist n = nbds::lower(sys, mapping_of(synth_mapping));
        write_output(synth_out, nbds::emit(n));
        return kExitOk;
    }

    if (sim_cmd->parsed()) {
        nbds::Waveform w;
        if (!sim_netlist.empty()) {
            if (sim_model == "math")
                throw nbds::ValidationError("--netlist implies the circuit model");
            w = nbds::integrate_circuit(nbds::netlist_from_json(read_file(sim_netlist)),
                                        sim_config(sim_opts));
        } else {
            const nbds::DynSystem sys = load_system(sim_sys);
            if (sim_model == "math") {
                w = nbds::integrate_math(sys, sim_config(sim_opts));
            } else {
                const nbds::Netlist n = nbds::lower(sys, mapping_of(sim_mapping));
                w = nbds::integrate_circuit(n, sim_config(sim_opts));
            }
        }
        write_output(sim_out, nbds::to_csv(w));
        return kExitOk;
    }

    if (cmp_cmd->parsed()) {
        const nbds::DynSystem sys = load_system(cmp_sys);
        const nbds::SimConfig cfg = sim_config(cmp_opts);
        const nbds::Netlist n = nbds::lower(sys, mapping_of(cmp_mapping));
        const nbds::Waveform ref = nbds::integrate_math(sys, cfg);
        const nbds::Waveform test = nbds::integrate_circuit(n, cfg);
        const double scale = cmp_rescale == "auto" ? nbds::time_rescale(n) : 1.0;
        bool ok = true;
        for (const auto& name : ref.names) {
            const double e = nbds::nrmse(ref.t, ref.column(name), test.t,
                                         test.column(name), scale);
            std::printf("%s nrmse %.6g\n", name.c_str(), e);
            if (e > cmp_max) ok = false;
        }
        std::printf("%s (threshold %.6g)\n", ok ? "PASS" : "FAIL", cmp_max);
        return ok ? kExitOk : kExitThreshold;
    }

    if (mc_cmd->parsed()) {
        const nbds::DynSystem sys = load_system(mc_sys);
        nbds::McConfig cfg;
        cfg.runs = mc_runs;
        cfg.sigma = mc_sigma;
        cfg.seed = mc_seed;
        cfg.channel = mc_channel;
        cfg.sim = sim_config(mc_opts);
        cfg.mapping = mapping_of(mc_mapping);
        const nbds::McResult res = nbds::monte_carlo(sys, cfg);
        std::printf("runs %d\n", mc_runs);
        std::printf("oscillated %d (%.1f%%)\n", res.oscillated_count,
                    100.0 * res.success_fraction);
        std::printf("nominal period %.6g s, swing %.6g A\n", res.nominal_period,
                    res.nominal_p2p);
        std::printf("period %.6g +/- %.6g s\n", res.period_mean, res.period_std);
        std::printf("swing %.6g +/- %.6g A\n", res.p2p_mean, res.p2p_std);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nbds::NonFiniteError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const nbds::DenominatorUnderflow& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
