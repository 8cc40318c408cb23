// Acceptance suite: one pass/fail line per release criterion. Exits nonzero
// if any criterion fails. Run from the build directory; criterion 10 writes
// attractor projection CSVs next to the binary's working directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nbds/blocks.hpp"
#include "nbds/builtins.hpp"
#include "nbds/device.hpp"
#include "nbds/errors.hpp"
#include "nbds/metrics.hpp"
#include "nbds/montecarlo.hpp"
#include "nbds/netlist.hpp"
#include "nbds/sim.hpp"
#include "nbds/waveform.hpp"

using namespace nbds;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void note(const std::string& what) {
        if (ok) detail = what;
    }
};

double rel(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

BilateralSignal lift(double v, double cm) {
    return {cm + (v > 0 ? v : 0.0), cm + (v < 0 ? -v : 0.0)};
}

SubthresholdParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> nn(1.0, 1.6), vt(0.02, 0.03),
        is(0.5e-15, 5e-15), vb(0.8, 1.6);
    SubthresholdParams p;
    p.n_n = nn(rng);
    p.n_p = nn(rng);
    p.v_t = vt(rng);
    p.i_sn = is(rng);
    p.i_sp = is(rng);
    p.v_b = vb(rng);
    return p;
}

// --- criterion bodies -------------------------------------------------

void c1_core_symmetry(Check& c) {
    std::mt19937 rng(101);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const SubthresholdParams p = random_params(rng);
        worst = std::max(worst, std::abs(i_out_sub(p, p.v_b / 2.0)));
    }
    c.require(worst <= 1e-15, "zero-point output above 1e-15 A");
    c.note("worst |i_out(V_b/2)| = " + std::to_string(worst));
}

void c2_product_invariant(Check& c) {
    const SubthresholdParams p;
    const double beta = beta_sub(p);
    const double expected = beta * beta * std::exp(p.v_b / p.slope_voltage());
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double vc = 0.2 + 0.8 * i / 99.0;
        const BranchCurrents bc = branch_currents_sub(p, vc);
        worst = std::max(worst, rel(bc.i_a * bc.i_b, expected));
    }
    c.require(worst <= 1e-12, "branch product drifts over the sweep");
}

void c3_init_inverse(Check& c) {
    const SubthresholdParams p;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -10e-9 + 20e-9 * i / 999.0;
        const double back = i_out_sub(p, v_initial(p, x));
        worst = std::max(worst, std::abs(back - x) / std::max(std::abs(x), 1e-15));
    }
    c.require(worst <= 1e-9, "initialization inverse misses 1e-9 relative");
}

void c4_dynamic_range(Check& c) {
    std::mt19937 rng(104);
    for (int i = 0; i < 50; ++i) {
        SubthresholdParams p = random_params(rng);
        c.require(rel(i_out_min(p), i_out_sub(p, v_c_min(p))) <= 1e-12,
                  "closed-form bound disagrees with the law");
        if (p.v_b > 16.0 * p.v_t)
            c.require(v_c_min(p) > v_c_min_m4(p), "M2 limit does not bind");
    }
}

void c5_block_algebra(Check& c) {
    std::mt19937 rng(105);
    std::uniform_real_distribution<double> mag(0.1e-9, 10e-9), cm(0.0, 20e-9),
        sgn(-1.0, 1.0), scale(0.5e-9, 4e-9);
    for (int i = 0; i < 10000; ++i) {
        const double x = std::copysign(mag(rng), sgn(rng));
        const double y = std::copysign(mag(rng), sgn(rng));
        const double s = scale(rng);
        const BilateralSignal xs = lift(x, cm(rng)), ys = lift(y, cm(rng));
        c.require(rel(mult_type3(xs, ys, ScaleCurrent(s)).value(), x * y / s) <= 1e-12,
                  "three-quadrant multiplier not value-homomorphic");
        c.require(rel(squarer_type2(xs, ScaleCurrent(s)), x * x / s) <= 1e-12,
                  "bilateral squarer not value-homomorphic");
        c.require(rel(bilateral_mult_si(xs, ys, ScaleCurrent(s)).value(),
                      2.0 * x * y / s) <= 1e-12,
                  "square-law multiplier not value-homomorphic");
        if (!c.ok) return;
    }
}

void c6_census(Check& c) {
    const Netlist fhn = lower(builtin_fhn());
    c.require(fhn.cores.size() == 2, "neuron core count");
    c.require(fhn.count(BlockKind::sq2) == 1, "neuron squarer count");
    c.require(fhn.count(BlockKind::mult2) == 2, "neuron two-quadrant multiplier count");
    c.require(fhn.count(BlockKind::split) == 1, "neuron splitter count");
    c.require(fhn.count(BlockKind::mult1p) + fhn.count(BlockKind::mult1n) +
                      fhn.count(BlockKind::mult3) + fhn.count(BlockKind::sq1) ==
                  0,
              "neuron has unexpected blocks");
    const Netlist lor = lower(builtin_lorenz());
    c.require(lor.cores.size() == 3, "lorenz core count");
    c.require(lor.count(BlockKind::mult3) == 2, "lorenz three-quadrant multiplier count");
    c.require(lor.count(BlockKind::mult2) == 1, "lorenz two-quadrant multiplier count");
    c.require(lor.count(BlockKind::split) + lor.count(BlockKind::sq1) +
                      lor.count(BlockKind::sq2) ==
                  0,
              "lorenz has unexpected blocks");
}

ExprPtr random_expr(std::mt19937& rng, const DynSystem& sys, int depth) {
    std::uniform_real_distribution<double> cval(-5e-9, 5e-9), sval(0.5e-9, 4e-9);
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 7);
    switch (pick(rng)) {
        case 0: {
            std::uniform_int_distribution<size_t> si(0, sys.states.size() - 1);
            return state_ref(sys.states[si(rng)].name);
        }
        case 1:
            if (!sys.inputs.empty()) {
                std::uniform_int_distribution<size_t> ii(0, sys.inputs.size() - 1);
                return input_ref(sys.inputs[ii(rng)].name);
            }
            [[fallthrough]];
        case 2: {
            double v = cval(rng);
            if (v == 0.0) v = 1e-9;
            return constant(v);
        }
        case 3:
            return neg(random_expr(rng, sys, depth - 1));
        case 4:
            return add(random_expr(rng, sys, depth - 1), random_expr(rng, sys, depth - 1));
        case 5:
            return sub(random_expr(rng, sys, depth - 1), random_expr(rng, sys, depth - 1));
        case 6:
            return mul(random_expr(rng, sys, depth - 1), random_expr(rng, sys, depth - 1),
                       sval(rng));
        default:
            return square(random_expr(rng, sys, depth - 1), sval(rng));
    }
}

DynSystem random_system(std::mt19937& rng, int index) {
    DynSystem sys;
    sys.name = "random" + std::to_string(index);
    std::uniform_int_distribution<int> ns(1, 3), ni(0, 2);
    const int n = ns(rng), m = ni(rng);
    for (int i = 0; i < n; ++i)
        sys.states.push_back({"x" + std::to_string(i), 1e-3, 1e-9, 0.0});
    for (int i = 0; i < m; ++i)
        sys.inputs.push_back(
            {"u" + std::to_string(i), {DriveSpec::Kind::constant, 1e-9}});
    for (int i = 0; i < n; ++i)
        sys.equations["x" + std::to_string(i)] = random_expr(rng, sys, 3);
    sys.validate();
    return sys;
}

void check_preservation(Check& c, const DynSystem& sys, std::mt19937& rng, int points) {
    const Netlist n = lower(sys);
    std::uniform_real_distribution<double> val(-10e-9, 10e-9), cm(0.0, 5e-9);
    for (int k = 0; k < points && c.ok; ++k) {
        std::map<std::string, double> sv, iv;
        std::vector<BilateralSignal> rails;
        std::vector<double> inputs;
        for (const auto& s : sys.states) {
            const double v = val(rng);
            sv[s.name] = v;
            rails.push_back(lift(v, cm(rng)));
        }
        for (const auto& i : sys.inputs) {
            const double v = val(rng);
            iv[i.name] = v;
            inputs.push_back(v);
        }
        const std::vector<BilateralSignal> f = eval_netlist(n, rails, inputs);
        for (size_t i = 0; i < sys.states.size(); ++i) {
            const double want = eval_expr(*sys.equations.at(sys.states[i].name), sv, iv);
            c.require(std::abs(f[i].value() - want) <=
                          std::max(1e-10 * std::abs(want), 1e-19),
                      "netlist disagrees with expression semantics on " + sys.name);
        }
    }
}

void c7_semantic_preservation(Check& c) {
    std::mt19937 rng(107);
    for (const auto& name : builtin_names()) {
        check_preservation(c, builtin_by_name(name), rng, 1000);
        if (!c.ok) return;
    }
    for (int i = 0; i < 50 && c.ok; ++i)
        check_preservation(c, random_system(rng, i), rng, 1000);
}

// Steady spiking period of the neuron benchmark, from a coarse scouting run.
double fhn_period() {
    const DynSystem sys = builtin_fhn();
    SimConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 400.0;
    cfg.record_stride = 10;
    const Waveform w = integrate_math(sys, cfg);
    return oscillation_metrics(w.t, w.column("v")).period;
}

void c8_exact_embedding(Check& c) {
    const DynSystem sys = builtin_fhn();
    const Netlist n = lower(sys);
    const double period = fhn_period();
    SimConfig cfg;
    cfg.dt = default_dt(sys);  // tau_min / 2000
    cfg.t_end = 10.0 * period;
    cfg.record_stride = 16;
    const Waveform math = integrate_math(sys, cfg);
    const Waveform circ = integrate_circuit(n, cfg);
    const double err = nrmse(math.t, math.column("v"), circ.t, circ.column("v"));
    c.require(err < 1e-4, "embedding error " + std::to_string(err) + " >= 1e-4");

    // integration-order check over one period against a fine reference
    SimConfig fine;
    fine.dt = cfg.dt / 16.0;
    fine.t_end = period;
    fine.record_stride = 64;
    const Waveform ref = integrate_math(sys, fine);
    auto err_at = [&](double dt) {
        SimConfig s;
        s.dt = dt;
        s.t_end = period;
        s.record_stride = 4;
        const Waveform w = integrate_circuit(n, s);
        return nrmse(ref.t, ref.column("v"), w.t, w.column("v"));
    };
    const double e1 = err_at(cfg.dt);
    const double e2 = err_at(cfg.dt / 2.0);
    c.require(e1 / e2 >= 8.0,
              "halving dt shrank the error only " + std::to_string(e1 / e2) + "x");
    c.note("nrmse " + std::to_string(err) + ", convergence factor " +
           std::to_string(e1 / e2));
}

void c9_hopf_bistability(Check& c) {
    SimConfig cfg;
    cfg.dt = 65e-3 / 2000.0;
    cfg.t_end = 4.0;
    cfg.record_stride = 8;

    DynSystem inside = builtin_hopf();  // (0.3, 0) nA, inside the unstable cycle
    {
        const Waveform w = integrate_circuit(lower(inside), cfg);
        const std::vector<double> x = w.column("x");
        const size_t tail = x.size() * 9 / 10;
        double lo = x[tail], hi = x[tail];
        for (size_t i = tail; i < x.size(); ++i) {
            lo = std::min(lo, x[i]);
            hi = std::max(hi, x[i]);
        }
        c.require(hi - lo < 0.05e-9, "inner start did not decay below 5% of I_x");
    }

    DynSystem outside = builtin_hopf();
    outside.states[0].init = 0.9e-9;
    {
        const Waveform circ = integrate_circuit(lower(outside), cfg);
        const Waveform math = integrate_math(outside, cfg);
        const OscillationMetrics mc = oscillation_metrics(circ.t, circ.column("x"));
        const OscillationMetrics mm = oscillation_metrics(math.t, math.column("x"));
        const double p2p_err = rel(mc.amplitude_p2p, mm.amplitude_p2p);
        c.require(p2p_err < 0.02,
                  "swing error " + std::to_string(100.0 * p2p_err) + "%");
        c.note("outer swing error " + std::to_string(100.0 * p2p_err) + "%");
    }
}

void c10_lorenz_chaos(Check& c) {
    const DynSystem sys = builtin_lorenz();
    const Netlist n = lower(sys);
    SimConfig cfg;
    cfg.dt = 1.3e-3 / 2000.0;
    cfg.t_end = 0.52;  // 40 Lorenz time units
    cfg.record_stride = 50;
    const Waveform a = integrate_circuit(n, cfg);
    double bound = 0.0;
    for (const auto& row : a.samples)
        for (double v : row) bound = std::max(bound, std::abs(v));
    c.require(bound < 60e-9, "trajectory left the 60 nA box");

    DynSystem pert = sys;
    pert.states[0].init += 1e-6 * 1e-9;
    const Waveform b = integrate_circuit(lower(pert), cfg);
    const auto tdiv = divergence_time(a.t, a.column("x"), b.column("x"), 1e-9);
    c.require(tdiv.has_value(), "perturbed twin never separated by 1 nA");

    auto dump = [&](const char* path, const char* cx, const char* cy) {
        Waveform w;
        w.names = {cx, cy};
        const std::vector<double> xs = a.column(cx), ys = a.column(cy);
        for (size_t i = 0; i < a.size(); ++i)
            w.append(a.t[i], {xs[i], ys[i]}, a.sat[i] != 0);
        write_csv_file(w, path);
    };
    dump("lorenz_xy.csv", "x", "y");
    dump("lorenz_zy.csv", "z", "y");
    dump("lorenz_zx.csv", "z", "x");
    if (tdiv)
        c.note("bound " + std::to_string(bound * 1e9) + " nA, separation at t = " +
               std::to_string(*tdiv) + " s; projections written");
}

void c11_synapse(Check& c) {
    const Netlist n = lower(builtin_synapse());
    SimConfig cfg;
    cfg.dt = 0.05 / 2000.0;
    cfg.t_end = 0.6;
    const Waveform w = integrate_circuit(n, cfg);
    const std::vector<double> x = w.column("x");
    const double frac = interp(w.t, x, 0.05) / x.back();
    c.require(std::abs(frac - 0.632) <= 0.005,
              "step response at one time constant: " + std::to_string(100.0 * frac) +
                  "% of final");
    c.note(std::to_string(100.0 * frac) + "% of final value at t = 50 ms");
}

std::vector<double> folded_offsets(const Waveform& w, double period,
                                   const char* a, const char* b, const char* d) {
    const size_t half = w.size() / 2;
    auto tail = [&](const char* name) {
        const std::vector<double> col = w.column(name);
        return std::pair<std::vector<double>, std::vector<double>>(
            {w.t.begin() + half, w.t.end()}, {col.begin() + half, col.end()});
    };
    const auto [t1, y1] = tail(a);
    const auto [t2, y2] = tail(b);
    const auto [t3, y3] = tail(d);
    const auto s1 = detect_spikes(t1, y1);
    const auto s2 = detect_spikes(t2, y2);
    const auto s3 = detect_spikes(t3, y3);
    auto fold = [&](double deg) { return std::min(deg, 360.0 - deg); };
    return {fold(phase_offset_deg(s1, s2, period)),
            fold(phase_offset_deg(s2, s3, period)),
            fold(phase_offset_deg(s1, s3, period))};
}

void c12_network_phases(Check& c) {
    SimConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 2400.0;
    cfg.record_stride = 50;

    const Waveform wc = integrate_circuit(lower(builtin_network(NetworkTopology::c)), cfg);
    const double period = oscillation_metrics(wc.t, wc.column("v1")).period;
    const std::vector<double> offc = folded_offsets(wc, period, "v1", "v2", "v3");
    for (double o : offc)
        c.require(o >= 100.0 && o <= 140.0,
                  "inhibitory ring offset " + std::to_string(o) + " deg");

    const Waveform wa = integrate_circuit(lower(builtin_network(NetworkTopology::a)), cfg);
    const double pa = oscillation_metrics(wa.t, wa.column("v1")).period;
    const std::vector<double> offa = folded_offsets(wa, pa, "v1", "v2", "v3");
    for (double o : offa)
        c.require(o < 15.0, "excitatory offset " + std::to_string(o) + " deg");
    c.note("ring offsets " + std::to_string(offc[0]) + "/" + std::to_string(offc[1]) +
           "/" + std::to_string(offc[2]) + " deg; sync offsets " +
           std::to_string(offa[0]) + "/" + std::to_string(offa[1]) + "/" +
           std::to_string(offa[2]) + " deg");
}

void c13_strong_inversion(Check& c) {
    const DynSystem sys = builtin_fhn_si();
    const double period = fhn_period();  // same taus as the subthreshold neuron
    SimConfig cfg;
    cfg.dt = default_dt(sys);
    cfg.t_end = 3.0 * period;
    cfg.record_stride = 16;
    const Waveform math = integrate_math(sys, cfg);

    const Waveform direct = integrate_circuit(lower(sys, MappingConstant::derived), cfg);
    const double e1 = nrmse(math.t, math.column("v"), direct.t, direct.column("v"));
    c.require(e1 < 1e-3, "derived mapping error " + std::to_string(e1));

    const Netlist paper = lower(sys, MappingConstant::paper);
    const double scale = time_rescale(paper);  // (2+beta)/(1+beta)
    SimConfig short_cfg = cfg;
    short_cfg.t_end = cfg.t_end / scale;
    const Waveform warped = integrate_circuit(paper, short_cfg);
    const double e2 =
        nrmse(math.t, math.column("v"), warped.t, warped.column("v"), scale);
    c.require(e2 < 1e-3, "paper mapping error after rescale " + std::to_string(e2));
    c.note("derived " + std::to_string(e1) + ", paper+rescale " + std::to_string(e2));
}

void c14_monte_carlo(Check& c) {
    DynSystem sys = builtin_hopf();
    sys.states[0].init = 0.9e-9;
    McConfig cfg;
    cfg.seed = 2026;
    cfg.sim.dt = 65e-3 / 500.0;
    cfg.sim.t_end = 4.0;

    McConfig frozen = cfg;
    frozen.sigma = 0.0;
    frozen.runs = 10;
    const McResult r0a = monte_carlo(sys, frozen);
    const McResult r0b = monte_carlo(sys, frozen);
    c.require(r0a.period_std == 0.0 && r0a.p2p_std == 0.0,
              "zero spread produced variance");
    bool identical = r0a.oscillated_count == r0b.oscillated_count;
    for (size_t i = 0; identical && i < r0a.runs.size(); ++i)
        identical = r0a.runs[i].period == r0b.runs[i].period &&
                    r0a.runs[i].amplitude_p2p == r0b.runs[i].amplitude_p2p;
    c.require(identical, "rerun with the same seed differed");

    cfg.sigma = 0.02;
    cfg.runs = 100;
    const McResult r = monte_carlo(sys, cfg);
    c.require(r.success_fraction >= 0.90,
              "oscillation yield " + std::to_string(100.0 * r.success_fraction) + "%");
    c.note("yield " + std::to_string(100.0 * r.success_fraction) + "%, period " +
           std::to_string(r.period_mean) + " +/- " + std::to_string(r.period_std) +
           " s");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "core symmetry at half bias", c1_core_symmetry},
        {2, "branch product invariant", c2_product_invariant},
        {3, "initialization inverse", c3_init_inverse},
        {4, "dynamic range formulas", c4_dynamic_range},
        {5, "block value homomorphisms", c5_block_algebra},
        {6, "compiler census", c6_census},
        {7, "semantic preservation", c7_semantic_preservation},
        {8, "exact embedding", c8_exact_embedding},
        {9, "hopf bistability", c9_hopf_bistability},
        {10, "lorenz chaos", c10_lorenz_chaos},
        {11, "synapse step response", c11_synapse},
        {12, "network phase locking", c12_network_phases},
        {13, "strong inversion mapping", c13_strong_inversion},
        {14, "monte carlo protocol", c14_monte_carlo},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("%s %2d %-32s (%.1fs)%s%s\n", c.ok ? "PASS" : "FAIL", cr.id,
                    cr.name, secs, c.detail.empty() ? "" : " -- ",
                    c.detail.c_str());
        std::fflush(stdout);
        if (!c.ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
