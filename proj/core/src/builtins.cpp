#include "nbds/builtins.hpp"

#include <map>

#include "nbds/errors.hpp"

namespace nbds {

namespace {

constexpr double nA = 1e-9;
constexpr double pA = 1e-12;
constexpr double uA = 1e-6;

// FHN right-hand sides at a given current scale (1 V of the mathematical
// model corresponds to `unit` amperes).
ExprPtr fhn_fv(const std::string& v, const std::string& w, const std::string& ext,
               double unit) {
    // F_v = v - v^3/(I_b I_x) - w + I_ext, I_b = 3 unit, I_x = 1 unit
    ExprPtr cube = mul(square(state_ref(v), 1.0 * unit), state_ref(v), 3.0 * unit);
    return add(sub(sub(state_ref(v), cube), state_ref(w)), input_ref(ext));
}

ExprPtr fhn_fw(const std::string& v, const std::string& w, double unit) {
    // F_w = v + I_c - I_d w / I_x, I_c = 0.7 unit, I_d = 0.8 unit
    return sub(add(state_ref(v), constant(0.7 * unit)),
               mul(constant(0.8 * unit), state_ref(w), 1.0 * unit));
}

}  // namespace

DynSystem builtin_fhn() {
    DynSystem sys;
    sys.name = "fhn";
    sys.regime = Regime::subthreshold;
    sys.device.regime = Regime::subthreshold;
    sys.device.sub.v_b = 1.2;
    // tau from the 800 pF / 80 pA operating point: tau = C (n_n+n_p) V_T / I_dc.
    sys.states = {{"v", 0.65, 80 * pA, -1.2 * nA},
                  {"w", 8.125, 6.4 * pA, -0.6 * nA}};
    sys.inputs = {{"Iext", {DriveSpec::Kind::constant, 0.6 * nA}}};
    sys.equations["v"] = fhn_fv("v", "w", "Iext", nA);
    sys.equations["w"] = fhn_fw("v", "w", nA);
    sys.validate();
    return sys;
}

DynSystem builtin_lorenz() {
    DynSystem sys;
    sys.name = "lorenz";
    sys.regime = Regime::subthreshold;
    sys.device.regime = Regime::subthreshold;
    sys.device.sub.v_b = 1.5;
    // 400 pF capacitors; I_dc_x = sigma I_dc_y = 20 nA, I_dc_y = I_dc_z = 2 nA.
    sys.states = {{"x", 1.3e-3, 20 * nA, 1.0 * nA},
                  {"y", 13e-3, 2 * nA, 1.0 * nA},
                  {"z", 13e-3, 2 * nA, 1.0 * nA}};
    sys.equations["x"] = sub(state_ref("y"), state_ref("x"));
    sys.equations["y"] =
        sub(mul(state_ref("x"), sub(constant(28 * nA), state_ref("z")), 1.0 * nA),
            state_ref("y"));
    sys.equations["z"] =
        sub(mul(state_ref("x"), state_ref("y"), 1.0 * nA),
            mul(constant(8.0 / 3.0 * nA), state_ref("z"), 1.0 * nA));
    sys.validate();
    return sys;
}

DynSystem builtin_hopf() {
    DynSystem sys;
    sys.name = "hopf";
    sys.regime = Regime::subthreshold;
    sys.device.regime = Regime::subthreshold;
    sys.device.sub.v_b = 1.2;
    // 500 pF capacitors at I_dc = 0.5 nA. Default start inside the unstable
    // limit cycle (damped branch of the bistable pair).
    sys.states = {{"x", 65e-3, 0.5 * nA, 0.3 * nA}, {"y", 65e-3, 0.5 * nA, 0.0}};
    ExprPtr r2 = add(square(state_ref("x"), 1.0 * nA), square(state_ref("y"), 1.0 * nA));
    auto radial = [&](const std::string& s) {
        // s (x^2 + y^2 + mu)/I_x * (I_x - x^2 - y^2)/I_x
        return mul(mul(state_ref(s), add(r2, constant(-0.5 * nA)), 1.0 * nA),
                   sub(constant(1.0 * nA), r2), 1.0 * nA);
    };
    sys.equations["x"] = add(neg(state_ref("y")), radial("x"));
    sys.equations["y"] = add(state_ref("x"), radial("y"));
    sys.validate();
    return sys;
}

DynSystem builtin_synapse() {
    DynSystem sys;
    sys.name = "synapse";
    sys.regime = Regime::subthreshold;
    sys.device.regime = Regime::subthreshold;
    sys.states = {{"x", 0.05, 1.0 * nA, 0.0}};
    sys.inputs = {{"I", {DriveSpec::Kind::step, 1.0 * nA, 0.0}}};
    sys.equations["x"] = add(neg(state_ref("x")), input_ref("I"));
    sys.validate();
    return sys;
}

DynSystem builtin_network(NetworkTopology topology) {
    DynSystem sys;
    sys.name = topology == NetworkTopology::a   ? "network-a"
               : topology == NetworkTopology::b ? "network-b"
                                                : "network-c";
    sys.regime = Regime::subthreshold;
    sys.device.regime = Regime::subthreshold;
    sys.device.sub.v_b = 1.2;

    const double v_init[3] = {-1.2 * nA, -0.9 * nA, -0.6 * nA};
    const double w_init[3] = {-0.6 * nA, -0.4 * nA, -0.2 * nA};
    for (int i = 0; i < 3; ++i) {
        const std::string n = std::to_string(i + 1);
        sys.states.push_back({"v" + n, 0.65, 80 * pA, v_init[i]});
        sys.states.push_back({"w" + n, 8.125, 6.4 * pA, w_init[i]});
        sys.inputs.push_back({"I" + n, {DriveSpec::Kind::constant, 0.6 * nA}});
    }
    // One synapse per directed pair; s<j><i> couples neuron j into neuron i.
    for (int j = 1; j <= 3; ++j)
        for (int i = 1; i <= 3; ++i) {
            if (i == j) continue;
            sys.states.push_back({"s" + std::to_string(j) + std::to_string(i), 0.05,
                                  1.0 * nA, v_init[j - 1]});
        }

    auto excitatory = [&](int j, int i) {
        switch (topology) {
            case NetworkTopology::a:
                return true;
            case NetworkTopology::b:
                return (j == 1 && i == 2) || (j == 2 && i == 1);
            case NetworkTopology::c:
                return false;
        }
        return false;
    };

    for (int i = 1; i <= 3; ++i) {
        const std::string n = std::to_string(i);
        ExprPtr fv = fhn_fv("v" + n, "w" + n, "I" + n, nA);
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            const std::string s = "s" + std::to_string(j) + std::to_string(i);
            ExprPtr coupling = mul(constant(0.01 * nA), state_ref(s), 1.0 * nA);
            fv = excitatory(j, i) ? add(std::move(fv), std::move(coupling))
                                  : sub(std::move(fv), std::move(coupling));
        }
        sys.equations["v" + n] = std::move(fv);
        sys.equations["w" + n] = fhn_fw("v" + n, "w" + n, nA);
        for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            const std::string s = "s" + std::to_string(j) + std::to_string(i);
            sys.equations[s] =
                add(neg(state_ref(s)), state_ref("v" + std::to_string(j)));
        }
    }
    sys.validate();
    return sys;
}

DynSystem builtin_fhn_si() {
    DynSystem sys;
    sys.name = "fhn-si";
    sys.regime = Regime::strong_inversion;
    sys.device.regime = Regime::strong_inversion;
    // Same dynamics as builtin_fhn with every current scaled by 1000.
    sys.states = {{"v", 0.65, 80 * nA, -1.2 * uA},
                  {"w", 8.125, 6.4 * nA, -0.6 * uA}};
    sys.inputs = {{"Iext", {DriveSpec::Kind::constant, 0.6 * uA}}};
    sys.equations["v"] = fhn_fv("v", "w", "Iext", uA);
    sys.equations["w"] = fhn_fw("v", "w", uA);
    sys.validate();
    return sys;
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "fhn", "lorenz", "hopf", "synapse", "network-a", "network-b", "network-c",
        "fhn-si"};
    return names;
}

DynSystem builtin_by_name(const std::string& name) {
    if (name == "fhn") return builtin_fhn();
    if (name == "lorenz") return builtin_lorenz();
    if (name == "hopf") return builtin_hopf();
    if (name == "synapse") return builtin_synapse();
    if (name == "network-a") return builtin_network(NetworkTopology::a);
    if (name == "network-b") return builtin_network(NetworkTopology::b);
    if (name == "network-c") return builtin_network(NetworkTopology::c);
    if (name == "fhn-si") return builtin_fhn_si();
    throw ValidationError("unknown builtin system '" + name + "'");
}

std::string builtin_description(const std::string& name) {
    static const std::map<std::string, std::string> desc = {
        {"fhn", "FitzHugh-Nagumo neuron, log-domain, 1 V <-> 1 nA"},
        {"lorenz", "Lorenz attractor (sigma=10, rho=28, beta=8/3), log-domain"},
        {"hopf", "Hopf oscillator, subcritical (mu = -0.5 nA), bistable"},
        {"synapse", "first-order low-pass synapse, tau = 50 ms"},
        {"network-a", "3 FHN neurons, all-excitatory synaptic coupling"},
        {"network-b", "3 FHN neurons, 1<->2 excitatory, others inhibitory"},
        {"network-c", "3 FHN neurons, all-inhibitory synaptic coupling"},
        {"fhn-si", "FitzHugh-Nagumo neuron, strong inversion, 1 V <-> 1 uA"},
    };
    auto it = desc.find(name);
    if (it == desc.end()) throw ValidationError("unknown builtin system '" + name + "'");
    return it->second;
}

}  // namespace nbds
