#include "nbds/sim.hpp"

#include <cmath>
#include <memory>

#include "nbds/errors.hpp"

namespace nbds {

double default_dt(const DynSystem& sys) { return sys.tau_min() / 2000.0; }
double default_t_end(const DynSystem& sys) { return 40.0 * sys.tau_max(); }

namespace {

long step_count(double dt, double t_end) {
    if (dt <= 0 || t_end <= 0)
        throw ValidationError("dt and t_end must be positive");
    return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

// Expression tree with name lookups resolved to indices, for the hot loop.
struct CompiledExpr {
    Expr::Kind kind;
    int index = 0;
    double value = 0.0;
    double scale = 0.0;
    std::unique_ptr<CompiledExpr> lhs, rhs;

    double eval(const double* x, const double* u) const {
        switch (kind) {
            case Expr::Kind::state_ref: return x[index];
            case Expr::Kind::input_ref: return u[index];
            case Expr::Kind::constant: return value;
            case Expr::Kind::neg: return -lhs->eval(x, u);
            case Expr::Kind::add: return lhs->eval(x, u) + rhs->eval(x, u);
            case Expr::Kind::sub: return lhs->eval(x, u) - rhs->eval(x, u);
            case Expr::Kind::mul: return lhs->eval(x, u) * rhs->eval(x, u) / scale;
            case Expr::Kind::square: {
                const double v = lhs->eval(x, u);
                return v * v / scale;
            }
            case Expr::Kind::div_const:
                return lhs->eval(x, u) * kDivReferenceCurrent / scale;
        }
        return 0.0;
    }
};

std::unique_ptr<CompiledExpr> compile(const Expr& e, const DynSystem& sys) {
    auto c = std::make_unique<CompiledExpr>();
    c->kind = e.kind;
    c->value = e.value;
    c->scale = e.scale;
    if (e.kind == Expr::Kind::state_ref) {
        for (size_t i = 0; i < sys.states.size(); ++i)
            if (sys.states[i].name == e.name) c->index = static_cast<int>(i);
    } else if (e.kind == Expr::Kind::input_ref) {
        for (size_t i = 0; i < sys.inputs.size(); ++i)
            if (sys.inputs[i].name == e.name) c->index = static_cast<int>(i);
    }
    if (e.lhs) c->lhs = compile(*e.lhs, sys);
    if (e.rhs) c->rhs = compile(*e.rhs, sys);
    return c;
}

}  // namespace

Waveform integrate_math(const DynSystem& sys, const SimConfig& cfg) {
    sys.validate();
    const double dt = cfg.dt > 0 ? cfg.dt : default_dt(sys);
    const double t_end = cfg.t_end > 0 ? cfg.t_end : default_t_end(sys);
    const long steps = step_count(dt, t_end);
    const size_t n = sys.states.size();
    const size_t m = sys.inputs.size();

    std::vector<std::unique_ptr<CompiledExpr>> f;
    std::vector<double> inv_tau;
    for (const auto& s : sys.states) {
        f.push_back(compile(*sys.equations.at(s.name), sys));
        inv_tau.push_back(1.0 / s.tau);
    }

    std::vector<double> x(n), u(m), k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (size_t i = 0; i < n; ++i) x[i] = sys.states[i].init;

    auto deriv = [&](double t, const std::vector<double>& xs, std::vector<double>& dx) {
        for (size_t j = 0; j < m; ++j) u[j] = sys.inputs[j].drive.value(t);
        for (size_t i = 0; i < n; ++i)
            dx[i] = f[i]->eval(xs.data(), u.data()) * inv_tau[i];
    };

    Waveform w;
    for (const auto& s : sys.states) w.names.push_back(s.name);
    w.append(0.0, x, false);

    for (long s = 0; s < steps; ++s) {
        const double t = s * dt;
        if (cfg.integrator == Integrator::euler) {
            deriv(t, x, k1);
            for (size_t i = 0; i < n; ++i) x[i] += dt * k1[i];
        } else {
            deriv(t, x, k1);
            for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
            deriv(t + 0.5 * dt, tmp, k2);
            for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
            deriv(t + 0.5 * dt, tmp, k3);
            for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
            deriv(t + dt, tmp, k4);
            for (size_t i = 0; i < n; ++i)
                x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        for (size_t i = 0; i < n; ++i)
            if (!std::isfinite(x[i]))
                throw NonFiniteError((s + 1) * dt, sys.states[i].name);
        if ((s + 1) % cfg.record_stride == 0 || s + 1 == steps)
            w.append((s + 1) * dt, x, false);
    }
    return w;
}

namespace {

struct VcBounds {
    double lo, hi;
};

VcBounds vc_bounds(const Device& d) {
    if (d.regime == Regime::subthreshold)
        return {std::max(v_c_min(d.sub), v_c_min_m4(d.sub)), v_c_max(d.sub)};
    return {2.0 * d.si.v_th, d.si.v_b - 2.0 * d.si.v_th};
}

}  // namespace

Waveform integrate_circuit(const Netlist& n, const SimConfig& cfg) {
    n.device.validate();
    const size_t nc = n.cores.size();
    const size_t m = n.input_names.size();
    double tau_min = n.cores.front().mapping.tau, tau_max = tau_min;
    for (const auto& c : n.cores) {
        tau_min = std::min(tau_min, c.mapping.tau);
        tau_max = std::max(tau_max, c.mapping.tau);
    }
    const double dt = cfg.dt > 0 ? cfg.dt : tau_min / 2000.0;
    const double t_end = cfg.t_end > 0 ? cfg.t_end : 40.0 * tau_max;
    const long steps = step_count(dt, t_end);
    const VcBounds bounds = vc_bounds(n.device);

    std::vector<double> vc(nc);
    for (size_t i = 0; i < nc; ++i)
        vc[i] = init_core(n.device, n.cores[i].init).v_c;

    NetlistEvaluator ev(n);
    std::vector<BilateralSignal> rails(nc), f(nc);
    std::vector<double> u(m), i_a(nc), i_b(nc);
    bool step_sat = false;

    auto deriv = [&](double t, const std::vector<double>& v, std::vector<double>& dv) {
        for (size_t i = 0; i < nc; ++i) {
            CoreState cs{v[i], false};
            const CoreReadout r = read_out(cs, n.device);
            if (r.branches.clipped) step_sat = true;
            rails[i] = r.rails();
            i_a[i] = r.branches.i_a;
            i_b[i] = r.branches.i_b;
        }
        for (size_t j = 0; j < m; ++j) u[j] = n.input_drives[j].value(t);
        ev.eval(rails, u, f);
        for (size_t i = 0; i < nc; ++i) {
            const double icin = compute_icin(f[i], i_a[i], i_b[i],
                                             n.cores[i].mapping.i_dc, n.regime);
            CoreState cs{v[i], false};
            dv[i] = core_derivative(cs, icin, n.cores[i].mapping.c, cfg.clipping,
                                    bounds.lo, bounds.hi);
            if (cs.saturation_flag) step_sat = true;
        }
    };

    Waveform w;
    for (const auto& c : n.cores) w.names.push_back(c.state);
    std::vector<double> iout(nc);
    auto record = [&](double t, bool sat) {
        for (size_t i = 0; i < nc; ++i)
            iout[i] = read_out(CoreState{vc[i], false}, n.device).i_out();
        w.append(t, iout, sat);
    };
    record(0.0, false);

    std::vector<double> k1(nc), k2(nc), k3(nc), k4(nc), tmp(nc);
    for (long s = 0; s < steps; ++s) {
        const double t = s * dt;
        step_sat = false;
        if (cfg.integrator == Integrator::euler) {
            deriv(t, vc, k1);
            for (size_t i = 0; i < nc; ++i) vc[i] += dt * k1[i];
        } else {
            deriv(t, vc, k1);
            for (size_t i = 0; i < nc; ++i) tmp[i] = vc[i] + 0.5 * dt * k1[i];
            deriv(t + 0.5 * dt, tmp, k2);
            for (size_t i = 0; i < nc; ++i) tmp[i] = vc[i] + 0.5 * dt * k2[i];
            deriv(t + 0.5 * dt, tmp, k3);
            for (size_t i = 0; i < nc; ++i) tmp[i] = vc[i] + dt * k3[i];
            deriv(t + dt, tmp, k4);
            for (size_t i = 0; i < nc; ++i)
                vc[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (cfg.clipping)
            for (size_t i = 0; i < nc; ++i) {
                if (vc[i] < bounds.lo) { vc[i] = bounds.lo; step_sat = true; }
                if (vc[i] > bounds.hi) { vc[i] = bounds.hi; step_sat = true; }
            }
        for (size_t i = 0; i < nc; ++i)
            if (!std::isfinite(vc[i]))
                throw NonFiniteError((s + 1) * dt, n.cores[i].state);
        if ((s + 1) % cfg.record_stride == 0 || s + 1 == steps)
            record((s + 1) * dt, step_sat);
    }
    return w;
}

double time_rescale(const Netlist& n) {
    if (n.regime != Regime::strong_inversion ||
        n.cores.empty() ||
        n.cores.front().mapping.mapping_constant != MappingConstant::paper)
        return 1.0;
    const double beta = n.device.si.beta_si();
    return (2.0 + beta) / (1.0 + beta);
}

}  // namespace nbds
