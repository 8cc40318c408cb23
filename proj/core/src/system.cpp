#include "nbds/system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace nbds {

namespace {

ExprPtr node(Expr e) { return std::make_shared<Expr>(std::move(e)); }

void require_scale(double scale) {
    if (!(scale > 0)) throw ValidationError("product requires a strictly positive scale current");
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExprPtr state_ref(std::string name) {
    return node({Expr::Kind::state_ref, std::move(name)});
}
ExprPtr input_ref(std::string name) {
    return node({Expr::Kind::input_ref, std::move(name)});
}
ExprPtr constant(double amperes) {
    Expr e{Expr::Kind::constant};
    e.value = amperes;
    return node(std::move(e));
}
ExprPtr neg(ExprPtr x) {
    Expr e{Expr::Kind::neg};
    e.lhs = std::move(x);
    return node(std::move(e));
}
ExprPtr add(ExprPtr l, ExprPtr r) {
    Expr e{Expr::Kind::add};
    e.lhs = std::move(l);
    e.rhs = std::move(r);
    return node(std::move(e));
}
ExprPtr sub(ExprPtr l, ExprPtr r) {
    Expr e{Expr::Kind::sub};
    e.lhs = std::move(l);
    e.rhs = std::move(r);
    return node(std::move(e));
}
ExprPtr mul(ExprPtr l, ExprPtr r, double scale) {
    require_scale(scale);
    Expr e{Expr::Kind::mul};
    e.lhs = std::move(l);
    e.rhs = std::move(r);
    e.scale = scale;
    return node(std::move(e));
}
ExprPtr square(ExprPtr x, double scale) {
    require_scale(scale);
    Expr e{Expr::Kind::square};
    e.lhs = std::move(x);
    e.scale = scale;
    return node(std::move(e));
}
ExprPtr div_const(ExprPtr x, double scale) {
    require_scale(scale);
    Expr e{Expr::Kind::div_const};
    e.lhs = std::move(x);
    e.scale = scale;
    return node(std::move(e));
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.name != b.name || a.value != b.value || a.scale != b.scale)
        return false;
    if (!a.lhs != !b.lhs || !a.rhs != !b.rhs) return false;
    if (a.lhs && !expr_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !expr_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

double DriveSpec::value(double t) const {
    switch (kind) {
        case Kind::constant:
            return amplitude;
        case Kind::step:
            return t >= t0 ? amplitude : 0.0;
        case Kind::pulse:
            return (t >= t0 && t < t0 + width) ? amplitude : 0.0;
        case Kind::ramp:
            return rate * std::max(0.0, t);
        case Kind::pwl: {
            if (points.empty()) return 0.0;
            if (t <= points.front().first) return points.front().second;
            if (t >= points.back().first) return points.back().second;
            for (size_t i = 1; i < points.size(); ++i) {
                if (t <= points[i].first) {
                    const auto& [t0_, a0] = points[i - 1];
                    const auto& [t1, a1] = points[i];
                    return a0 + (a1 - a0) * (t - t0_) / (t1 - t0_);
                }
            }
            return points.back().second;
        }
    }
    return 0.0;
}

void DriveSpec::validate() const {
    if (t0 < 0 || width < 0) throw ValidationError("drive times must be non-negative");
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].first < 0) throw ValidationError("pwl times must be non-negative");
        if (i > 0 && points[i].first <= points[i - 1].first)
            throw ValidationError("pwl times must be strictly increasing");
    }
}

bool operator==(const DriveSpec& a, const DriveSpec& b) {
    return a.kind == b.kind && a.amplitude == b.amplitude && a.t0 == b.t0 &&
           a.width == b.width && a.rate == b.rate && a.points == b.points;
}

const StateDecl* DynSystem::find_state(const std::string& n) const {
    for (const auto& s : states)
        if (s.name == n) return &s;
    return nullptr;
}

const InputDecl* DynSystem::find_input(const std::string& n) const {
    for (const auto& i : inputs)
        if (i.name == n) return &i;
    return nullptr;
}

double DynSystem::tau_min() const {
    double m = states.empty() ? 0.0 : states.front().tau;
    for (const auto& s : states) m = std::min(m, s.tau);
    return m;
}

double DynSystem::tau_max() const {
    double m = 0.0;
    for (const auto& s : states) m = std::max(m, s.tau);
    return m;
}

namespace {

void validate_expr(const Expr& e, const DynSystem& sys) {
    switch (e.kind) {
        case Expr::Kind::state_ref:
            if (!sys.find_state(e.name))
                throw ValidationError("unresolved state reference '" + e.name + "'");
            return;
        case Expr::Kind::input_ref:
            if (!sys.find_input(e.name))
                throw ValidationError("unresolved input reference '" + e.name + "'");
            return;
        case Expr::Kind::constant:
            return;
        case Expr::Kind::mul:
        case Expr::Kind::square:
        case Expr::Kind::div_const:
            require_scale(e.scale);
            break;
        default:
            break;
    }
    if (e.lhs) validate_expr(*e.lhs, sys);
    if (e.rhs) validate_expr(*e.rhs, sys);
}

}  // namespace

void DynSystem::validate() const {
    if (states.empty()) throw ValidationError("system has no states");
    std::set<std::string> names;
    for (const auto& s : states) {
        if (!names.insert(s.name).second)
            throw ValidationError("duplicate state '" + s.name + "'");
        if (!(s.tau > 0)) throw ValidationError("tau must be positive for '" + s.name + "'");
        if (!(s.i_dc > 0)) throw ValidationError("idc must be positive for '" + s.name + "'");
    }
    for (const auto& i : inputs) {
        if (names.count(i.name)) throw ValidationError("input shadows state '" + i.name + "'");
        i.drive.validate();
    }
    if (equations.size() != states.size())
        throw ValidationError("expected exactly one equation per state");
    for (const auto& s : states) {
        auto it = equations.find(s.name);
        if (it == equations.end())
            throw ValidationError("missing equation for state '" + s.name + "'");
        validate_expr(*it->second, *this);
    }
    device.validate();
}

bool operator==(const DynSystem& a, const DynSystem& b) {
    // Device parameters are bound at synthesis time, not part of the source
    // identity the pretty-printer round-trips.
    if (a.name != b.name || a.regime != b.regime) return false;
    if (a.states.size() != b.states.size() || a.inputs.size() != b.inputs.size())
        return false;
    for (size_t i = 0; i < a.states.size(); ++i) {
        const auto& x = a.states[i];
        const auto& y = b.states[i];
        if (x.name != y.name || x.tau != y.tau || x.i_dc != y.i_dc || x.init != y.init)
            return false;
    }
    for (size_t i = 0; i < a.inputs.size(); ++i) {
        if (a.inputs[i].name != b.inputs[i].name) return false;
        if (!(a.inputs[i].drive == b.inputs[i].drive)) return false;
    }
    if (a.equations.size() != b.equations.size()) return false;
    for (const auto& [k, v] : a.equations) {
        auto it = b.equations.find(k);
        if (it == b.equations.end() || !expr_equal(*v, *it->second)) return false;
    }
    return true;
}

double eval_expr(const Expr& e, const std::map<std::string, double>& state_values,
                 const std::map<std::string, double>& input_values) {
    switch (e.kind) {
        case Expr::Kind::state_ref: {
            auto it = state_values.find(e.name);
            if (it == state_values.end())
                throw ValidationError("no value for state '" + e.name + "'");
            return it->second;
        }
        case Expr::Kind::input_ref: {
            auto it = input_values.find(e.name);
            if (it == input_values.end())
                throw ValidationError("no value for input '" + e.name + "'");
            return it->second;
        }
        case Expr::Kind::constant:
            return e.value;
        case Expr::Kind::neg:
            return -eval_expr(*e.lhs, state_values, input_values);
        case Expr::Kind::add:
            return eval_expr(*e.lhs, state_values, input_values) +
                   eval_expr(*e.rhs, state_values, input_values);
        case Expr::Kind::sub:
            return eval_expr(*e.lhs, state_values, input_values) -
                   eval_expr(*e.rhs, state_values, input_values);
        case Expr::Kind::mul:
            return eval_expr(*e.lhs, state_values, input_values) *
                   eval_expr(*e.rhs, state_values, input_values) / e.scale;
        case Expr::Kind::square: {
            const double v = eval_expr(*e.lhs, state_values, input_values);
            return v * v / e.scale;
        }
        case Expr::Kind::div_const:
            return eval_expr(*e.lhs, state_values, input_values) *
                   kDivReferenceCurrent / e.scale;
    }
    return 0.0;
}

namespace {

std::string current_lit(double v) { return fmt_num(v) + "A"; }

std::string render_factor(const Expr& e);

// term level: mul / div chains, left-associative
std::string render_term(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::mul:
            return render_term(*e.lhs) + " * " + render_factor(*e.rhs) + " / " +
                   current_lit(e.scale);
        case Expr::Kind::div_const:
            return render_term(*e.lhs) + " / " + current_lit(e.scale);
        default:
            return render_factor(e);
    }
}

std::string render_factor(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::state_ref:
        case Expr::Kind::input_ref:
            return e.name;
        case Expr::Kind::constant:
            return current_lit(e.value);
        case Expr::Kind::neg:
            return "-" + render_factor(*e.lhs);
        case Expr::Kind::square:
            return "sq(" + render_expr(*e.lhs) + " / " + current_lit(e.scale) + ")";
        default:
            return "(" + render_expr(e) + ")";
    }
}

}  // namespace

std::string render_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::add:
            return render_expr(*e.lhs) + " + " + render_term(*e.rhs);
        case Expr::Kind::sub:
            return render_expr(*e.lhs) + " - " + render_term(*e.rhs);
        default:
            return render_term(e);
    }
}

std::string render(const DynSystem& sys) {
    std::ostringstream out;
    out << "system " << sys.name << "\n";
    out << "regime "
        << (sys.regime == Regime::subthreshold ? "subthreshold" : "strong_inversion")
        << "\n";
    for (const auto& s : sys.states)
        out << "state " << s.name << " tau=" << fmt_num(s.tau)
            << "s idc=" << fmt_num(s.i_dc) << "A init=" << fmt_num(s.init) << "A\n";
    for (const auto& i : sys.inputs) {
        out << "input " << i.name << " ";
        const auto& d = i.drive;
        switch (d.kind) {
            case DriveSpec::Kind::constant:
                out << "constant " << current_lit(d.amplitude);
                break;
            case DriveSpec::Kind::step:
                out << "step " << fmt_num(d.t0) << "s " << current_lit(d.amplitude);
                break;
            case DriveSpec::Kind::pulse:
                out << "pulse " << fmt_num(d.t0) << "s " << fmt_num(d.width) << "s "
                    << current_lit(d.amplitude);
                break;
            case DriveSpec::Kind::ramp:
                out << "ramp " << current_lit(d.rate);
                break;
            case DriveSpec::Kind::pwl: {
                out << "pwl";
                for (const auto& [t, a] : d.points)
                    out << " " << fmt_num(t) << "s " << current_lit(a);
                break;
            }
        }
        out << "\n";
    }
    for (const auto& s : sys.states)
        out << "eq " << s.name << " = " << render_expr(*sys.equations.at(s.name))
            << "\n";
    return out.str();
}

}  // namespace nbds
