#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nbds/core.hpp"
#include "nbds/errors.hpp"

namespace nbds {

/// Reference current implied by a bare '/ const' in the DSL: x / s reads as
/// x * 1 nA / s, keeping every node a current.
inline constexpr double kDivReferenceCurrent = 1e-9;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Right-hand-side expression tree over currents. Every product or square
/// carries a strictly positive scale current restoring current dimensions.
struct Expr {
    enum class Kind {
        state_ref,
        input_ref,
        constant,
        neg,
        add,
        sub,
        mul,
        square,
        div_const,
    };

    Kind kind;
    std::string name;    // state_ref / input_ref
    double value = 0.0;  // constant [A]
    double scale = 0.0;  // mul / square / div_const [A]
    ExprPtr lhs, rhs;
};

ExprPtr state_ref(std::string name);
ExprPtr input_ref(std::string name);
ExprPtr constant(double amperes);
ExprPtr neg(ExprPtr x);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r, double scale);
ExprPtr square(ExprPtr x, double scale);
ExprPtr div_const(ExprPtr x, double scale);

bool expr_equal(const Expr& a, const Expr& b);

/// External stimulus waveform.
struct DriveSpec {
    enum class Kind { constant, step, pulse, ramp, pwl };

    Kind kind = Kind::constant;
    double amplitude = 0.0;  ///< [A] (constant/step/pulse)
    double t0 = 0.0;         ///< [s]
    double width = 0.0;      ///< [s] (pulse)
    double rate = 0.0;       ///< [A/s] (ramp)
    std::vector<std::pair<double, double>> points;  ///< (t, A), strictly increasing t

    double value(double t) const;
    void validate() const;
};

bool operator==(const DriveSpec& a, const DriveSpec& b);

struct StateDecl {
    std::string name;
    double tau = 0.0;   ///< [s]
    double i_dc = 0.0;  ///< [A]
    double init = 0.0;  ///< initial output current [A]
};

struct InputDecl {
    std::string name;
    DriveSpec drive;
};

/// Validated intermediate representation of a bilateral dynamical system:
/// tau_i dx_i/dt = F_i(x, u).
struct DynSystem {
    std::string name;
    Regime regime = Regime::subthreshold;
    Device device{};
    std::vector<StateDecl> states;
    std::vector<InputDecl> inputs;
    std::map<std::string, ExprPtr> equations;

    const StateDecl* find_state(const std::string& n) const;
    const InputDecl* find_input(const std::string& n) const;
    double tau_min() const;
    double tau_max() const;

    /// Throws ValidationError on unresolved names, missing/extra equations,
    /// or nonpositive time constants and scale currents.
    void validate() const;
};

bool operator==(const DynSystem& a, const DynSystem& b);

/// Reference semantics of F: plain real-valued evaluation, ignoring rails.
double eval_expr(const Expr& e, const std::map<std::string, double>& state_values,
                 const std::map<std::string, double>& input_values);

/// Pretty-printer emitting the DSL grammar; parse(render(sys)) == sys.
std::string render(const DynSystem& sys);
std::string render_expr(const Expr& e);

}  // namespace nbds
