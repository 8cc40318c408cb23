#pragma once

#include <cmath>

namespace nbds {

/// Saturation bound for exponent arguments. Beyond this the exponential is
/// evaluated at the bound and the sample is flagged instead of overflowing.
inline constexpr double kExpArgLimit = 200.0;

/// exp() with the argument clamped to +/-kExpArgLimit. Sets *clipped when the
/// clamp engaged.
inline double guarded_exp(double arg, bool* clipped = nullptr) {
    if (arg > kExpArgLimit) {
        if (clipped) *clipped = true;
        arg = kExpArgLimit;
    } else if (arg < -kExpArgLimit) {
        if (clipped) *clipped = true;
        arg = -kExpArgLimit;
    }
    return std::exp(arg);
}

/// Subthreshold (log-domain) process and bias constants.
struct SubthresholdParams {
    double n_n = 1.3;      ///< NMOS slope factor
    double n_p = 1.2;      ///< PMOS slope factor
    double v_t = 0.026;    ///< thermal voltage [V]
    double i_sn = 1e-15;   ///< NMOS leakage scale, W/L folded in [A]
    double i_sp = 1e-15;   ///< PMOS leakage scale [A]
    double v_dd = 3.3;     ///< supply [V]
    double v_b = 1.2;      ///< core bias [V]

    double alpha() const { return n_p / n_n; }
    /// (n_n + n_p) * V_T, the denominator of every core exponent [V].
    double slope_voltage() const { return (n_n + n_p) * v_t; }
    void validate() const;
};

/// Strong-inversion (square-law) process and bias constants.
struct StrongInversionParams {
    double k_n = 100e-6;   ///< NMOS gain 1/2 mu_n Cox W/L [A/V^2]
    double k_p = 100e-6;   ///< PMOS gain [A/V^2]
    double v_th = 0.5;     ///< threshold voltage [V]
    double v_dd = 3.3;     ///< supply [V]
    double v_b = 3.3;      ///< core bias [V]

    double beta_si() const { return std::sqrt(k_n / k_p); }
    void validate() const;
};

/// The two branch currents of a main core, plus a flag raised when an
/// exponent clamp or a zero-overdrive clip fired during evaluation.
struct BranchCurrents {
    double i_a = 0.0;
    double i_b = 0.0;
    bool clipped = false;
    double i_out() const { return i_b - i_a; }
};

/// Effective leakage prefactor beta = sqrt(I_Sn I_Sp) exp(...) of the branch
/// current law. Equals I_Sn when the two leakage scales match.
double beta_sub(const SubthresholdParams& p);

/// Branch currents of the subthreshold core at capacitor voltage v_c.
BranchCurrents branch_currents_sub(const SubthresholdParams& p, double v_c);

/// I_out = I_B - I_A; zero at v_c = V_b/2, strictly increasing in v_c.
double i_out_sub(const SubthresholdParams& p, double v_c);

/// Minimum capacitor voltage keeping M2 in saturation (the binding limit
/// whenever V_b > 16 V_T).
double v_c_min(const SubthresholdParams& p);

/// Minimum capacitor voltage keeping M4 in saturation.
double v_c_min_m4(const SubthresholdParams& p);

/// Maximum capacitor voltage keeping M3/M4 in saturation.
double v_c_max(const SubthresholdParams& p);

/// Lower bound of the output dynamic range: i_out_sub evaluated at v_c_min.
/// Held in closed form, identical to the substitution.
double i_out_min(const SubthresholdParams& p);

/// Capacitor preset voltage producing a desired initial output current.
/// Exact functional inverse of i_out_sub.
double v_initial(const SubthresholdParams& p, double i_out_init);

/// Branch currents of the strong-inversion core. Overdrives clamp at zero
/// (device off) and raise the clipped flag.
BranchCurrents branch_currents_si(const StrongInversionParams& p, double v_c);

double i_out_si(const StrongInversionParams& p, double v_c);

/// Inverse of i_out_si by bisection on [2 V_th, V_b - 2 V_th], 1 nV tolerance.
double v_initial_si(const StrongInversionParams& p, double i_out_init);

}  // namespace nbds
