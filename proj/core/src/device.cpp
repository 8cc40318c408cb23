#include "nbds/device.hpp"

#include "nbds/errors.hpp"

namespace nbds {

void SubthresholdParams::validate() const {
    if (n_n <= 0 || n_p <= 0) throw ValidationError("slope factors must be positive");
    if (v_t <= 0) throw ValidationError("thermal voltage must be positive");
    if (i_sn <= 0 || i_sp <= 0) throw ValidationError("leakage scales must be positive");
    if (v_b <= 0 || v_b >= v_dd) throw ValidationError("require 0 < V_b < V_DD");
}

void StrongInversionParams::validate() const {
    if (k_n <= 0 || k_p <= 0) throw ValidationError("square-law gains must be positive");
    if (v_th <= 0) throw ValidationError("threshold voltage must be positive");
    if (v_b <= 2 * v_th) throw ValidationError("require V_b > 2 V_th");
}

double beta_sub(const SubthresholdParams& p) {
    const double ratio = std::log(p.i_sn / p.i_sp);
    return std::sqrt(p.i_sn * p.i_sp) *
           std::exp((p.n_n - p.n_p) / (2.0 * (p.n_n + p.n_p)) * ratio);
}

BranchCurrents branch_currents_sub(const SubthresholdParams& p, double v_c) {
    const double beta = beta_sub(p);
    const double d = p.slope_voltage();
    BranchCurrents out;
    out.i_a = beta * guarded_exp((p.v_b - v_c) / d, &out.clipped);
    out.i_b = beta * guarded_exp(v_c / d, &out.clipped);
    return out;
}

double i_out_sub(const SubthresholdParams& p, double v_c) {
    return branch_currents_sub(p, v_c).i_out();
}

double v_c_min(const SubthresholdParams& p) {
    const double a = p.alpha();
    return (1.0 + a) / 3.0 * 4.0 * p.v_t + (2.0 - a) / 3.0 * p.v_b +
           p.n_p * p.v_t * std::log(p.i_sp / p.i_sn);
}

double v_c_min_m4(const SubthresholdParams& p) {
    const double a = p.alpha();
    return (1.0 + a) / a * 4.0 * p.v_t + p.n_n * p.v_t * std::log(p.i_sp / p.i_sn);
}

double v_c_max(const SubthresholdParams& p) {
    return (p.n_n + p.n_p) / (3.0 * p.n_p) * (p.v_dd - 4.0 * p.v_t) +
           p.n_n * p.v_t * std::log(p.i_sp / p.i_sn);
}

double i_out_min(const SubthresholdParams& p) {
    // Printed form of the bound omits V_T; here the exponents carry the full
    // slope voltage so that i_out_min == i_out_sub(v_c_min) identically.
    const double a = p.alpha();
    const double d = p.slope_voltage();
    const double gamma = std::exp((4.0 / 3.0 * (1.0 + a) +
                                   p.n_p * std::log(p.i_sp / p.i_sn)) /
                                  (p.n_n + p.n_p));
    const double beta = beta_sub(p);
    return beta * (gamma * std::exp((2.0 - a) * p.v_b / (3.0 * d)) -
                   std::exp((1.0 + a) * p.v_b / (3.0 * d)) / gamma);
}

double v_initial(const SubthresholdParams& p, double i_out_init) {
    const double beta = beta_sub(p);
    const double d = p.slope_voltage();
    const double r = i_out_init / beta;
    const double zeta = 0.5 * (r + std::sqrt(r * r + 4.0 * std::exp(p.v_b / d)));
    return d * std::log(zeta);
}

BranchCurrents branch_currents_si(const StrongInversionParams& p, double v_c) {
    const double denom = 1.0 + p.beta_si();
    BranchCurrents out;
    double ov_a = p.v_b - v_c - 2.0 * p.v_th;
    double ov_b = v_c - 2.0 * p.v_th;
    if (ov_a < 0) { ov_a = 0; out.clipped = true; }
    if (ov_b < 0) { ov_b = 0; out.clipped = true; }
    out.i_a = p.k_n * (ov_a / denom) * (ov_a / denom);
    out.i_b = p.k_n * (ov_b / denom) * (ov_b / denom);
    return out;
}

double i_out_si(const StrongInversionParams& p, double v_c) {
    return branch_currents_si(p, v_c).i_out();
}

double v_initial_si(const StrongInversionParams& p, double i_out_init) {
    double lo = 2.0 * p.v_th;
    double hi = p.v_b - 2.0 * p.v_th;
    if (i_out_init < i_out_si(p, lo) || i_out_init > i_out_si(p, hi))
        throw OutOfRange("initial output current outside representable range");
    // i_out_si is monotone increasing on [lo, hi].
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (i_out_si(p, mid) < i_out_init)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nbds
