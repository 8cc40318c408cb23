#include "nbds/core.hpp"

namespace nbds {

double solve_capacitor(double tau, double i_dc, const Device& device,
                       MappingConstant mapping) {
    if (tau <= 0 || i_dc <= 0)
        throw ValidationError("tau and i_dc must be positive");
    if (device.regime == Regime::subthreshold)
        return tau * i_dc / device.sub.slope_voltage();
    const double beta = device.si.beta_si();
    const double denom = mapping == MappingConstant::paper ? 2.0 + beta : 1.0 + beta;
    return 2.0 * tau * std::sqrt(device.si.k_n) * i_dc / denom;
}

double compute_icin(const BilateralSignal& f_rails, double i_a, double i_b,
                    double i_dc, Regime regime) {
    if (i_a <= 0 && i_b <= 0 && regime == Regime::subthreshold)
        throw DenominatorUnderflow("branch currents not positive");
    const double denom = regime == Regime::subthreshold
                             ? i_a + i_b
                             : std::sqrt(i_a) + std::sqrt(i_b);
    if (denom < kDenominatorFloor)
        throw DenominatorUnderflow("core left its valid operating region");
    return f_rails.value() * i_dc / denom;
}

double core_derivative(CoreState& state, double i_cin, double c, bool clipping,
                       double v_lo, double v_hi) {
    const double d = i_cin / c;
    if (clipping) {
        if ((state.v_c <= v_lo && d < 0) || (state.v_c >= v_hi && d > 0)) {
            state.saturation_flag = true;
            return 0.0;
        }
    }
    return d;
}

CoreState init_core(const Device& device, double i_out_init) {
    CoreState s;
    s.v_c = device.regime == Regime::subthreshold
                ? v_initial(device.sub, i_out_init)
                : v_initial_si(device.si, i_out_init);
    return s;
}

CoreReadout read_out(const CoreState& state, const Device& device) {
    CoreReadout r;
    r.branches = device.regime == Regime::subthreshold
                     ? branch_currents_sub(device.sub, state.v_c)
                     : branch_currents_si(device.si, state.v_c);
    return r;
}

}  // namespace nbds
