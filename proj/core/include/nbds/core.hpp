#pragma once

#include <cmath>

#include "nbds/device.hpp"
#include "nbds/errors.hpp"
#include "nbds/signal.hpp"

namespace nbds {

enum class Regime { subthreshold, strong_inversion };

/// Strong-inversion capacitor-mapping constant. The text's mapping carries a
/// (2+beta) denominator; direct substitution of the branch laws yields
/// (1+beta). Both presets exist; "paper" trajectories match the mathematical
/// system only after a (1+beta)/(2+beta) time rescale.
enum class MappingConstant { paper, derived };

/// Device parameters for one design, tagged by operating regime.
struct Device {
    Regime regime = Regime::subthreshold;
    SubthresholdParams sub{};
    StrongInversionParams si{};

    void validate() const {
        if (regime == Regime::subthreshold)
            sub.validate();
        else
            si.validate();
    }
};

/// Per-state synthesis result: the capacitor and scale current realizing one
/// time constant.
struct CoreMapping {
    Regime regime = Regime::subthreshold;
    double tau = 0.0;        ///< seconds
    double c = 0.0;          ///< farads
    double i_dc = 0.0;       ///< amperes
    MappingConstant mapping_constant = MappingConstant::paper;
};

struct CoreState {
    double v_c = 0.0;
    bool saturation_flag = false;
};

/// Minimum value of I_A + I_B (or sqrt I_A + sqrt I_B) before the I_Cin
/// division is declared invalid; three decades below the fA leakage scale.
inline constexpr double kDenominatorFloor = 1e-18;

/// Capacitance realizing the time constant tau at scale current i_dc.
/// Subthreshold: C = tau i_dc / ((n_n+n_p) V_T).
/// Strong inversion: C = 2 tau sqrt(k_n) i_dc / (2+beta) or /(1+beta).
double solve_capacitor(double tau, double i_dc, const Device& device,
                       MappingConstant mapping = MappingConstant::paper);

/// Capacitor drive current I_Cin = F * I_dc / (I_A + I_B), with the
/// strong-inversion denominator sqrt(I_A) + sqrt(I_B).
double compute_icin(const BilateralSignal& f_rails, double i_a, double i_b,
                    double i_dc, Regime regime);

/// dV_C/dt = I_Cin / C, clamped to zero at an engaged dynamic-range bound.
double core_derivative(CoreState& state, double i_cin, double c, bool clipping,
                       double v_lo, double v_hi);

/// Capacitor preset realizing a desired initial output current.
CoreState init_core(const Device& device, double i_out_init);

/// Core readout: branch currents and the output rails (I_B on pos, I_A on neg).
struct CoreReadout {
    BranchCurrents branches;
    BilateralSignal rails() const { return {branches.i_b, branches.i_a}; }
    double i_out() const { return branches.i_out(); }
};

CoreReadout read_out(const CoreState& state, const Device& device);

}  // namespace nbds
