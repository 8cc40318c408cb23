#pragma once

#include <cmath>

#include "nbds/signal.hpp"

namespace nbds {

// Ideal behavioral models of the translinear computation blocks. All are
// pure; rails out are non-negative whenever rails in are. PMULT and NMULT
// variants of TYPE1 are numerically identical; the source/sink direction is
// netlist metadata.

/// TYPE1: I1 * I2 / I3 on single-sided inputs.
inline double mult_type1(double i1, double i2, const ScaleCurrent& i3) {
    return i1 * i2 / i3.value;
}

/// TYPE1 squarer: I_in^2 / I_X on a single-sided input.
inline double squarer_type1(double i_in, const ScaleCurrent& i_x) {
    return i_in * i_in / i_x.value;
}

/// TYPE2 squarer: (pos - neg)^2 / I_X of a bilateral input, computed
/// rail-wise as (pos^2 + neg^2 - 2 pos neg)/I_X. Non-negative and invariant
/// under common-mode shifts of the rails.
inline double squarer_type2(const BilateralSignal& x, const ScaleCurrent& i_x) {
    const double d = x.pos - x.neg;
    return d * d / i_x.value;
}

/// TYPE2 multiplier: single-sided c times bilateral x, rail-wise.
inline BilateralSignal mult_type2(double c, const BilateralSignal& x,
                                  const ScaleCurrent& i_x) {
    return {x.pos * c / i_x.value, x.neg * c / i_x.value};
}

/// TYPE3 multiplier: bilateral times bilateral,
/// rails ((AC+BD)/I_dc, (AD+BC)/I_dc); value homomorphic.
inline BilateralSignal mult_type3(const BilateralSignal& x, const BilateralSignal& y,
                                  const ScaleCurrent& i_dc) {
    return {(x.pos * y.pos + x.neg * y.neg) / i_dc.value,
            (x.pos * y.neg + x.neg * y.pos) / i_dc.value};
}

/// Strong-inversion root-square block: 2 sqrt(I_in * I_b).
inline double root_square(double i_in, const ScaleCurrent& i_b) {
    return 2.0 * std::sqrt(i_in * i_b.value);
}

/// Strong-inversion MULT core: (I_in + I_b/2)^2 / I_b.
inline double mult_core(double i_in, const ScaleCurrent& i_b) {
    const double s = i_in + 0.5 * i_b.value;
    return s * s / i_b.value;
}

/// Strong-inversion bilateral multiplier; value = 2 x y / I_b. The factor 2
/// is the block's own: a synthesizer realizing x*y/I must bind I_b = 2 I.
inline BilateralSignal bilateral_mult_si(const BilateralSignal& x,
                                         const BilateralSignal& y,
                                         const ScaleCurrent& i_b) {
    return {2.0 * (x.pos * y.pos + x.neg * y.neg) / i_b.value,
            2.0 * (x.neg * y.pos + x.pos * y.neg) / i_b.value};
}

}  // namespace nbds
