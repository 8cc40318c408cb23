#pragma once

#include "nbds/errors.hpp"

namespace nbds {

/// A signed current carried as two non-negative rails; value() = pos - neg.
/// The representation is non-canonical: both rails may be large as long as
/// their difference is the signal (the core's I_B/I_A rails are like that).
struct BilateralSignal {
    double pos = 0.0;
    double neg = 0.0;

    double value() const { return pos - neg; }
    BilateralSignal negated() const { return {neg, pos}; }

    BilateralSignal& operator+=(const BilateralSignal& o) {
        pos += o.pos;
        neg += o.neg;
        return *this;
    }
};

/// Strictly positive scaling current (the I_X / I_dc / I_b denominators).
struct ScaleCurrent {
    double value;

    explicit ScaleCurrent(double v) : value(v) {
        if (v <= 0) throw ValidationError("scale current must be strictly positive");
    }
};

/// Canonical minimal-rail decomposition of a signed current.
inline BilateralSignal splitter(double v) {
    return {v > 0 ? v : 0.0, v < 0 ? -v : 0.0};
}

}  // namespace nbds
