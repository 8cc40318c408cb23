#pragma once

#include "nbds/netlist.hpp"
#include "nbds/system.hpp"
#include "nbds/waveform.hpp"

namespace nbds {

enum class Integrator { rk4, euler };

struct SimConfig {
    double dt = 0.0;       ///< step [s]; 0 picks tau_min / 2000
    double t_end = 0.0;    ///< horizon [s]; 0 picks 40 * tau_max
    Integrator integrator = Integrator::rk4;
    int record_stride = 1; ///< keep every n-th sample
    bool clipping = false; ///< enforce capacitor-voltage range in circuit runs
};

double default_dt(const DynSystem& sys);
double default_t_end(const DynSystem& sys);

/// Fixed-step integration of tau_i dx_i/dt = F_i(x, u(t)) on the plain
/// real-valued semantics. Channels are the state names; sat is always 0.
Waveform integrate_math(const DynSystem& sys, const SimConfig& cfg);

/// Device-level behavioral run of a synthesized netlist: the states are
/// capacitor voltages, the recorded channels the core output currents.
/// sat flags samples where an exponent clamp, overdrive clip, or
/// capacitor-voltage bound engaged. Throws NonFiniteError / underflow.
Waveform integrate_circuit(const Netlist& n, const SimConfig& cfg);

/// Circuit-to-mathematical time ratio. 1 everywhere except the
/// strong-inversion "paper" capacitor mapping, where the circuit evolves
/// (2+beta)/(1+beta) times faster than the target dynamics.
double time_rescale(const Netlist& n);

}  // namespace nbds
