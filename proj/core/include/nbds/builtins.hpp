#pragma once

#include <string>
#include <vector>

#include "nbds/system.hpp"

namespace nbds {

enum class NetworkTopology { a, b, c };

/// Two-state FitzHugh-Nagumo neuron, log-domain scaling (1 V <-> 1 nA).
DynSystem builtin_fhn();

/// Three-state Lorenz attractor, sigma=10, rho=28, beta=8/3 in nA.
DynSystem builtin_lorenz();

/// Two-state Hopf oscillator with subcritical parameters (mu = -0.5 nA).
DynSystem builtin_hopf();

/// One-state low-pass synapse, tau = 50 ms.
DynSystem builtin_synapse();

/// Three FHN neurons plus six directed synapses.
/// (a) all-excitatory, (b) 1<->2 excitatory and links to/from 3 inhibitory,
/// (c) all-inhibitory.
DynSystem builtin_network(NetworkTopology topology);

/// Strong-inversion FHN, microampere scaling (1 V <-> 1 uA).
DynSystem builtin_fhn_si();

/// Names accepted by builtin_by_name, in listing order.
const std::vector<std::string>& builtin_names();

/// Looks up a builtin ("fhn", "lorenz", "hopf", "synapse", "network-a",
/// "network-b", "network-c", "fhn-si"); throws ValidationError when unknown.
DynSystem builtin_by_name(const std::string& name);

/// One-line description per builtin, for the CLI listing.
std::string builtin_description(const std::string& name);

}  // namespace nbds
