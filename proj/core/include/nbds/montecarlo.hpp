#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbds/sim.hpp"
#include "nbds/system.hpp"

namespace nbds {

struct McConfig {
    int runs = 100;
    double sigma = 0.05;           ///< lognormal spread of the device parameters
    std::uint64_t seed = 0;        ///< master seed; run i derives from {seed, i}
    std::string channel;           ///< analyzed state; empty picks the first
    double p2p_floor_frac = 0.25;  ///< oscillation needs >= this fraction of nominal swing
    SimConfig sim{};
    MappingConstant mapping = MappingConstant::paper;
};

/// Device copy with its process parameters multiplied by exp(N(0, sigma)),
/// run-indexed and reproducible. Bias and supply voltages stay nominal.
Device perturb_device(const Device& nominal, double sigma, std::uint64_t seed, int run);

struct McRun {
    bool oscillated = false;
    double period = 0.0;
    double amplitude_p2p = 0.0;
};

struct McResult {
    double nominal_period = 0.0;
    double nominal_p2p = 0.0;
    std::vector<McRun> runs;
    int oscillated_count = 0;
    double success_fraction = 0.0;
    double period_mean = 0.0;   ///< over oscillating runs
    double period_std = 0.0;
    double p2p_mean = 0.0;
    double p2p_std = 0.0;
};

/// Mismatch study: the netlist (capacitors included) is synthesized once
/// from the nominal device, then each run simulates it with a perturbed
/// device. Runs that blow up or fail the oscillation test count as failed.
McResult monte_carlo(const DynSystem& sys, const McConfig& cfg);

}  // namespace nbds
