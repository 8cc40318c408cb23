#pragma once

#include <optional>
#include <vector>

namespace nbds {

/// Root-mean-square difference of two equal-length sequences.
double rmse(const std::vector<double>& a, const std::vector<double>& b);

/// RMS error of (test_t, test_y) against (ref_t, ref_y), with the test trace
/// linearly resampled onto the reference grid and the result normalized by
/// the reference peak-to-peak range. Only reference times inside the test
/// trace's span participate. scale stretches the test time axis first:
/// test sample at time t is compared against the reference at t * scale.
double nrmse(const std::vector<double>& ref_t, const std::vector<double>& ref_y,
             const std::vector<double>& test_t, const std::vector<double>& test_y,
             double scale = 1.0);

/// Linear interpolation of (t, y) at time tq; clamped at the ends.
double interp(const std::vector<double>& t, const std::vector<double>& y, double tq);

struct OscillationMetrics {
    double period = 0.0;          ///< mean rising-crossing spacing [s]
    double amplitude_p2p = 0.0;   ///< peak-to-peak over the analyzed window
    double mean = 0.0;            ///< signal mean over the analyzed window
    int cycles = 0;               ///< rising crossings - 1
};

/// Steady-state oscillation analysis over the final half of the trace.
/// Cycle edges are rising crossings of the window midrange value, with a
/// hysteresis band of 10% of the range. Throws NoOscillation when fewer
/// than three crossings are found or the range is negligible.
OscillationMetrics oscillation_metrics(const std::vector<double>& t,
                                       const std::vector<double>& y);

/// Rising-edge event times: crossings of the 10%-hysteresis midrange band,
/// linearly interpolated, over the whole trace.
std::vector<double> detect_spikes(const std::vector<double>& t,
                                  const std::vector<double>& y);

/// Mean phase lead of b's events after a's, in degrees folded to [0, 360).
double phase_offset_deg(const std::vector<double>& spikes_a,
                        const std::vector<double>& spikes_b, double period);

/// First time |a - b| exceeds threshold on the common grid, if ever.
std::optional<double> divergence_time(const std::vector<double>& t,
                                      const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double threshold);

}  // namespace nbds
