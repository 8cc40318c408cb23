#include "nbds/montecarlo.hpp"

#include <cmath>
#include <random>

#include "nbds/errors.hpp"
#include "nbds/metrics.hpp"
#include "nbds/netlist.hpp"

namespace nbds {

Device perturb_device(const Device& nominal, double sigma, std::uint64_t seed, int run) {
    std::seed_seq seq{static_cast<std::uint64_t>(run),
                      static_cast<std::uint64_t>(seed & 0xffffffffu),
                      static_cast<std::uint64_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, sigma);
    auto factor = [&] { return std::exp(noise(rng)); };

    Device d = nominal;
    if (d.regime == Regime::subthreshold) {
        d.sub.n_n *= factor();
        d.sub.n_p *= factor();
        d.sub.i_sn *= factor();
        d.sub.i_sp *= factor();
    } else {
        d.si.k_n *= factor();
        d.si.k_p *= factor();
        d.si.v_th *= factor();
    }
    return d;
}

namespace {

struct Stats {
    double mean = 0.0, stddev = 0.0;
};

Stats stats_of(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    bool constant = true;
    for (double x : v) constant = constant && x == v.front();
    if (constant) {  // avoid rounding noise in the zero-spread case
        s.mean = v.front();
        return s;
    }
    for (double x : v) s.mean += x;
    s.mean /= v.size();
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / v.size());
    return s;
}

}  // namespace

McResult monte_carlo(const DynSystem& sys, const McConfig& cfg) {
    if (cfg.runs <= 0) throw ValidationError("run count must be positive");
    if (cfg.sigma < 0) throw ValidationError("sigma must be non-negative");
    const Netlist nominal = lower(sys, cfg.mapping);
    const std::string channel = cfg.channel.empty() ? sys.states.front().name
                                                    : cfg.channel;

    McResult res;
    {
        const Waveform w = integrate_circuit(nominal, cfg.sim);
        const OscillationMetrics m = oscillation_metrics(w.t, w.column(channel));
        res.nominal_period = m.period;
        res.nominal_p2p = m.amplitude_p2p;
    }

    std::vector<double> periods, swings;
    for (int run = 0; run < cfg.runs; ++run) {
        Netlist n = nominal;
        n.device = perturb_device(sys.device, cfg.sigma, cfg.seed, run);
        McRun r;
        try {
            const Waveform w = integrate_circuit(n, cfg.sim);
            const OscillationMetrics m = oscillation_metrics(w.t, w.column(channel));
            if (m.amplitude_p2p >= cfg.p2p_floor_frac * res.nominal_p2p) {
                r.oscillated = true;
                r.period = m.period;
                r.amplitude_p2p = m.amplitude_p2p;
                periods.push_back(m.period);
                swings.push_back(m.amplitude_p2p);
            }
        } catch (const NonFiniteError&) {
        } catch (const DenominatorUnderflow&) {
        } catch (const NoOscillation&) {
        } catch (const OutOfRange&) {
            // initial current outside the perturbed core's range
        }
        res.runs.push_back(r);
        if (r.oscillated) ++res.oscillated_count;
    }
    res.success_fraction = static_cast<double>(res.oscillated_count) / cfg.runs;
    const Stats p = stats_of(periods);
    const Stats a = stats_of(swings);
    res.period_mean = p.mean;
    res.period_std = p.stddev;
    res.p2p_mean = a.mean;
    res.p2p_std = a.stddev;
    return res;
}

}  // namespace nbds
