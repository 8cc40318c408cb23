#include "nbds/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "nbds/errors.hpp"

namespace nbds {

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw ValidationError("rmse needs two equal-length non-empty sequences");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc / a.size());
}

double interp(const std::vector<double>& t, const std::vector<double>& y, double tq) {
    if (t.empty() || t.size() != y.size())
        throw ValidationError("interp needs matching non-empty t and y");
    if (tq <= t.front()) return y.front();
    if (tq >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const size_t i = it - t.begin();
    const double w = (tq - t[i - 1]) / (t[i] - t[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
}

double nrmse(const std::vector<double>& ref_t, const std::vector<double>& ref_y,
             const std::vector<double>& test_t, const std::vector<double>& test_y,
             double scale) {
    if (ref_t.size() != ref_y.size() || test_t.size() != test_y.size() ||
        ref_t.empty() || test_t.empty())
        throw ValidationError("nrmse needs matching non-empty traces");
    const double span_lo = test_t.front() * scale;
    const double span_hi = test_t.back() * scale;

    double acc = 0.0;
    long count = 0;
    double lo = ref_y.front(), hi = ref_y.front();
    for (size_t i = 0; i < ref_t.size(); ++i) {
        lo = std::min(lo, ref_y[i]);
        hi = std::max(hi, ref_y[i]);
        if (ref_t[i] < span_lo || ref_t[i] > span_hi) continue;
        const double tv = interp(test_t, test_y, ref_t[i] / scale);
        const double d = tv - ref_y[i];
        acc += d * d;
        ++count;
    }
    if (count == 0) throw ValidationError("traces do not overlap in time");
    const double range = hi - lo;
    if (range <= 0) throw ValidationError("reference trace has zero range");
    return std::sqrt(acc / count) / range;
}

namespace {

// Rising crossings of the midrange with 10%-of-range hysteresis, linearly
// interpolated in time. Throws NoOscillation when the range is negligible.
std::vector<double> rising_crossings(const std::vector<double>& t,
                                     const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 3)
        throw NoOscillation("trace too short");
    const double lo = *std::min_element(y.begin(), y.end());
    const double hi = *std::max_element(y.begin(), y.end());
    const double range = hi - lo;
    const double mag = std::max(std::abs(lo), std::abs(hi));
    if (range <= 0 || range < 1e-6 * std::max(mag, 1e-300))
        throw NoOscillation("signal range is negligible");
    const double mid = 0.5 * (lo + hi);
    const double band = 0.05 * range;  // +/- half of the 10% hysteresis window
    const double arm_below = mid - band;
    const double fire_above = mid + band;

    std::vector<double> events;
    bool armed = y.front() < arm_below;
    for (size_t i = 1; i < y.size(); ++i) {
        if (!armed) {
            if (y[i] < arm_below) armed = true;
            continue;
        }
        if (y[i] >= fire_above) {
            // locate the mid crossing inside this armed ascent
            size_t j = i;
            while (j > 0 && y[j - 1] > mid) --j;
            if (j == 0) j = 1;
            const double y0 = y[j - 1], y1 = y[j];
            const double w = y1 == y0 ? 0.0 : (mid - y0) / (y1 - y0);
            events.push_back(t[j - 1] + w * (t[j] - t[j - 1]));
            armed = false;
        }
    }
    return events;
}

}  // namespace

std::vector<double> detect_spikes(const std::vector<double>& t,
                                  const std::vector<double>& y) {
    return rising_crossings(t, y);
}

OscillationMetrics oscillation_metrics(const std::vector<double>& t,
                                       const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 8)
        throw NoOscillation("trace too short");
    const size_t start = t.size() / 2;
    const std::vector<double> tw(t.begin() + start, t.end());
    const std::vector<double> yw(y.begin() + start, y.end());

    const std::vector<double> events = rising_crossings(tw, yw);
    if (events.size() < 3)
        throw NoOscillation("fewer than three cycle edges in the analysis window");

    OscillationMetrics m;
    m.cycles = static_cast<int>(events.size()) - 1;
    m.period = (events.back() - events.front()) / m.cycles;
    const double lo = *std::min_element(yw.begin(), yw.end());
    const double hi = *std::max_element(yw.begin(), yw.end());
    m.amplitude_p2p = hi - lo;
    double acc = 0.0;
    for (double v : yw) acc += v;
    m.mean = acc / yw.size();
    return m;
}

double phase_offset_deg(const std::vector<double>& spikes_a,
                        const std::vector<double>& spikes_b, double period) {
    if (spikes_a.empty() || spikes_b.empty() || period <= 0)
        throw ValidationError("phase offset needs events on both traces and a period");
    // circular mean: offsets near a full cycle must not drag the average
    // away from zero
    double cx = 0.0, cy = 0.0;
    long count = 0;
    for (double ta : spikes_a) {
        const auto it = std::lower_bound(spikes_b.begin(), spikes_b.end(), ta);
        if (it == spikes_b.end()) break;
        double frac = (*it - ta) / period;
        frac -= std::floor(frac);
        cx += std::cos(2.0 * M_PI * frac);
        cy += std::sin(2.0 * M_PI * frac);
        ++count;
    }
    if (count == 0) throw ValidationError("no overlapping events");
    double deg = std::atan2(cy, cx) * 180.0 / M_PI;
    if (deg < 0) deg += 360.0;
    return deg;
}

std::optional<double> divergence_time(const std::vector<double>& t,
                                      const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double threshold) {
    if (t.size() != a.size() || t.size() != b.size())
        throw ValidationError("divergence_time needs equal-length traces");
    for (size_t i = 0; i < t.size(); ++i)
        if (std::abs(a[i] - b[i]) > threshold) return t[i];
    return std::nullopt;
}

}  // namespace nbds
