#pragma once

#include <string>
#include <vector>

namespace nbds {

/// A recorded multi-channel time series with a per-sample saturation flag.
struct Waveform {
    std::vector<std::string> names;              ///< channel names, in column order
    std::vector<double> t;                       ///< sample times [s]
    std::vector<std::vector<double>> samples;    ///< samples[i][k] = channel k at t[i]
    std::vector<int> sat;                        ///< 1 when any clamp engaged at t[i]

    size_t size() const { return t.size(); }
    int column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;

    void append(double time, const std::vector<double>& row, bool saturated);
};

/// CSV with header "t,<names...>,sat"; numbers printed with 17 significant
/// digits so a read-back reproduces the doubles exactly.
std::string to_csv(const Waveform& w);
Waveform waveform_from_csv(const std::string& text);

void write_csv_file(const Waveform& w, const std::string& path);
Waveform read_csv_file(const std::string& path);

}  // namespace nbds
