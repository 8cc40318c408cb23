#include "nbds/waveform.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nbds/errors.hpp"

namespace nbds {

int Waveform::column_index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw OutOfRange("no waveform channel named '" + name + "'");
}

std::vector<double> Waveform::column(const std::string& name) const {
    const int k = column_index(name);
    std::vector<double> out;
    out.reserve(t.size());
    for (const auto& row : samples) out.push_back(row[k]);
    return out;
}

void Waveform::append(double time, const std::vector<double>& row, bool saturated) {
    t.push_back(time);
    samples.push_back(row);
    sat.push_back(saturated ? 1 : 0);
}

namespace {

void print_g17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

std::string to_csv(const Waveform& w) {
    std::string out = "t";
    for (const auto& n : w.names) {
        out += ',';
        out += n;
    }
    out += ",sat\n";
    for (size_t i = 0; i < w.t.size(); ++i) {
        print_g17(out, w.t[i]);
        for (double v : w.samples[i]) {
            out += ',';
            print_g17(out, v);
        }
        out += ',';
        out += w.sat[i] ? '1' : '0';
        out += '\n';
    }
    return out;
}

Waveform waveform_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty waveform file");

    Waveform w;
    {
        std::istringstream hdr(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(hdr, field, ',')) fields.push_back(field);
        if (fields.size() < 2 || fields.front() != "t" || fields.back() != "sat")
            throw ValidationError("waveform header must be t,<channels...>,sat");
        w.names.assign(fields.begin() + 1, fields.end() - 1);
    }

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(row, field, ','))
            try {
                vals.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ValidationError("bad number '" + field + "' on line " +
                                      std::to_string(lineno));
            }
        if (vals.size() != w.names.size() + 2)
            throw ValidationError("wrong field count on line " + std::to_string(lineno));
        w.t.push_back(vals.front());
        w.samples.emplace_back(vals.begin() + 1, vals.end() - 1);
        w.sat.push_back(vals.back() != 0.0 ? 1 : 0);
    }
    return w;
}

void write_csv_file(const Waveform& w, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot open '" + path + "' for writing");
    f << to_csv(w);
}

Waveform read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return waveform_from_csv(ss.str());
}

}  // namespace nbds
