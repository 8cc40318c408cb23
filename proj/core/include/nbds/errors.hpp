#pragma once

#include <stdexcept>
#include <string>

namespace nbds {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg)
        : std::runtime_error("validation error: " + msg) {}
};

struct LoweringError : std::runtime_error {
    explicit LoweringError(const std::string& msg)
        : std::runtime_error("lowering error: " + msg) {}
};

struct NonFiniteError : std::runtime_error {
    double time;
    std::string state;
    NonFiniteError(double t, const std::string& state_)
        : std::runtime_error("non-finite value in state '" + state_ + "' at t=" +
                             std::to_string(t)),
          time(t), state(state_) {}
};

struct DenominatorUnderflow : std::runtime_error {
    explicit DenominatorUnderflow(const std::string& msg)
        : std::runtime_error("denominator underflow: " + msg) {}
};

struct NoOscillation : std::runtime_error {
    explicit NoOscillation(const std::string& msg)
        : std::runtime_error("no oscillation: " + msg) {}
};

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& msg)
        : std::runtime_error("out of range: " + msg) {}
};

}  // namespace nbds
