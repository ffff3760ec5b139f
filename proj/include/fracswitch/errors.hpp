#pragma once

#include <stdexcept>
#include <string>

namespace fracswitch {

// Requested tolerance could not be certified by any evaluation method.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// A Mittag-Leffler guard denominator is numerically indistinguishable from zero.
class near_zero_denominator : public std::runtime_error {
public:
    near_zero_denominator(int mode, double alpha, double guard_value)
        : std::runtime_error("near-zero denominator at mode k=" + std::to_string(mode) +
                             " (alpha=" + std::to_string(alpha) +
                             ", |E|=" + std::to_string(guard_value) + ")"),
          mode_(mode), alpha_(alpha), guard_value_(guard_value) {}
    int mode() const { return mode_; }
    double alpha() const { return alpha_; }
    double guard_value() const { return guard_value_; }

private:
    int mode_;
    double alpha_;
    double guard_value_;
};

}  // namespace fracswitch
