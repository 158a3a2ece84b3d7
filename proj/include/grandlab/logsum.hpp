// Streaming log-sum-exp accumulation for probability masses.
#pragma once

#include <cmath>
#include <limits>

namespace grandlab {

inline double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = a > b ? a : b;
    return m + std::log1p(std::exp(-(a > b ? a - b : b - a)));
}

// Accumulates nonnegative terms supplied in the log domain. Exact summation
// relative to the running maximum, so tiny and dominant terms coexist.
class LogAccum {
public:
    void add_log(double l) {
        if (l == -std::numeric_limits<double>::infinity()) return;
        if (empty_) {
            max_ = l;
            acc_ = 1.0;
            empty_ = false;
            return;
        }
        if (l <= max_) {
            acc_ += std::exp(l - max_);
        } else {
            acc_ = acc_ * std::exp(max_ - l) + 1.0;
            max_ = l;
        }
    }

    bool empty() const { return empty_; }

    double log_sum() const {
        if (empty_) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(acc_);
    }

    double sum() const { return empty_ ? 0.0 : std::exp(max_) * acc_; }

private:
    bool empty_ = true;
    double max_ = 0.0;
    double acc_ = 0.0;
};

}  // namespace grandlab
