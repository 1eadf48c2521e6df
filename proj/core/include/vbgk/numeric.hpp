#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace vbgk {

// Neumaier-compensated accumulator.  Used wherever a sum feeds a conservation
// statement or a normalization constant, so that the bookkeeping itself does
// not pollute drift measurements.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

}  // namespace vbgk
