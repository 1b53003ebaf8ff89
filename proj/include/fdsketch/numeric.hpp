#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace fdsketch {

// ceil(x), except that x within a few ulps of an integer is taken as that
// integer. Keeps ceil(3 + 3/0.3) at 13 however the division rounds.
inline std::size_t snapped_ceil(double x) {
    const double nearest = std::nearbyint(x);
    if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(x));
}

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double initial) : sum_(initial) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace fdsketch
