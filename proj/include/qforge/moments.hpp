#pragma once

#include <cmath>
#include <cstdint>

namespace qforge {

/// Welford's streaming mean and sum of squared deviations.
class MomentAccumulator {
public:
    void add(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double sum_sq_dev() const noexcept { return m2_; }

    /// Unbiased (n - 1) variance; 0 with fewer than two values.
    double sample_variance() const noexcept {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }

    /// Divides by n.
    double population_variance() const noexcept {
        return count_ > 0 ? m2_ / static_cast<double>(count_) : 0.0;
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace qforge
