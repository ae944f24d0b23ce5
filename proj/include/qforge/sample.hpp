#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qforge {

/// Ascending, finite observations. Every estimator takes one of these.
class SortedSample {
public:
    /// Sorts `values`; throws InputError when empty or any value is NaN/inf.
    explicit SortedSample(std::vector<double> values);

    /// Wraps data the caller guarantees is already ascending. Still checks
    /// finiteness and order.
    static SortedSample from_sorted(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    /// One-based order statistic X_(k), 1 <= k <= n.
    double order_stat(std::size_t k) const { return values_[k - 1]; }

    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }

private:
    struct Presorted {};
    SortedSample(std::vector<double> values, Presorted);

    std::vector<double> values_;
};

/// A probability strictly inside (0, 1).
class QuantileLevel {
public:
    /// Throws ParameterError unless 0 < q < 1.
    explicit QuantileLevel(double q);

    double value() const noexcept { return q_; }

private:
    double q_;
};

}  // namespace qforge
