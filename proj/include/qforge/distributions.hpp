#pragma once

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qforge/rng.hpp"

namespace qforge {

struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
};
struct LogNormal {
    double mu = 0.0;
    double sigma = 1.0;
};
struct Exponential {
    double rate = 1.0;
};
struct Weibull {
    double shape = 1.0;  // k
    double scale = 1.0;  // lambda
};
/// Pareto type II shifted to start at zero: F(x) = 1 - (1 + x/scale)^-shape.
struct Lomax {
    double shape = 1.0;  // alpha
    double scale = 1.0;  // lambda
};
/// F(x) = 1 / (1 + (x/scale)^-shape).
struct LogLogistic {
    double scale = 1.0;  // alpha
    double shape = 1.0;  // beta
};

/// One of the six benchmark families with validated parameters.
class DistributionSpec {
public:
    using Family = std::variant<Normal, LogNormal, Exponential, Weibull, Lomax, LogLogistic>;

    /// Throws ParameterError on non-positive scale/shape/rate or non-finite values.
    DistributionSpec(Family family);  // NOLINT(google-explicit-constructor)

    template <class F>
        requires std::is_constructible_v<Family, F> && (!std::is_same_v<F, Family>)
    DistributionSpec(F family)  // NOLINT(google-explicit-constructor)
        : DistributionSpec(Family(std::move(family))) {}

    /// Builds from a lowercase family name and its positional parameters, in
    /// the order the structs above declare them.
    static DistributionSpec parse(const std::string& name, const std::vector<double>& params);

    const Family& family() const noexcept { return family_; }

    /// Lowercase family name: "normal", "lognormal", ...
    std::string name() const;
    /// Parameters as "key=value;key=value" using shortest round-trip doubles.
    std::string params_text() const;

    /// Exact inverse CDF. Throws ParameterError unless 0 < p < 1.
    double quantile(double p) const;
    /// F(x); 0 below the support.
    double cdf(double x) const;

private:
    Family family_;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile: Acklam's rational approximation followed by one
/// Halley step against erfc, good to well under 1e-9 absolute.
double normal_inv_cdf(double p);

/// `count` inverse-transform draws; advances `rng` by exactly `count` words.
std::vector<double> sample(const DistributionSpec& dist, RngStream& rng, std::size_t count);

/// Fills `out` in place with the same draws sample() would return.
void sample_into(const DistributionSpec& dist, RngStream& rng, std::vector<double>& out);

}  // namespace qforge
