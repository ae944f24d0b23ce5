// The nine sample-quantile definitions of Hyndman & Fan (1996), in the
// numbering R uses. Index arithmetic mirrors R's quantile.default, including
// its 4*eps fuzz on the floor so that plotting positions that are integers
// in exact arithmetic land on the knot.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qforge/errors.hpp"
#include "qforge/estimators.hpp"

namespace qforge {

namespace {

constexpr double kFuzz = 4.0 * std::numeric_limits<double>::epsilon();

// X_(j) with X_(0) = X_(1) and X_(n+1) = X_(n).
double padded_order_stat(const SortedSample& s, long j) {
    const long n = static_cast<long>(s.size());
    return s.order_stat(static_cast<std::size_t>(std::clamp(j, 1L, n)));
}

// (a, b) in the plotting-position family p_k = (k - a) / (n + 1 - a - b).
struct PlottingConstants {
    double a;
    double b;
};

PlottingConstants continuous_constants(int type) {
    switch (type) {
        case 4: return {0.0, 1.0};
        case 5: return {0.5, 0.5};
        case 6: return {0.0, 0.0};
        case 7: return {1.0, 1.0};
        case 8: return {1.0 / 3.0, 1.0 / 3.0};
        case 9: return {3.0 / 8.0, 3.0 / 8.0};
        default: break;
    }
    throw ParameterError("no continuous plotting position for type " + std::to_string(type));
}

double discontinuous(const SortedSample& s, double p, int type) {
    const double n = static_cast<double>(s.size());
    const double h = type == 3 ? n * p - 0.5 : n * p;
    const double j = std::floor(h + kFuzz);
    const long k = static_cast<long>(j);
    const double lo = padded_order_stat(s, k);
    const double hi = padded_order_stat(s, k + 1);
    switch (type) {
        case 1:
            return h > j ? hi : lo;
        case 2:
            return h > j ? hi : 0.5 * (lo + hi);
        default:
            // Nearest order statistic; exact ties go to the even index.
            return (h != j || k % 2 == 1) ? hi : lo;
    }
}

double continuous(const SortedSample& s, double p, int type) {
    const auto [a, b] = continuous_constants(type);
    const double n = static_cast<double>(s.size());
    const double h = a + p * (n + 1.0 - a - b);
    const double j = std::floor(h + kFuzz);
    double frac = h - j;
    if (std::abs(frac) < kFuzz) {
        frac = 0.0;
    }
    const long k = static_cast<long>(j);
    const double lo = padded_order_stat(s, k);
    if (frac <= 0.0) {
        return lo;
    }
    const double hi = padded_order_stat(s, k + 1);
    if (lo == hi) {
        return lo;
    }
    return std::clamp(lo + frac * (hi - lo), lo, hi);
}

}  // namespace

double hf_quantile(const SortedSample& sample, QuantileLevel q, int type) {
    if (type < 1 || type > 9) {
        throw ParameterError("Hyndman-Fan type must be in 1..9, got " + std::to_string(type));
    }
    if (type <= 3) {
        return discontinuous(sample, q.value(), type);
    }
    return continuous(sample, q.value(), type);
}

}  // namespace qforge
