#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qforge/distributions.hpp"
#include "qforge/errors.hpp"
#include "qforge/estimators.hpp"

namespace qforge {

/// One Monte Carlo measurement: `trials` fresh samples of size n from `dist`.
struct CellSpec {
    DistributionSpec dist;
    EstimatorId estimator;
    int n;
    QuantileLevel q;
    std::uint64_t trials;
    std::uint64_t seed;
};

struct CellMetrics {
    double bias = 0.0;      // mean(estimate) - true quantile
    double variance = 0.0;  // sample variance of the estimates
    double mse = 0.0;       // mean((estimate - true)^2)
    double se_bias = 0.0;   // sqrt(variance / trials)
    double true_quantile = 0.0;
    std::uint64_t trials = 0;

    friend bool operator==(const CellMetrics&, const CellMetrics&) = default;
};

struct CellResult {
    CellSpec spec;
    CellMetrics metrics;
};

/// A grid cell that cannot be evaluated; carries its position in the grid.
class CellError : public ParameterError {
public:
    CellError(std::size_t index, const std::string& what)
        : ParameterError("cell " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Throws ParameterError when the spec cannot be run.
void validate_cell(const CellSpec& spec);

/// Stream id for a cell: a mix64 fold over the distribution tag and
/// parameters, estimator tag, n and the bits of q. Independent of where the
/// cell sits in a grid.
std::uint64_t cell_stream_id(const CellSpec& spec);

/// Deterministic for a fixed spec.
CellMetrics run_cell(const CellSpec& spec);

/// Runs every cell on up to `threads` workers (0 = hardware concurrency).
/// Output is in input order and equal to calling run_cell on each spec.
/// Throws CellError for the first invalid cell before any work starts.
std::vector<CellResult> run_grid(std::span<const CellSpec> cells, unsigned threads = 1);

/// Bisection tolerance on |bias| and iteration cap for the zero-bias search.
inline constexpr double kZeroBiasTolerance = 1e-10;
inline constexpr int kZeroBiasMaxIterations = 200;

/// q in [lo, hi] where the unit-exponential bias of the type-7 estimator
/// vanishes. The bias has kinks wherever q(n-1) is an integer, hence plain
/// bisection. Throws ParameterError when the endpoint biases share a sign,
/// NumericalError when the tolerance is not met.
double zero_bias_quantile_search(int n, double lo, double hi);

/// First pair of adjacent points on the 0.01..0.99 grid (step 0.01) across
/// which the type-7 bias changes sign.
std::optional<std::pair<double, double>> find_zero_bias_bracket(int n);

}  // namespace qforge
