#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qforge/distributions.hpp"
#include "qforge/estimators.hpp"
#include "qforge/simulation.hpp"

namespace qforge {

/// Malformed or invalid run configuration. The message names the line or
/// the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<DistributionSpec> distributions;
    std::vector<EstimatorId> estimators;
    std::vector<int> sample_sizes;
    std::vector<double> q_values;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    std::string output_path;  // empty: caller decides
};

/// Parses the JSON run configuration (schema in docs/config.md).
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Expands start..stop inclusive in `step` increments. Points are rounded to
/// 12 decimals so that 0.05 + 2*0.05 prints as 0.15. Throws ConfigError.
std::vector<double> expand_q_range(double start, double stop, double step);

/// Parses "start:stop:step" and expands it.
std::vector<double> parse_q_grid(std::string_view text);

/// Cells in distribution-major, then estimator, then n, then q order.
std::vector<CellSpec> build_cells(const RunConfig& config);

inline constexpr std::string_view kCsvHeader =
    "distribution,params,estimator,n,q,trials,true_quantile,bias,variance,mse,se_bias,seed";

/// One CSV line (no trailing newline) in kCsvHeader column order.
std::string format_result_row(const CellResult& result);

/// Header plus one row per result, '\n' line endings.
void write_results_csv(std::ostream& out, std::span<const CellResult> results);

}  // namespace qforge
