#pragma once

#include <compare>
#include <string>
#include <vector>

#include "qforge/sample.hpp"

namespace qforge {

/// Absolute tolerance for identities that are pure algebra on the weights.
inline constexpr double kAlgebraicTolerance = 1e-12;
/// Absolute tolerance for identities involving logs and harmonic sums.
inline constexpr double kAnalyticTolerance = 1e-10;

// ---------------------------------------------------------------------------
// Estimator identifiers
// ---------------------------------------------------------------------------

enum class EstimatorKind { HF1, HF2, HF3, HF4, HF5, HF6, HF7, HF8, HF9, Q10, Q11General, Q11Mle };

/// Which estimator to run. `anchor` and `tail` only matter for Q11General.
struct EstimatorId {
    EstimatorKind kind = EstimatorKind::HF7;
    int anchor = 0;  // i
    int tail = 1;    // m

    static EstimatorId hyndman_fan(int type);
    static EstimatorId q10() { return {EstimatorKind::Q10, 0, 1}; }
    static EstimatorId q11_mle() { return {EstimatorKind::Q11Mle, 0, 1}; }
    static EstimatorId q11_general(int anchor, int tail) {
        return {EstimatorKind::Q11General, anchor, tail};
    }

    /// HF type 1..9 for the Hyndman-Fan kinds, 0 otherwise.
    int hf_type() const noexcept;

    /// Canonical name: "HF1".."HF9", "Q10", "Q11MLE", "Q11(i=2;m=3)".
    /// Comma-free so it can sit in a CSV field unquoted.
    std::string name() const;

    /// Inverse of name(); case-insensitive, also accepts "Q11(2,3)".
    /// Throws ParameterError.
    static EstimatorId parse(const std::string& text);

    /// Throws ParameterError when the estimator cannot be evaluated at size n.
    void validate_for(std::size_t n) const;

    friend bool operator==(const EstimatorId&, const EstimatorId&) = default;
};

// ---------------------------------------------------------------------------
// Sample estimators
// ---------------------------------------------------------------------------

/// Hyndman-Fan sample quantile of the given type (1..9), matching R's
/// quantile(type = t).
double hf_quantile(const SortedSample& sample, QuantileLevel q, int type);

/// Interpolates between X_(i) and X_(i+1), i = floor(q(n-1)) + 1, with the
/// factor from expon_frac, so the estimate is unbiased for any exponential.
/// Requires n >= 2.
double q10_quantile(const SortedSample& sample, QuantileLevel q);

/// f*X_(i) + sum_j f_j*X_(i+j) with minimum-variance unbiased weights.
/// X_(0) is taken as 0 when i = 0.
double q11_general(const SortedSample& sample, QuantileLevel q, int anchor, int tail);

/// Quantile of the exponential fitted by maximum likelihood: -mean*ln(1-q).
double q11_mle(const SortedSample& sample, QuantileLevel q);

/// Uniform dispatch over every estimator above.
double estimate(const SortedSample& sample, QuantileLevel q, const EstimatorId& id);

// ---------------------------------------------------------------------------
// Unit-rate exponential analytics
// ---------------------------------------------------------------------------

/// floor(q(n-1)) + 1, the lower order statistic used by type 7 and Q10.
/// Clamped to n-1 so that X_(i+1) always exists.
int interpolation_anchor(QuantileLevel q, int n);

/// E[X_(i)] = sum_{j=1}^{i} 1/(n-j+1); zero for i = 0.
double exp_order_stat_mean(int n, int i);

/// Var[X_(i)] = sum_{j=1}^{i} 1/(n-j+1)^2; zero for i = 0.
double exp_order_stat_var(int n, int i);

/// E[type-7 estimate] - true quantile. Positive means overestimation.
double q7_exp_bias(QuantileLevel q, int n);

/// Interpolation factor on X_(i+1) that zeroes the exponential bias of the
/// two-point estimator. Not restricted to [0, 1].
double expon_frac(QuantileLevel q, int n);

/// Optimal weights of the generalized estimator and their variance.
struct WeightVector {
    int n = 0;
    int anchor = 0;          // i
    int tail = 0;            // m
    double anchor_weight = 0.0;  // f on X_(i); 0 and unused when i = 0
    std::vector<double> tail_weights;  // f_1..f_m on X_(i+1)..X_(i+m)
    double beta = 0.0;       // Lagrange multiplier, 2b/m
    double anchor_bias = 0.0;  // b, bias of X_(i) alone
    double analytic_variance = 0.0;  // unit rate

    /// E[estimate] for the unit exponential: sum over the Renyi gaps.
    double expected_value() const;
};

/// Minimises the unit-exponential variance subject to zero bias.
/// Requires 0 <= i <= n-1 and 1 <= m <= n-i.
WeightVector optimal_weights(int n, int anchor, int tail, QuantileLevel q);

/// Var of q11_general under the unit exponential: Var[X_(i)] + b^2/m.
double q11_variance(int n, int anchor, int tail, QuantileLevel q);

}  // namespace qforge
