#include "qforge/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <regex>
#include <string>

#include "qforge/errors.hpp"

namespace qforge {

namespace {

void require_order_stat_args(int n, int i) {
    if (n < 1) {
        throw ParameterError("sample size must be >= 1, got " + std::to_string(n));
    }
    if (i < 0 || i > n) {
        throw ParameterError("order statistic index " + std::to_string(i) + " outside 0.." +
                             std::to_string(n));
    }
}

void require_interpolation_size(int n) {
    if (n < 2) {
        throw ParameterError("sample size must be >= 2, got " + std::to_string(n));
    }
}

void require_weight_args(int n, int anchor, int tail) {
    if (n < 1) {
        throw ParameterError("sample size must be >= 1, got " + std::to_string(n));
    }
    if (anchor < 0 || anchor > n - 1) {
        throw ParameterError("anchor i=" + std::to_string(anchor) + " outside 0.." +
                             std::to_string(n - 1));
    }
    if (tail < 1 || tail > n - anchor) {
        throw ParameterError("tail m=" + std::to_string(tail) + " outside 1.." +
                             std::to_string(n - anchor));
    }
}

int as_int(std::size_t n) { return static_cast<int>(n); }

}  // namespace

// ---------------------------------------------------------------------------

EstimatorId EstimatorId::hyndman_fan(int type) {
    if (type < 1 || type > 9) {
        throw ParameterError("Hyndman-Fan type must be in 1..9, got " + std::to_string(type));
    }
    return {static_cast<EstimatorKind>(type - 1), 0, 1};
}

int EstimatorId::hf_type() const noexcept {
    const int t = static_cast<int>(kind) + 1;
    return t <= 9 ? t : 0;
}

std::string EstimatorId::name() const {
    switch (kind) {
        case EstimatorKind::Q10: return "Q10";
        case EstimatorKind::Q11Mle: return "Q11MLE";
        case EstimatorKind::Q11General:
            return "Q11(i=" + std::to_string(anchor) + ";m=" + std::to_string(tail) + ")";
        default: return "HF" + std::to_string(hf_type());
    }
}

EstimatorId EstimatorId::parse(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    static const std::regex hf(R"(HF([1-9]))");
    static const std::regex general(R"(Q11\((?:I=)?(\d+)[,;](?:M=)?(\d+)\))");
    std::smatch m;
    if (std::regex_match(s, m, hf)) {
        return hyndman_fan(std::stoi(m[1].str()));
    }
    if (s == "Q10") {
        return q10();
    }
    if (s == "Q11MLE" || s == "MLE") {
        return q11_mle();
    }
    if (std::regex_match(s, m, general)) {
        return q11_general(std::stoi(m[1].str()), std::stoi(m[2].str()));
    }
    throw ParameterError("unknown estimator '" + text + "'");
}

void EstimatorId::validate_for(std::size_t n) const {
    const int size = as_int(n);
    switch (kind) {
        case EstimatorKind::Q10:
            if (size < 2) {
                throw ParameterError("Q10 needs n >= 2, got " + std::to_string(size));
            }
            break;
        case EstimatorKind::Q11General:
            require_weight_args(size, anchor, tail);
            break;
        default:
            if (size < 1) {
                throw ParameterError("sample size must be >= 1");
            }
            break;
    }
}

// ---------------------------------------------------------------------------

int interpolation_anchor(QuantileLevel q, int n) {
    require_interpolation_size(n);
    const int lower = static_cast<int>(std::floor(q.value() * (n - 1)));
    return std::clamp(lower, 0, n - 2) + 1;
}

double exp_order_stat_mean(int n, int i) {
    require_order_stat_args(n, i);
    double sum = 0.0;
    for (int j = 1; j <= i; ++j) {
        sum += 1.0 / (n - j + 1);
    }
    return sum;
}

double exp_order_stat_var(int n, int i) {
    require_order_stat_args(n, i);
    double sum = 0.0;
    for (int j = 1; j <= i; ++j) {
        const double w = 1.0 / (n - j + 1);
        sum += w * w;
    }
    return sum;
}

double q7_exp_bias(QuantileLevel q, int n) {
    const int i = interpolation_anchor(q, n);
    const double frac = q.value() * (n - 1) - (i - 1);
    return exp_order_stat_mean(n, i) + frac / (n - i) + std::log1p(-q.value());
}

double expon_frac(QuantileLevel q, int n) {
    const int i = interpolation_anchor(q, n);
    return (n - i) * (-std::log1p(-q.value()) - exp_order_stat_mean(n, i));
}

double WeightVector::expected_value() const {
    double expected = exp_order_stat_mean(n, anchor);
    double suffix = 0.0;
    for (int k = tail; k >= 1; --k) {
        suffix += tail_weights[static_cast<std::size_t>(k - 1)];
        expected += suffix / (n - anchor - k + 1);
    }
    return expected;
}

WeightVector optimal_weights(int n, int anchor, int tail, QuantileLevel q) {
    require_weight_args(n, anchor, tail);
    WeightVector w;
    w.n = n;
    w.anchor = anchor;
    w.tail = tail;
    w.anchor_bias = exp_order_stat_mean(n, anchor) + std::log1p(-q.value());
    w.beta = 2.0 * w.anchor_bias / tail;
    // Suffix sums of the weights must equal -beta*(n-i-k+1)/2; differencing
    // them leaves -beta/2 everywhere except the last weight.
    w.tail_weights.assign(static_cast<std::size_t>(tail), -w.beta / 2.0);
    w.tail_weights.back() = -w.beta * (n - anchor - tail + 1) / 2.0;
    if (anchor >= 1) {
        w.anchor_weight =
            1.0 - std::accumulate(w.tail_weights.begin(), w.tail_weights.end(), 0.0);
    }
    w.analytic_variance =
        exp_order_stat_var(n, anchor) + w.anchor_bias * w.anchor_bias / tail;
    return w;
}

double q11_variance(int n, int anchor, int tail, QuantileLevel q) {
    return optimal_weights(n, anchor, tail, q).analytic_variance;
}

// ---------------------------------------------------------------------------

double q10_quantile(const SortedSample& sample, QuantileLevel q) {
    const int n = as_int(sample.size());
    if (n < 2) {
        throw InputError("Q10 needs at least two observations");
    }
    const int i = interpolation_anchor(q, n);
    const double f = expon_frac(q, n);
    const double lo = sample.order_stat(static_cast<std::size_t>(i));
    const double hi = sample.order_stat(static_cast<std::size_t>(i + 1));
    return lo + f * (hi - lo);
}

double q11_general(const SortedSample& sample, QuantileLevel q, int anchor, int tail) {
    const int n = as_int(sample.size());
    const WeightVector w = optimal_weights(n, anchor, tail, q);
    double result = anchor >= 1 ? w.anchor_weight * sample.order_stat(static_cast<std::size_t>(anchor)) : 0.0;
    for (int j = 1; j <= tail; ++j) {
        result += w.tail_weights[static_cast<std::size_t>(j - 1)] *
                  sample.order_stat(static_cast<std::size_t>(anchor + j));
    }
    return result;
}

double q11_mle(const SortedSample& sample, QuantileLevel q) {
    const auto v = sample.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return -mean * std::log1p(-q.value());
}

double estimate(const SortedSample& sample, QuantileLevel q, const EstimatorId& id) {
    switch (id.kind) {
        case EstimatorKind::Q10: return q10_quantile(sample, q);
        case EstimatorKind::Q11General: return q11_general(sample, q, id.anchor, id.tail);
        case EstimatorKind::Q11Mle: return q11_mle(sample, q);
        default: return hf_quantile(sample, q, id.hf_type());
    }
}

}  // namespace qforge
