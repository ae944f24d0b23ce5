#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hf_fixtures.hpp"
#include "oracles.hpp"
#include "qforge/errors.hpp"
#include "qforge/estimators.hpp"

using namespace qforge;
using doctest::Approx;

namespace {

const double kLn2 = std::numbers::ln2;

SortedSample random_sample(std::mt19937_64& gen, int n, double scale = 10.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (double& x : xs) x = u(gen);
    // Occasional ties.
    if (n > 2 && gen() % 3 == 0) xs[1] = xs[0];
    return SortedSample(xs);
}

SortedSample transformed(const SortedSample& s, double scale, double shift) {
    std::vector<double> xs(s.values().begin(), s.values().end());
    for (double& x : xs) x = scale * x + shift;
    return SortedSample(xs);
}

std::vector<EstimatorId> all_estimator_ids() {
    std::vector<EstimatorId> ids;
    for (int t = 1; t <= 9; ++t) ids.push_back(EstimatorId::hyndman_fan(t));
    ids.push_back(EstimatorId::q10());
    ids.push_back(EstimatorId::q11_mle());
    return ids;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hyndman-Fan types
// ---------------------------------------------------------------------------

TEST_CASE("hf_quantile worked examples") {
    CHECK(hf_quantile(SortedSample({1, 2, 3}), QuantileLevel(0.5), 7) == 2.0);
    CHECK(hf_quantile(SortedSample({10, 20, 30, 40}), QuantileLevel(0.5), 7) == 25.0);
    CHECK(hf_quantile(SortedSample({1, 2, 3, 4}), QuantileLevel(0.25), 4) == 1.0);
    for (int t = 1; t <= 9; ++t) {
        CHECK(hf_quantile(SortedSample({5}), QuantileLevel(0.3), t) == 5.0);
        CHECK(hf_quantile(SortedSample({5}), QuantileLevel(0.9), t) == 5.0);
    }
}

TEST_CASE("hf_quantile rejects bad types") {
    const SortedSample s({1, 2});
    CHECK_THROWS_AS(hf_quantile(s, QuantileLevel(0.5), 0), ParameterError);
    CHECK_THROWS_AS(hf_quantile(s, QuantileLevel(0.5), 10), ParameterError);
}

TEST_CASE("hf_quantile matches the recorded reference outputs") {
    const auto fx = test::load_hf_fixtures(QFORGE_TEST_FIXTURES);
    REQUIRE(fx.rows.size() == 5 * 9 * 9);
    for (const auto& row : fx.rows) {
        const SortedSample s(fx.samples.at(row.sample));
        const double got = hf_quantile(s, QuantileLevel(row.q), row.type);
        INFO(row.sample, " q=", row.q, " type=", row.type);
        CHECK(std::abs(got - row.value) <= 1e-12 * std::max(1.0, std::abs(row.value)));
    }
}

TEST_CASE("type 2 averages at integer nq, type 3 rounds ties to even") {
    const SortedSample s({1, 2, 3, 4});
    CHECK(hf_quantile(s, QuantileLevel(0.5), 2) == 2.5);
    CHECK(hf_quantile(s, QuantileLevel(0.5), 1) == 2.0);
    CHECK(hf_quantile(s, QuantileLevel(0.5), 3) == 2.0);
    // nq = 1.5: halfway between X_(1) and X_(2), the even index wins.
    CHECK(hf_quantile(s, QuantileLevel(0.375), 3) == 2.0);
    // nq = 2.5: X_(2) again.
    CHECK(hf_quantile(s, QuantileLevel(0.625), 3) == 2.0);
}

TEST_CASE("property: every HF type stays inside [X_(1), X_(n)]") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> uq(1e-6, 1.0 - 1e-6);
    for (int iter = 0; iter < 3000; ++iter) {
        const int n = 1 + static_cast<int>(gen() % 40);
        const SortedSample s = random_sample(gen, n);
        const QuantileLevel q(uq(gen));
        for (int t = 1; t <= 9; ++t) {
            const double v = hf_quantile(s, q, t);
            REQUIRE(v >= s.front());
            REQUIRE(v <= s.back());
        }
    }
}

TEST_CASE("property: type 7 hits X_(k+1) exactly when q(n-1) = k") {
    std::mt19937_64 gen(23);
    for (int n = 2; n <= 40; ++n) {
        const SortedSample s = random_sample(gen, n);
        for (int k = 1; k < n - 1; ++k) {
            const double q = static_cast<double>(k) / (n - 1);
            const double knot = s.order_stat(static_cast<std::size_t>(k + 1));
            if (q * (n - 1) == static_cast<double>(k)) {
                CHECK(hf_quantile(s, QuantileLevel(q), 7) == knot);
            } else {
                CHECK(hf_quantile(s, QuantileLevel(q), 7) == Approx(knot).epsilon(1e-13));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exponential order statistics
// ---------------------------------------------------------------------------

TEST_CASE("exp_order_stat_mean and _var examples") {
    CHECK(exp_order_stat_mean(3, 1) == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(exp_order_stat_mean(3, 3) == Approx(1.8333333333333333).epsilon(1e-15));
    CHECK(exp_order_stat_mean(5, 0) == 0.0);
    CHECK(exp_order_stat_var(3, 1) == Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(exp_order_stat_var(2, 2) == Approx(1.25).epsilon(1e-15));
    CHECK(exp_order_stat_var(4, 0) == 0.0);
    CHECK_THROWS_AS(exp_order_stat_mean(3, 4), ParameterError);
    CHECK_THROWS_AS(exp_order_stat_mean(3, -1), ParameterError);
    CHECK_THROWS_AS(exp_order_stat_var(0, 0), ParameterError);
}

TEST_CASE("exp order statistic moments agree with density quadrature") {
    for (int n : {1, 2, 3, 7, 15, 30}) {
        for (int i = 1; i <= n; ++i) {
            const auto ref = test::exp_order_stat_quadrature(n, i);
            INFO("n=", n, " i=", i);
            CHECK(std::abs(exp_order_stat_mean(n, i) - static_cast<double>(ref.mean)) < 1e-10);
            CHECK(std::abs(exp_order_stat_var(n, i) - static_cast<double>(ref.variance)) < 1e-10);
        }
    }
}

TEST_CASE("Monte Carlo: max of 3 and of 2 unit exponentials") {
    const auto max3 = test::mc_exponential(3, 1000000, 11, [](const auto& xs) { return xs[2]; });
    CHECK(std::abs(max3.mean - 11.0 / 6.0) <= 3 * max3.se_mean);
    const auto max2 = test::mc_exponential(2, 1000000, 12, [](const auto& xs) { return xs[1]; });
    CHECK(std::abs(max2.variance - 1.25) <= 3 * max2.se_variance);
}

// ---------------------------------------------------------------------------
// Type-7 bias and the Q10 interpolation factor
// ---------------------------------------------------------------------------

TEST_CASE("q7_exp_bias frozen values") {
    CHECK(q7_exp_bias(QuantileLevel(0.5), 2) == Approx(0.30685281944005469).epsilon(1e-13));
    CHECK(q7_exp_bias(QuantileLevel(2.0 / 3.0), 15) ==
          Approx(0.0029500378942168709).epsilon(1e-11));
    for (int n : {2, 5, 15, 100}) {
        CHECK(q7_exp_bias(QuantileLevel(1e-9), n) == Approx(1.0 / n).epsilon(1e-7));
    }
    CHECK_THROWS_AS(q7_exp_bias(QuantileLevel(0.5), 1), ParameterError);
}

TEST_CASE("Monte Carlo: type-7 bias on the unit exponential") {
    {
        const QuantileLevel q(0.5);
        const auto mc = test::mc_exponential(
            2, 1000000, 31, [&](const auto& xs) { return hf_quantile(SortedSample::from_sorted(xs), q, 7); });
        CHECK(std::abs((mc.mean - kLn2) - q7_exp_bias(q, 2)) <= 3 * mc.se_mean);
    }
    {
        const QuantileLevel q(2.0 / 3.0);
        const auto mc = test::mc_exponential(
            15, 1000000, 32, [&](const auto& xs) { return hf_quantile(SortedSample::from_sorted(xs), q, 7); });
        CHECK(std::abs((mc.mean - std::log(3.0)) - q7_exp_bias(q, 15)) <= 3 * mc.se_mean);
    }
}

TEST_CASE("type-7 expectation follows the Renyi decomposition") {
    // E[Q7] = E[X_(i)] + {q(n-1)}/(n-i) with i = floor(q(n-1)) + 1.
    const int n = 9;
    for (double qv : {0.1, 0.37, 0.8}) {
        const QuantileLevel q(qv);
        const int i = static_cast<int>(std::floor(qv * (n - 1))) + 1;
        const double frac = qv * (n - 1) - (i - 1);
        const double expected = exp_order_stat_mean(n, i) + frac / (n - i);
        const auto mc = test::mc_exponential(
            n, 1000000, 41, [&](const auto& xs) { return hf_quantile(SortedSample::from_sorted(xs), q, 7); });
        CHECK(std::abs(mc.mean - expected) <= 3 * mc.se_mean);
    }
}

TEST_CASE("expon_frac frozen values") {
    CHECK(expon_frac(QuantileLevel(0.5), 2) == Approx(0.19314718055994531).epsilon(1e-13));
    CHECK(expon_frac(QuantileLevel(0.5), 3) == Approx(-0.14018615277338802).epsilon(1e-13));
    CHECK(expon_frac(QuantileLevel(0.25), 5) == Approx(-0.48695378264465722).epsilon(1e-13));
    CHECK_THROWS_AS(expon_frac(QuantileLevel(0.5), 1), ParameterError);
}

TEST_CASE("expon_frac solves the zero-bias equation built from quadrature moments") {
    for (int n : {2, 3, 8, 15, 27}) {
        for (double qv = 0.05; qv < 0.96; qv += 0.09) {
            const QuantileLevel q(qv);
            const int i = interpolation_anchor(q, n);
            const auto lo = test::exp_order_stat_quadrature(n, i);
            const auto hi = test::exp_order_stat_quadrature(n, i + 1);
            const long double f = (-std::log1p(-static_cast<long double>(qv)) - lo.mean) / (hi.mean - lo.mean);
            INFO("n=", n, " q=", qv);
            CHECK(std::abs(expon_frac(q, n) - static_cast<double>(f)) < 1e-9);
        }
    }
}

TEST_CASE("q10_quantile") {
    CHECK(q10_quantile(SortedSample({0.2, 1.0}), QuantileLevel(0.5)) ==
          Approx(0.35451774444795625).epsilon(1e-13));
    for (double c : {-3.5, 0.0, 7.25}) {
        for (double qv : {0.01, 0.5, 0.99}) {
            CHECK(q10_quantile(SortedSample(std::vector<double>(9, c)), QuantileLevel(qv)) == c);
        }
    }
    CHECK_THROWS_AS(q10_quantile(SortedSample({1.0}), QuantileLevel(0.5)), InputError);
}

TEST_CASE("Q10 is unbiased on the unit exponential (Monte Carlo)") {
    const QuantileLevel q(0.5);
    const auto mc = test::mc_exponential(
        15, 1000000, 51, [&](const auto& xs) { return q10_quantile(SortedSample::from_sorted(xs), q); });
    CHECK(std::abs(mc.mean - kLn2) <= 3 * mc.se_mean);
}

TEST_CASE("zero-bias construction holds analytically on the full grid") {
    for (int n = 2; n <= 50; ++n) {
        for (int k = 1; k <= 19; ++k) {
            const QuantileLevel q(k * 0.05);
            const int i = interpolation_anchor(q, n);
            const double expectation = exp_order_stat_mean(n, i) + expon_frac(q, n) / (n - i);
            REQUIRE(std::abs(expectation + std::log1p(-q.value())) <= kAnalyticTolerance);
        }
    }
}

// ---------------------------------------------------------------------------
// Generalized estimator
// ---------------------------------------------------------------------------

TEST_CASE("optimal_weights examples") {
    const auto w = optimal_weights(2, 1, 1, QuantileLevel(0.5));
    CHECK(w.anchor_bias == Approx(-0.19314718055994531).epsilon(1e-13));
    CHECK(w.beta == Approx(2 * -0.19314718055994531).epsilon(1e-13));
    CHECK(w.tail_weights.at(0) == Approx(0.19314718055994531).epsilon(1e-13));
    CHECK(w.analytic_variance == Approx(0.28730583335825612).epsilon(1e-13));

    const auto flat = optimal_weights(4, 0, 4, QuantileLevel(0.5));
    REQUIRE(flat.tail_weights.size() == 4);
    for (double f : flat.tail_weights) {
        CHECK(f == Approx(0.17328679513998633).epsilon(1e-13));
    }
    CHECK(flat.anchor_weight == 0.0);

    CHECK_THROWS_AS(optimal_weights(4, 4, 1, QuantileLevel(0.5)), ParameterError);
    CHECK_THROWS_AS(optimal_weights(4, 1, 4, QuantileLevel(0.5)), ParameterError);
    CHECK_THROWS_AS(optimal_weights(4, 1, 0, QuantileLevel(0.5)), ParameterError);
    CHECK_THROWS_AS(optimal_weights(4, -1, 1, QuantileLevel(0.5)), ParameterError);
}

TEST_CASE("property: WeightVector invariants over all valid (n, i, m, q)") {
    for (int n = 1; n <= 25; ++n) {
        for (int i = 0; i <= n - 1; ++i) {
            for (int m = 1; m <= n - i; ++m) {
                for (double qv : {0.03, 0.25, 0.5, 0.77, 0.98}) {
                    const auto w = optimal_weights(n, i, m, QuantileLevel(qv));
                    double sum = 0.0;
                    for (double f : w.tail_weights) sum += f;
                    if (i >= 1) {
                        REQUIRE(std::abs(w.anchor_weight + sum - 1.0) <= kAlgebraicTolerance);
                    }
                    for (int l = 0; l + 1 < m; ++l) {
                        REQUIRE(std::abs(w.tail_weights[static_cast<std::size_t>(l)] + w.beta / 2) <=
                                kAlgebraicTolerance);
                    }
                    REQUIRE(std::abs(w.tail_weights.back() + w.beta * (n - i - m + 1) / 2) <=
                            kAlgebraicTolerance);
                    REQUIRE(std::abs(w.expected_value() + std::log1p(-qv)) <= kAnalyticTolerance);
                }
            }
        }
    }
}

TEST_CASE("weight family reduces to Q10 and to the MLE") {
    std::mt19937_64 gen(5);
    for (int n = 2; n <= 40; ++n) {
        for (int k = 1; k <= 19; ++k) {
            const QuantileLevel q(k * 0.05);
            const int i = interpolation_anchor(q, n);
            REQUIRE(std::abs(optimal_weights(n, i, 1, q).tail_weights[0] - expon_frac(q, n)) <=
                    kAlgebraicTolerance);
        }
        std::exponential_distribution<double> expo(1.0);
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (double& x : xs) x = expo(gen);
        const SortedSample s(xs);
        const QuantileLevel q(0.1 + 0.8 * (n % 7) / 7.0);
        CHECK(std::abs(q11_general(s, q, 0, n) - q11_mle(s, q)) <= kAlgebraicTolerance);
        const int i = interpolation_anchor(q, n);
        CHECK(std::abs(q11_general(s, q, i, 1) - q10_quantile(s, q)) <= kAlgebraicTolerance);
    }
}

TEST_CASE("q11_general on a constant sample") {
    const SortedSample s(std::vector<double>(10, 4.5));
    for (int i = 1; i <= 9; ++i) {
        for (int m = 1; m <= 10 - i; ++m) {
            CHECK(q11_general(s, QuantileLevel(0.4), i, m) == Approx(4.5).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(q11_general(s, QuantileLevel(0.4), 5, 6), ParameterError);
}

TEST_CASE("q11_variance") {
    CHECK(q11_variance(2, 1, 1, QuantileLevel(0.5)) == Approx(0.28730583335825612).epsilon(1e-13));
    CHECK(q11_variance(15, 10, 5, QuantileLevel(2.0 / 3.0)) ==
          Approx(0.11764113409030120).epsilon(1e-12));
    for (int m = 1; m <= 6; ++m) {
        const double l = std::log(0.3);
        CHECK(q11_variance(6, 0, m, QuantileLevel(0.7)) == Approx(l * l / m).epsilon(1e-13));
    }
}

TEST_CASE("property: q11_variance is non-increasing in m") {
    for (int n = 1; n <= 40; ++n) {
        for (int i = 0; i < n; ++i) {
            for (double qv : {0.05, 0.5, 0.95}) {
                for (int m = 1; m < n - i; ++m) {
                    REQUIRE(q11_variance(n, i, m + 1, QuantileLevel(qv)) <=
                            q11_variance(n, i, m, QuantileLevel(qv)));
                }
            }
        }
    }
}

TEST_CASE("Monte Carlo: q11_general variance matches the analytic formula") {
    const QuantileLevel q(2.0 / 3.0);
    const auto mc = test::mc_exponential(15, 1000000, 61, [&](const auto& xs) {
        return q11_general(SortedSample::from_sorted(xs), q, 10, 5);
    });
    CHECK(std::abs(mc.mean - std::log(3.0)) <= 3 * mc.se_mean);
    CHECK(std::abs(mc.variance - q11_variance(15, 10, 5, q)) <= 3 * mc.se_variance);
}

TEST_CASE("q11_mle") {
    CHECK(q11_mle(SortedSample({1, 1, 1}), QuantileLevel(0.5)) == Approx(kLn2).epsilon(1e-15));
    CHECK(q11_mle(SortedSample({0, 0, 0, 0}), QuantileLevel(0.8)) == 0.0);

    const QuantileLevel q(0.9);
    const auto mc = test::mc_exponential(
        15, 1000000, 71, [&](const auto& xs) { return q11_mle(SortedSample::from_sorted(xs), q); });
    CHECK(std::abs(mc.mean - std::log(10.0)) <= 3 * mc.se_mean);
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

TEST_CASE("estimate dispatches") {
    CHECK(estimate(SortedSample({1, 2, 3}), QuantileLevel(0.5), EstimatorId::hyndman_fan(7)) == 2.0);
    CHECK(estimate(SortedSample({1, 1, 1}), QuantileLevel(0.5), EstimatorId::q11_mle()) ==
          Approx(kLn2).epsilon(1e-15));
    CHECK(estimate(SortedSample({2, 2, 2, 2}), QuantileLevel(0.3), EstimatorId::q10()) == 2.0);
    CHECK_THROWS_AS(estimate(SortedSample({2, 2}), QuantileLevel(0.3), EstimatorId::q11_general(1, 2)),
                    ParameterError);
}

TEST_CASE("EstimatorId names round-trip") {
    for (const auto& id : all_estimator_ids()) {
        CHECK(EstimatorId::parse(id.name()) == id);
    }
    CHECK(EstimatorId::q11_general(3, 4).name() == "Q11(i=3;m=4)");
    CHECK(EstimatorId::parse("q11(3,4)") == EstimatorId::q11_general(3, 4));
    CHECK(EstimatorId::parse(" hf4 ") == EstimatorId::hyndman_fan(4));
    CHECK_THROWS_AS(EstimatorId::parse("HF10"), ParameterError);
    CHECK_THROWS_AS(EstimatorId::parse("Q12"), ParameterError);
    CHECK_THROWS_AS(EstimatorId::q11_general(3, 4).validate_for(6), ParameterError);
    CHECK_NOTHROW(EstimatorId::q11_general(2, 4).validate_for(6));
}

TEST_CASE("property: estimators are pure, scale equivariant, and translation behaves as documented") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> uq(0.01, 0.99);
    std::uniform_real_distribution<double> uc(0.1, 50.0);
    for (int iter = 0; iter < 500; ++iter) {
        const int n = 2 + static_cast<int>(gen() % 30);
        const SortedSample s = random_sample(gen, n);
        const QuantileLevel q(uq(gen));
        const double c = uc(gen);
        const SortedSample scaled = transformed(s, c, 0.0);
        const SortedSample shifted = transformed(s, 1.0, c);
        const int i = static_cast<int>(gen() % static_cast<unsigned>(n));
        const int m = 1 + static_cast<int>(gen() % static_cast<unsigned>(n - i));
        auto ids = all_estimator_ids();
        ids.push_back(EstimatorId::q11_general(i, m));
        for (const auto& id : ids) {
            const double base = estimate(s, q, id);
            REQUIRE(estimate(s, q, id) == base);
            const double tol = 1e-11 * (1.0 + std::abs(c * base) + c * 10.0);
            REQUIRE(std::abs(estimate(scaled, q, id) - c * base) <= tol);
            if (id.kind != EstimatorKind::Q11Mle && id.kind != EstimatorKind::Q11General) {
                REQUIRE(std::abs(estimate(shifted, q, id) - (base + c)) <= tol);
            }
        }
        // The exponential MLE is not translation equivariant.
        const double mle = estimate(s, q, EstimatorId::q11_mle());
        CHECK(std::abs(estimate(shifted, q, EstimatorId::q11_mle()) - (mle + c)) > 1e-6);
    }
}
