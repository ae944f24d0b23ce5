#include "qforge/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <variant>

#include "qforge/format.hpp"
#include "qforge/moments.hpp"

namespace qforge {

namespace {

std::uint64_t fold(std::uint64_t h, std::uint64_t word) {
    return mix64(h ^ (word + RngStream::kGamma + (h << 6) + (h >> 2)));
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

std::uint64_t fold_distribution(std::uint64_t h, const DistributionSpec& dist) {
    const auto& fam = dist.family();
    h = fold(h, fam.index());
    return std::visit(
        [h](const auto& d) {
            if constexpr (requires { d.rate; }) {
                return fold(h, bits(d.rate));
            } else if constexpr (requires { d.mu; }) {
                return fold(fold(h, bits(d.mu)), bits(d.sigma));
            } else {
                return fold(fold(h, bits(d.shape)), bits(d.scale));
            }
        },
        fam);
}

}  // namespace

void validate_cell(const CellSpec& spec) {
    if (spec.n < 2) {
        throw ParameterError("sample size must be >= 2, got " + std::to_string(spec.n));
    }
    if (spec.trials < 1) {
        throw ParameterError("trials must be >= 1");
    }
    spec.estimator.validate_for(static_cast<std::size_t>(spec.n));
}

std::uint64_t cell_stream_id(const CellSpec& spec) {
    std::uint64_t h = fold_distribution(0, spec.dist);
    h = fold(h, static_cast<std::uint64_t>(spec.estimator.kind));
    h = fold(h, static_cast<std::uint64_t>(spec.estimator.anchor));
    h = fold(h, static_cast<std::uint64_t>(spec.estimator.tail));
    h = fold(h, static_cast<std::uint64_t>(spec.n));
    return fold(h, bits(spec.q.value()));
}

CellMetrics run_cell(const CellSpec& spec) {
    validate_cell(spec);
    RngStream rng(spec.seed, cell_stream_id(spec));
    const double truth = spec.dist.quantile(spec.q.value());
    const auto n = static_cast<std::size_t>(spec.n);

    MomentAccumulator acc;
    for (std::uint64_t t = 0; t < spec.trials; ++t) {
        const SortedSample s(sample(spec.dist, rng, n));
        acc.add(estimate(s, spec.q, spec.estimator) - truth);
    }

    CellMetrics m;
    m.trials = spec.trials;
    m.true_quantile = truth;
    m.bias = acc.mean();
    m.variance = acc.sample_variance();
    m.mse = m.bias * m.bias + acc.population_variance();
    m.se_bias = std::sqrt(m.variance / static_cast<double>(spec.trials));
    return m;
}

std::vector<CellResult> run_grid(std::span<const CellSpec> cells, unsigned threads) {
    if (cells.empty()) {
        throw ParameterError("grid is empty");
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
        try {
            validate_cell(cells[k]);
        } catch (const ParameterError& e) {
            throw CellError(k, e.what());
        }
    }

    std::vector<std::optional<CellMetrics>> metrics(cells.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            try {
                metrics[k] = run_cell(cells[k]);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<CellResult> out;
    out.reserve(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        out.push_back({cells[k], *metrics[k]});
    }
    return out;
}

double zero_bias_quantile_search(int n, double lo, double hi) {
    if (!(lo < hi)) {
        throw ParameterError("search interval must satisfy lo < hi");
    }
    const QuantileLevel qlo(lo);
    const QuantileLevel qhi(hi);
    double flo = q7_exp_bias(qlo, n);
    const double fhi = q7_exp_bias(qhi, n);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw ParameterError("bias has the same sign at q=" + format_double(lo) + " and q=" +
                             format_double(hi));
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < kZeroBiasMaxIterations; ++iter) {
        mid = 0.5 * (lo + hi);
        const double fmid = q7_exp_bias(QuantileLevel(mid), n);
        if (std::abs(fmid) <= kZeroBiasTolerance) {
            return mid;
        }
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    throw NumericalError("zero-bias search did not converge for n=" + std::to_string(n));
}

std::optional<std::pair<double, double>> find_zero_bias_bracket(int n) {
    double prev_q = 0.01;
    double prev = q7_exp_bias(QuantileLevel(prev_q), n);
    for (int k = 2; k <= 99; ++k) {
        const double q = k / 100.0;
        const double cur = q7_exp_bias(QuantileLevel(q), n);
        if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) {
            return std::pair{prev_q, q};
        }
        prev_q = q;
        prev = cur;
    }
    return std::nullopt;
}

}  // namespace qforge
