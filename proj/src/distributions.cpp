#include "qforge/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qforge/errors.hpp"
#include "qforge/format.hpp"

namespace qforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw ParameterError(std::string(what) + " must be positive and finite, got " +
                             format_double(v));
    }
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ParameterError(std::string(what) + " must be finite");
    }
}

// Lower half of the standard normal quantile, p in (0, 0.5].
double acklam_lower(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    if (x == 0.0) {
        return x;
    }
    // Halley refinement.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

void require_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ParameterError("probability must lie in (0, 1), got " + format_double(p));
    }
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_inv_cdf(double p) {
    require_probability(p);
    if (p > 0.5) {
        return -acklam_lower(1.0 - p);
    }
    return acklam_lower(p);
}

DistributionSpec::DistributionSpec(Family family) : family_(family) {
    std::visit(overloaded{
                   [](const Normal& d) {
                       require_finite(d.mu, "normal mu");
                       require_positive(d.sigma, "normal sigma");
                   },
                   [](const LogNormal& d) {
                       require_finite(d.mu, "lognormal mu");
                       require_positive(d.sigma, "lognormal sigma");
                   },
                   [](const Exponential& d) { require_positive(d.rate, "exponential rate"); },
                   [](const Weibull& d) {
                       require_positive(d.shape, "weibull shape");
                       require_positive(d.scale, "weibull scale");
                   },
                   [](const Lomax& d) {
                       require_positive(d.shape, "lomax shape");
                       require_positive(d.scale, "lomax scale");
                   },
                   [](const LogLogistic& d) {
                       require_positive(d.scale, "loglogistic scale");
                       require_positive(d.shape, "loglogistic shape");
                   },
               },
               family_);
}

DistributionSpec DistributionSpec::parse(const std::string& name,
                                         const std::vector<double>& params) {
    auto need = [&](std::size_t count) {
        if (params.size() != count) {
            throw ParameterError("distribution '" + name + "' takes " + std::to_string(count) +
                                 " parameter(s), got " + std::to_string(params.size()));
        }
    };
    if (name == "normal") {
        need(2);
        return DistributionSpec(Normal{params[0], params[1]});
    }
    if (name == "lognormal") {
        need(2);
        return DistributionSpec(LogNormal{params[0], params[1]});
    }
    if (name == "exponential") {
        need(1);
        return DistributionSpec(Exponential{params[0]});
    }
    if (name == "weibull") {
        need(2);
        return DistributionSpec(Weibull{params[0], params[1]});
    }
    if (name == "lomax") {
        need(2);
        return DistributionSpec(Lomax{params[0], params[1]});
    }
    if (name == "loglogistic") {
        need(2);
        return DistributionSpec(LogLogistic{params[0], params[1]});
    }
    throw ParameterError("unknown distribution family '" + name + "'");
}

std::string DistributionSpec::name() const {
    return std::visit(overloaded{
                          [](const Normal&) { return "normal"; },
                          [](const LogNormal&) { return "lognormal"; },
                          [](const Exponential&) { return "exponential"; },
                          [](const Weibull&) { return "weibull"; },
                          [](const Lomax&) { return "lomax"; },
                          [](const LogLogistic&) { return "loglogistic"; },
                      },
                      family_);
}

std::string DistributionSpec::params_text() const {
    auto kv = [](const char* k, double v) { return std::string(k) + "=" + format_double(v); };
    return std::visit(
        overloaded{
            [&](const Normal& d) { return kv("mu", d.mu) + ";" + kv("sigma", d.sigma); },
            [&](const LogNormal& d) { return kv("mu", d.mu) + ";" + kv("sigma", d.sigma); },
            [&](const Exponential& d) { return kv("rate", d.rate); },
            [&](const Weibull& d) { return kv("shape", d.shape) + ";" + kv("scale", d.scale); },
            [&](const Lomax& d) { return kv("shape", d.shape) + ";" + kv("scale", d.scale); },
            [&](const LogLogistic& d) {
                return kv("scale", d.scale) + ";" + kv("shape", d.shape);
            },
        },
        family_);
}

double DistributionSpec::quantile(double p) const {
    require_probability(p);
    return std::visit(
        overloaded{
            [p](const Normal& d) { return d.mu + d.sigma * normal_inv_cdf(p); },
            [p](const LogNormal& d) { return std::exp(d.mu + d.sigma * normal_inv_cdf(p)); },
            [p](const Exponential& d) { return -std::log1p(-p) / d.rate; },
            [p](const Weibull& d) { return d.scale * std::pow(-std::log1p(-p), 1.0 / d.shape); },
            [p](const Lomax& d) { return d.scale * std::expm1(-std::log1p(-p) / d.shape); },
            [p](const LogLogistic& d) { return d.scale * std::pow(p / (1.0 - p), 1.0 / d.shape); },
        },
        family_);
}

double DistributionSpec::cdf(double x) const {
    return std::visit(
        overloaded{
            [x](const Normal& d) { return normal_cdf((x - d.mu) / d.sigma); },
            [x](const LogNormal& d) {
                return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - d.mu) / d.sigma);
            },
            [x](const Exponential& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x); },
            [x](const Weibull& d) {
                return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / d.scale, d.shape));
            },
            [x](const Lomax& d) {
                return x <= 0.0 ? 0.0 : -std::expm1(-d.shape * std::log1p(x / d.scale));
            },
            [x](const LogLogistic& d) {
                return x <= 0.0 ? 0.0 : 1.0 / (1.0 + std::pow(x / d.scale, -d.shape));
            },
        },
        family_);
}

void sample_into(const DistributionSpec& dist, RngStream& rng, std::vector<double>& out) {
    for (double& v : out) {
        v = dist.quantile(rng.next_uniform());
    }
}

std::vector<double> sample(const DistributionSpec& dist, RngStream& rng, std::size_t count) {
    std::vector<double> out(count);
    sample_into(dist, rng, out);
    return out;
}

}  // namespace qforge
