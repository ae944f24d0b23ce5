#include "qforge/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qforge/errors.hpp"

namespace qforge {

namespace {

void check_values(const std::vector<double>& values) {
    if (values.empty()) {
        throw InputError("sample is empty");
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw InputError("sample value at position " + std::to_string(k) + " is not finite");
        }
    }
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
    check_values(values_);
    std::sort(values_.begin(), values_.end());
}

SortedSample::SortedSample(std::vector<double> values, Presorted) : values_(std::move(values)) {
    check_values(values_);
    if (!std::is_sorted(values_.begin(), values_.end())) {
        throw InputError("sample is not in ascending order");
    }
}

SortedSample SortedSample::from_sorted(std::vector<double> values) {
    return SortedSample(std::move(values), Presorted{});
}

QuantileLevel::QuantileLevel(double q) : q_(q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw ParameterError("quantile level must lie in (0, 1), got " + std::to_string(q));
    }
}

}  // namespace qforge
