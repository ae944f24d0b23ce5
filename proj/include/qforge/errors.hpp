#pragma once

#include <stdexcept>
#include <string>

namespace qforge {

/// An argument is outside the domain an operation accepts (bad type, index, q).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The data handed to an operation cannot be used (empty, non-finite, too short).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qforge
