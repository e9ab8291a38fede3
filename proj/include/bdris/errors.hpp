// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bdris {

/// Raised when a caller violates a documented precondition.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix factorization did not converge or the input was rank deficient.
class DecompositionFailure : public std::runtime_error {
public:
    DecompositionFailure(const std::string& what, long rows, long cols)
        : std::runtime_error(what + " (" + std::to_string(rows) + "x" + std::to_string(cols) + ")"),
          rows_(rows), cols_(cols) {}

    long rows() const noexcept { return rows_; }
    long cols() const noexcept { return cols_; }

private:
    long rows_;
    long cols_;
};

/// A computed quantity came out NaN or infinite.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bdris
