#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bates {

/// Invalid input: sizes, widths, model parameters, out-of-domain queries.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Zero pivot during banded LU. `pivot_index()` is 1-based.
class FactorizationError : public std::runtime_error {
public:
    explicit FactorizationError(std::size_t pivot_index)
        : std::runtime_error("banded LU: exactly singular at pivot " + std::to_string(pivot_index)),
          pivot_index_(pivot_index) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }

private:
    std::size_t pivot_index_;
};

/// Rational stability function evaluated at a pole (p == 0).
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative eigensolver failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bates
