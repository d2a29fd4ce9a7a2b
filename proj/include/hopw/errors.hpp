#pragma once

#include <stdexcept>
#include <string>

namespace hopw {

/// Argument outside the range where a special function can be evaluated
/// without overflow, or above the supported degree.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid angular-momentum indices, e.g. |m| > l.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// The packet has R0 . R0 ~ 0 so the complex direction of R0 is undefined.
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A user-facing value violates a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or produced a degenerate result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hopw
