#pragma once

#include <stdexcept>
#include <string>

namespace lelab {

/// A parameter or argument violates a documented bound.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A geometric query (circle, ball, sample point) leaves the admissible region.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lelab
