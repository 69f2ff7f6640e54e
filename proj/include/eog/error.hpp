#pragma once

#include <stdexcept>
#include <string>

namespace eog {

/// A parameter is outside the operation's documented domain.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The input is well-formed but degenerate for the operation (constant, zero-scale, ...).
class DegenerateInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matrix or vector shapes disagree.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file or message content.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eog
