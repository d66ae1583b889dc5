#pragma once

#include <stdexcept>
#include <string>

namespace ltl {

/// Mismatched dimension or grid spacing between operands.
struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Threshold quad violates its mode's inequality chain; message names the
/// failed inequality.
struct ThresholdOrderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bad argument value (zero factor, nonpositive radius, ...).
struct InvalidArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operation not available for this input (backend/kernel/shape combination).
struct UnsupportedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Experiment or domain configuration is inconsistent.
struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Growth cap or enumeration size exceeded.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Metric undefined for the given operands (empty point set / support).
struct UndefinedDistanceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operation precondition not met (e.g. input is not a still life).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// File parse failure; message carries a line/field diagnostic.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ltl
