#pragma once

#include <stdexcept>
#include <string>

namespace fspca {

/// Invalid argument supplied by the caller (bad dimensions, malformed support, ...).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A file could not be parsed; the message names the offending row/column.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The internal eigensolver failed to converge.
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exhaustive search refused: the number of candidate supports exceeds the cap.
struct oracle_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fspca
