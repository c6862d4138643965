#pragma once

#include <stdexcept>
#include <string>

namespace htev {

// Thrown when an evaluation is asked for outside the envelope the numerics can
// honestly serve (series past its term cap, precision tier exhausted, scan that
// cannot bracket).  Distinct from std::invalid_argument, which is reserved for
// inputs that violate a documented precondition.  The message carries the
// diagnostics (terms used, digits lost, ...) so callers can report rather than
// guess.
class NumericFailure : public std::runtime_error {
public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace htev
