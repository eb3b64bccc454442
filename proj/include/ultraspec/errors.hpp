#pragma once

#include <stdexcept>
#include <string>

namespace ultraspec {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad inputs: malformed configs, out-of-range ranks, invalid parameter combos.
// The CLI maps these to exit code 2.
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Internal numerical-consistency failures (e.g. a gap root count exceeding the
// finite-rank cap, or a non-converging eigensolve).  CLI exit code 3.
struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(what) {}
};

// lambda landed (numerically) on a pole of a resolvent series.
struct PoleProximityError : NumericError {
  explicit PoleProximityError(const std::string& what) : NumericError(what) {}
};

// A quantity that is analytically infinite for this model (recurrent Green
// function, diverging diagonal resolvent at lambda = 0).
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& what) : Error(what) {}
};

}  // namespace ultraspec
