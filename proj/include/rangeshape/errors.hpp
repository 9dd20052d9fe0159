#ifndef RANGESHAPE_ERRORS_HPP
#define RANGESHAPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rangeshape {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error {
  using Error::Error;
};

struct NotHermitian : Error {
  using Error::Error;
};

struct ConvergenceFailure : Error {
  using Error::Error;
};

struct IllConditionedFit : Error {
  using Error::Error;
};

struct ScaleError : Error {
  using Error::Error;
};

/// Raised when a polynomial does not satisfy q(0,0) > 0.
struct NotAnchored : Error {
  using Error::Error;
};

struct InvalidInput : Error {
  using Error::Error;
};

}  // namespace rangeshape

#endif
