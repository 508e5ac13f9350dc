#pragma once

#include <stdexcept>
#include <string>

namespace henon {

// Exit codes used by the command line front end. Each exception type below
// maps onto exactly one of them.
enum class ExitCode : int {
  ok = 0,
  degenerate = 2,
  no_convergence = 3,
  invalid_config = 4,
  solver_failure = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::solver_failure; }
};

// A precondition on user supplied parameters does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::invalid_config; }
};

// p >= p_alpha(N): the radial problem on the ball has no positive solution.
class Supercritical : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// The linearization at v_p is (numerically) singular, or p sits so close to a
// forbidden exponent that the inverse is unusable.
class DegenerateExponent : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::degenerate; }
};

class NoConvergence : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::no_convergence; }
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace henon
