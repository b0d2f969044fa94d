#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace carlson {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A prime factor, multi-index or torus point does not fit the basis in use.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic (frequencies, atom counts) would overflow.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the operation's domain (T <= 0, sigma < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input violates a type invariant (zero coefficient, weights not summing to 1, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The Kronecker search ran out of scan steps. Existence is never in doubt,
/// so this is a resource error; `best_residuals` is the closest vector seen.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::vector<double> best_residuals, std::uint64_t steps)
      : Error(what), best_residuals(std::move(best_residuals)), steps(steps) {}

  std::vector<double> best_residuals;
  std::uint64_t steps;
};

/// A measure construction could not be completed (wraps the failing step).
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, int level, int source, std::int64_t repetition)
      : Error(what), level(level), source(source), repetition(repetition) {}

  int level;
  int source;
  std::int64_t repetition;
};

/// A construction would exceed the configured atom cap; raised before any work.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A window does not represent every point mass of the target measure.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// A mean was requested over a set of zero measure.
class EmptyMeasureError : public Error {
 public:
  using Error::Error;
};

/// Nested-construction plan is unusable (too few measures, no test polynomials).
class PlanError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, written or renamed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line(line) {}

  std::size_t line;
};

}  // namespace carlson
