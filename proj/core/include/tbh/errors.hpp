#pragma once

#include <stdexcept>
#include <string>

namespace tbh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator or register dimensions do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A mode label was missing, duplicated, or otherwise unusable.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Fock truncation discarded more weight than the configured tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double deficit)
      : Error(what), deficit_(deficit) {}
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// Heralding probability fell below the configured floor.
class DegenerateOutcome : public Error {
 public:
  DegenerateOutcome(const std::string& what, double probability)
      : Error(what), probability_(probability) {}
  double probability() const noexcept { return probability_; }

 private:
  double probability_;
};

/// Branch representation grew beyond its configured limit.
class BranchLimitError : public Error {
 public:
  using Error::Error;
};

/// Dense expansion would exceed the configured memory budget.
class MemoryBudgetError : public Error {
 public:
  using Error::Error;
};

/// The requested engine cannot represent the requested configuration.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A series did not reach its certified tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace tbh
