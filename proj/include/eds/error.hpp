#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eds {

enum class ErrorKind {
  InvalidInput,
  InvalidCurve,
  BadReduction,
  PrimeTooLarge,
  TrivialReduction,
  AmbiguousOrder,
  TorsionPoint,
  NonSquareDenominator,
  GrowthLimitExceeded,
  TableMiss,
  TableMismatch,
  PreconditionFailed,
  NotSquarefree,
  HypothesisViolated,
  BudgetExceeded,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the error class
/// named in the public contracts (BadReduction, TableMiss, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eds
