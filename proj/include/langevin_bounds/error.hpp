#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lbound {

enum class ErrorKind {
  InvalidParameter,
  A1Violation,
  OutOfDomain,
  AlphaComplex,    // s >= exp(b^2 / 2)
  CosineDomain,    // cos(sqrt(2 log s)) <= 0
  A2Ratio,         // exp(alpha) / cos(c) outside (1, 2)
  DivergentPgf,
  NumericDomain,
  TailDivergence,
  SimulationFailure,
  IncreaseHorizon,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for the kinds raised when s does not satisfy the pgf feasibility
// conditions.
bool is_infeasible_s(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lbound
