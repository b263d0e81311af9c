#include "langevin_bounds/error.hpp"

namespace lbound {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::A1Violation: return "a1-violation";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::AlphaComplex: return "alpha-complex";
    case ErrorKind::CosineDomain: return "cosine-domain";
    case ErrorKind::A2Ratio: return "a2-ratio";
    case ErrorKind::DivergentPgf: return "divergent-pgf";
    case ErrorKind::NumericDomain: return "numeric-domain";
    case ErrorKind::TailDivergence: return "tail-divergence";
    case ErrorKind::SimulationFailure: return "simulation-failure";
    case ErrorKind::IncreaseHorizon: return "increase-horizon";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

bool is_infeasible_s(ErrorKind kind) noexcept {
  return kind == ErrorKind::OutOfDomain || kind == ErrorKind::AlphaComplex || kind == ErrorKind::CosineDomain ||
         kind == ErrorKind::A2Ratio;
}

}  // namespace lbound
