#include "moc/errors.hpp"

namespace moc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage: return "usage error";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::DegenerateGradient: return "degenerate gradient";
    case ErrorCode::DegenerateVariant: return "degenerate coordinate variant";
    case ErrorCode::NonUnitAxis: return "non-unit rotation axis";
    case ErrorCode::ZeroField: return "zero field";
    case ErrorCode::NonOrthogonalBasis: return "non-orthogonal basis";
    case ErrorCode::NoValidVariant: return "no valid coordinate variant";
    case ErrorCode::FieldSingular: return "field singular";
    case ErrorCode::MissingGoal: return "missing goal";
    case ErrorCode::InsideObstacle: return "inside obstacle";
    case ErrorCode::NonFiniteState: return "non-finite state";
    case ErrorCode::ZeroVelocity: return "zero velocity";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "I/O error";
  }
  return "error";
}

}  // namespace moc
