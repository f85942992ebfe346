#include "pcs/errors.hpp"

namespace pcs {

std::string_view error_tag(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::RotationNearPi: return "rotation-near-pi";
    case ErrorCode::NearSingular: return "near-singular";
    case ErrorCode::NotConverged: return "not-converged";
    case ErrorCode::SingularJacobian: return "singular-jacobian";
    case ErrorCode::RankDeficient: return "rank-deficient";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::RotationNearPi:
    case ErrorCode::NearSingular:
    case ErrorCode::NotConverged:
    case ErrorCode::SingularJacobian:
    case ErrorCode::RankDeficient:
      return true;
    default:
      return false;
  }
}

}  // namespace pcs
