#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcs {

enum class ErrorCode {
  InvalidArgument,
  OutOfRange,
  RotationNearPi,
  NearSingular,
  NotConverged,
  SingularJacobian,
  RankDeficient,
  Config,
  Io,
};

// Stable lower-case tag used in CLI diagnostics ("ERROR:<tag>:").
std::string_view error_tag(ErrorCode code);

// True for failures of the numerics (as opposed to bad input).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pcs
