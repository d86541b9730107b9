#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kp {

enum class Errc {
  NonMonotonePositions,
  PositionOutOfBox,
  NonPositiveLength,
  InvalidArgument,
  RecursionPole,
  SubsetBlowup,
  BracketExhaustion,
  InvalidRoot,
  OutOfDomain,
  BandNotFound,
  GaugePinFailure,
  GapClosure,
  GridTooCoarse,
  CountMismatch,
  ConfigError,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace kp
