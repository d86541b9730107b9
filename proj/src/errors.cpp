#include "kp/errors.hpp"

namespace kp {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonMonotonePositions: return "NonMonotonePositions";
    case Errc::PositionOutOfBox: return "PositionOutOfBox";
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::RecursionPole: return "RecursionPole";
    case Errc::SubsetBlowup: return "SubsetBlowup";
    case Errc::BracketExhaustion: return "BracketExhaustion";
    case Errc::InvalidRoot: return "InvalidRoot";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::BandNotFound: return "BandNotFound";
    case Errc::GaugePinFailure: return "GaugePinFailure";
    case Errc::GapClosure: return "GapClosure";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace kp
