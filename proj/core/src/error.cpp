#include "specpredict/error.hpp"

namespace specpredict {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPositive: return "NotPositive";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::SingularSample: return "SingularSample";
    case Errc::LagOutOfRange: return "LagOutOfRange";
    case Errc::NotLogIntegrable: return "NotLogIntegrable";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SingularLeadCoefficient: return "SingularLeadCoefficient";
    case Errc::NotInverseIntegrable: return "NotInverseIntegrable";
    case Errc::SingularToeplitz: return "SingularToeplitz";
    case Errc::TruncationTooShort: return "TruncationTooShort";
    case Errc::SingularInnerMatrix: return "SingularInnerMatrix";
    case Errc::FormulaMismatch: return "FormulaMismatch";
    case Errc::IllConditionedGram: return "IllConditionedGram";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace specpredict
