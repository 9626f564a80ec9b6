#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specpredict {

/// Failure categories raised by the library. The CLI reports them by name.
enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  NotHermitian,
  NotPositive,
  GridTooCoarse,
  SingularSample,
  LagOutOfRange,
  NotLogIntegrable,
  NoConvergence,
  SingularLeadCoefficient,
  NotInverseIntegrable,
  SingularToeplitz,
  TruncationTooShort,
  SingularInnerMatrix,
  FormulaMismatch,
  IllConditionedGram,
  ParseError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace specpredict
