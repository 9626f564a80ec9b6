#pragma once

#include <gtest/gtest.h>

#include "specpredict/error.hpp"

namespace specpredict::testing {

/// Runs `f` and returns the code of the specpredict::Error it throws.
template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no specpredict::Error thrown";
  return Errc::InvalidArgument;
}

}  // namespace specpredict::testing
