#pragma once

// Outer spectral factorization W = Phi^* Phi with Phi analytic
// (Phi(t) = sum_{j>=0} A_j e_j(t)) and int Phi dlambda = A_0 positive Hermitian,
// together with the Taylor coefficients B_j of Phi^{-1}.

#include <cstddef>
#include <span>
#include <vector>

#include "specpredict/matrix_core.hpp"
#include "specpredict/weight.hpp"

namespace specpredict {

struct FactorOptions {
  std::size_t truncation = 0;  // L; 0 selects N / 8
  int max_iterations = 200;
  double update_tolerance = 1e-12;
  double residual_tolerance = 1e-8;
};

class OuterFactor {
 public:
  /// Builds B by power-series inversion of A. `residual` is NaN when unknown.
  static OuterFactor from_coefficients(std::vector<Matrix> a, double residual);

  /// Takes both sequences as given (e.g. read back from a factor file).
  OuterFactor(std::vector<Matrix> a, std::vector<Matrix> b, double residual);

  Eigen::Index dim() const noexcept { return a_.front().rows(); }
  std::size_t truncation() const noexcept { return a_.size() - 1; }
  const std::vector<Matrix>& a() const noexcept { return a_; }
  const std::vector<Matrix>& b() const noexcept { return b_; }
  double residual() const noexcept { return residual_; }

  /// |B_L|, the size of the last retained coefficient of Phi^{-1}.
  double inverse_tail() const;

  /// Phi(t_j) = sum_{j<=L} A_j e_j(t_j).
  GridFunction evaluate(std::size_t n) const;

 private:
  std::vector<Matrix> a_;
  std::vector<Matrix> b_;
  double residual_;
};

/// Analytic factor S = Psi Psi^* on the grid (Wilson's Newton iteration), no
/// normalization applied. Exposed for convention checks.
struct WilsonResult {
  GridFunction psi;
  int iterations;
  double last_update;
};

WilsonResult wilson_factor(const GridFunction& s, const FactorOptions& options = {});

/// Throws NotLogIntegrable when the weight fails the log-integrability proxy,
/// NoConvergence when the iteration stalls or the residual exceeds tolerance.
OuterFactor factorize(const GridFunction& w, const FactorOptions& options = {});

/// B_0 = A_0^{-1}, B_m = -A_0^{-1} sum_{j=1}^m A_j B_{m-j}. Throws SingularLeadCoefficient.
std::vector<Matrix> invert_outer(std::span<const Matrix> a);

/// max_j |W(t_j) - Phi(t_j)^* Phi(t_j)| / (1 + |W(t_j)|), normalized norms.
double factor_residual(const OuterFactor& f, const GridFunction& w);

}  // namespace specpredict
