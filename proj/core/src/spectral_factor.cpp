#include "specpredict/spectral_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/FFT>

#include "specpredict/error.hpp"

namespace specpredict {

namespace {

std::vector<Matrix> transposed(std::span<const Matrix> xs) {
  std::vector<Matrix> out;
  out.reserve(xs.size());
  for (const Matrix& x : xs) out.push_back(x.transpose());
  return out;
}

// [g]_+ : keep frequencies 1..N/2-1, halve frequency 0, drop the rest.
GridFunction plus_part(const GridFunction& g) {
  const std::size_t n = g.size();
  std::vector<Matrix> c = analytic_coefficients(g, n / 2);
  c.front() = 0.5 * hermitian_part(c.front());
  return synthesize_analytic(c, n);
}

}  // namespace

OuterFactor OuterFactor::from_coefficients(std::vector<Matrix> a, double residual) {
  std::vector<Matrix> b = invert_outer(a);
  return OuterFactor(std::move(a), std::move(b), residual);
}

OuterFactor::OuterFactor(std::vector<Matrix> a, std::vector<Matrix> b, double residual)
    : a_(std::move(a)), b_(std::move(b)), residual_(residual) {
  if (a_.empty() || a_.size() != b_.size()) {
    throw Error(Errc::InvalidArgument, "A and B must be non-empty and of equal length");
  }
  require_square(a_.front());
  for (std::size_t j = 0; j < a_.size(); ++j) {
    require_same_dimension(a_[j], a_.front());
    require_same_dimension(b_[j], a_.front());
  }
}

double OuterFactor::inverse_tail() const { return normalized_norm(b_.back()); }

GridFunction OuterFactor::evaluate(std::size_t n) const { return synthesize_analytic(a_, n); }

std::vector<Matrix> invert_outer(std::span<const Matrix> a) {
  if (a.empty()) throw Error(Errc::InvalidArgument, "empty coefficient sequence");
  require_square(a.front());
  Eigen::FullPivLU<Matrix> lead(a.front());
  if (!lead.isInvertible() || condition_number(a.front()) > 1e14) {
    throw Error(Errc::SingularLeadCoefficient, "A_0 is singular");
  }
  const Matrix lead_inv = lead.inverse();
  std::vector<Matrix> b;
  b.reserve(a.size());
  b.push_back(lead_inv);
  for (std::size_t m = 1; m < a.size(); ++m) {
    Matrix acc = Matrix::Zero(a.front().rows(), a.front().cols());
    for (std::size_t j = 1; j <= m; ++j) acc += a[j] * b[m - j];
    b.push_back(-lead_inv * acc);
  }
  return b;
}

WilsonResult wilson_factor(const GridFunction& s, const FactorOptions& options) {
  const std::size_t n = s.size();
  const Eigen::Index q = s.dim();
  const Matrix identity = Matrix::Identity(q, q);

  const Matrix mean = hermitian_part(mean_integral(s));
  if (!is_positive(HermitianMatrix::from_symmetrized(mean))) {
    throw Error(Errc::NotLogIntegrable, "mean of the weight is not positive definite");
  }
  std::vector<Matrix> psi(n, principal_sqrt(PositiveMatrix(HermitianMatrix::from_symmetrized(mean))).matrix());

  double update = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    std::vector<Matrix> g(n);
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::PartialPivLU<Matrix> lu(psi[j]);
      const Matrix left = lu.solve(s[j]);                  // Psi^{-1} S
      const Matrix full = lu.solve(left.adjoint()).adjoint();  // Psi^{-1} S Psi^{-*}
      g[j] = hermitian_part(full) + identity;
    }
    const GridFunction gp = plus_part(GridFunction(std::move(g)));
    double diff = 0.0;
    double size = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      Matrix next = psi[j] * gp[j];
      diff = std::max(diff, (next - psi[j]).norm());
      size = std::max(size, next.norm());
      psi[j] = std::move(next);
    }
    if (!std::isfinite(diff) || !std::isfinite(size)) {
      throw Error(Errc::NoConvergence, "iteration diverged after " + std::to_string(it) + " steps");
    }
    update = diff / size;
    if (update < options.update_tolerance) break;
  }
  return WilsonResult{GridFunction(std::move(psi)), it, update};
}

OuterFactor factorize(const GridFunction& w, const FactorOptions& options) {
  const std::size_t n = w.size();
  const std::size_t l = options.truncation == 0 ? n / 8 : options.truncation;
  if (4 * l > n) {
    throw Error(Errc::GridTooCoarse, "truncation " + std::to_string(l) + " needs a grid of at least " +
                                         std::to_string(4 * l) + " points");
  }
  if (!class_membership(w).log_integrable) {
    throw Error(Errc::NotLogIntegrable, "log det W is not integrable on the grid");
  }

  // The kernel yields S = Theta Theta^*; with S = W^T, Phi = Theta^T gives W = Phi^* Phi.
  const GridFunction wt(transposed(w.samples()));
  const WilsonResult kernel = wilson_factor(wt, options);
  const GridFunction phi(transposed(kernel.psi.samples()));

  std::vector<Matrix> a = analytic_coefficients(phi, l + 1);
  const PolarDecomposition polar = polar_decomposition(a.front());
  for (Matrix& c : a) c = polar.unitary.adjoint() * c;
  a.front() = hermitian_part(a.front());

  OuterFactor draft = OuterFactor::from_coefficients(std::move(a), 0.0);
  const double residual = factor_residual(draft, w);
  if (!(residual <= options.residual_tolerance)) {
    throw Error(Errc::NoConvergence, "after " + std::to_string(kernel.iterations) +
                                         " iterations the factor residual is " + std::to_string(residual) +
                                         " (last update " + std::to_string(kernel.last_update) + ")");
  }
  return OuterFactor(draft.a(), draft.b(), residual);
}

double factor_residual(const OuterFactor& f, const GridFunction& w) {
  if (f.dim() != w.dim()) throw Error(Errc::DimensionMismatch, "factor and weight dimensions differ");
  const GridFunction phi = f.evaluate(w.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const Matrix diff = w[j] - phi[j].adjoint() * phi[j];
    worst = std::max(worst, normalized_norm(diff) / (1.0 + normalized_norm(w[j])));
  }
  return worst;
}

}  // namespace specpredict
