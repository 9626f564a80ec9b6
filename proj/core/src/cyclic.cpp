#include <algorithm>
#include <cmath>
#include <numbers>

#include "specpredict/duality.hpp"
#include "specpredict/error.hpp"

namespace specpredict {

namespace {

// Row functions on Z_N with values in C^{1 x q} are stored as vectors of length
// N q, entry m q + i holding component i at the point m.
Matrix character_rows(const std::vector<int>& lags, int n, Eigen::Index q) {
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(lags.size()) * q, n * q);
  for (std::size_t a = 0; a < lags.size(); ++a) {
    for (int m = 0; m < n; ++m) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(lags[a]) * m) % n) / n;
      const cplx v = std::polar(1.0, phase);
      for (Eigen::Index i = 0; i < q; ++i) b(static_cast<Eigen::Index>(a) * q + i, m * q + i) = v;
    }
  }
  return b;
}

Matrix block_diagonal(const std::vector<Matrix>& blocks, double scale) {
  const Eigen::Index q = blocks.front().rows();
  const auto n = static_cast<Eigen::Index>(blocks.size());
  Matrix out = Matrix::Zero(n * q, n * q);
  for (Eigen::Index m = 0; m < n; ++m) out.block(m * q, m * q, q, q) = scale * blocks[m];
  return out;
}

// Orthogonal projection of the rows of `u` onto the row span of `basis` under the
// pairing x Omega y^*.
Matrix project_rows(const Matrix& u, const Matrix& basis, const Matrix& omega) {
  if (basis.rows() == 0) return Matrix::Zero(u.rows(), u.cols());
  const Matrix gram = basis * omega * basis.adjoint();
  const Matrix rhs = u * omega * basis.adjoint();
  const Matrix c = gram.ldlt().solve(rhs.adjoint()).adjoint();
  return c * basis;
}

// Orthonormal basis (columns) of span(cols), dropping numerically dependent directions.
Matrix orthonormal_span(const Matrix& cols) {
  if (cols.cols() == 0) return Matrix(cols.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv(0));
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

// Largest distance of a column of `x` from span(q_basis), relative to its norm.
double containment_residual(const Matrix& x, const Matrix& q_basis) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const Vector v = x.col(c);
    const Vector rest = q_basis.cols() ? Vector(v - q_basis * (q_basis.adjoint() * v)) : v;
    const double nv = v.norm();
    if (nv > 0.0) worst = std::max(worst, rest.norm() / nv);
  }
  return worst;
}

}  // namespace

CyclicModel cyclic_model(const WeightFunction& w, const IndexSetSpec& s) {
  if (s.family() != SetFamily::CyclicSubset) {
    throw Error(Errc::InvalidArgument, "cyclic verification needs a cyclic:N:[...] set");
  }
  const int n = s.group_order();
  std::vector<Matrix> samples;
  samples.reserve(n);
  if (w.is_trig_poly()) {
    for (int m = 0; m < n; ++m) samples.push_back(w.evaluate(2.0 * std::numbers::pi * m / n));
  } else {
    const GridFunction& g = w.samples();
    if (g.size() != static_cast<std::size_t>(n)) {
      throw Error(Errc::DimensionMismatch, "grid weight must have exactly N = " + std::to_string(n) + " samples");
    }
    // t_j = -pi + 2 pi j / N is the point 2 pi (j - N/2) / N
    for (int m = 0; m < n; ++m) samples.push_back(g[static_cast<std::size_t>((m + n / 2) % n)]);
  }
  return {n, std::move(samples), s.lags()};
}

VerificationReport cyclic_exact_verify(const CyclicModel& model, double tolerance) {
  const int n = model.order;
  if (n < 2 || model.weight.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::InvalidArgument, "cyclic model needs one weight sample per group element");
  }
  const Eigen::Index q = model.dim();
  std::vector<int> s;
  for (int k : model.set) {
    const int r = ((k % n) + n) % n;
    if (r == 0) throw Error(Errc::InvalidArgument, "cyclic set must not contain 0");
    s.push_back(r);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());

  std::vector<Matrix> inv;
  inv.reserve(n);
  for (int m = 0; m < n; ++m) {
    require_square(model.weight[m]);
    const HermitianMatrix h(model.weight[m]);
    if (!is_positive(h)) {
      throw Error(Errc::SingularSample, "weight at group point " + std::to_string(m) + " is not positive");
    }
    inv.push_back(hermitian_part(checked_inverse(h.matrix())));
  }
  std::vector<Matrix> wsym;
  for (const Matrix& x : model.weight) wsym.push_back(hermitian_part(x));

  std::vector<int> s0 = s;
  s0.insert(s0.begin(), 0);
  std::vector<int> rest;
  for (int k = 1; k < n; ++k) {
    if (!std::binary_search(s.begin(), s.end(), k)) rest.push_back(k);
  }

  const Matrix b_s = character_rows(s, n, q);
  const Matrix b_s0 = character_rows(s0, n, q);
  const Matrix b_rest = character_rows(rest, n, q);

  // Annihilator of M(S u {0}): rows g with b g^* = 0, i.e. conj(g^T) in ker(b).
  Eigen::JacobiSVD<Matrix> svd(b_s0, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * std::max(1.0, sv(0))) ++rank;
  const Matrix annihilator = svd.matrixV().rightCols(n * q - rank).conjugate();  // columns g^T

  const Matrix span = orthonormal_span(b_rest.transpose());
  const double contain_ann = containment_residual(annihilator, span);
  const double contain_span = containment_residual(b_rest.transpose(), annihilator);

  Eigen::JacobiSVD<Matrix> svd_s(b_s);
  Eigen::Index rank_s = 0;
  const auto& svs = svd_s.singularValues();
  while (rank_s < svs.size() && svs(rank_s) > 1e-10 * std::max(1.0, svs(0))) ++rank_s;
  const Eigen::Index dual_dim_s = n * q - rank_s;

  const Matrix omega_w = block_diagonal(wsym, 1.0 / n);
  const Matrix omega_inv = block_diagonal(inv, 1.0 / n);
  const Matrix mult_inv = block_diagonal(inv, 1.0);
  Matrix u = Matrix::Zero(q, n * q);
  for (int m = 0; m < n; ++m) u.block(0, m * q, q, q) = Matrix::Identity(q, q);

  const Matrix p = project_rows(u, b_s, omega_w);
  const Matrix i_tilde = project_rows(u, annihilator.transpose(), omega_inv);
  const Matrix delta_direct = hermitian_part((u - p) * omega_w * (u - p).adjoint());
  const Matrix left = (u - i_tilde) * omega_inv * u.adjoint();
  const Matrix right = hermitian_part((u - i_tilde) * omega_inv * (u - i_tilde).adjoint());
  const Matrix delta_left = checked_inverse(left);
  const Matrix delta_right = checked_inverse(right);
  const Matrix p_dual = u - delta_left * (u - i_tilde) * mult_inv;

  // F = p_dual lies in M(S u {0}) with zero mean, hence in M(S).
  const Matrix basis_s = orthonormal_span(b_s.transpose());
  const Matrix basis_s0 = orthonormal_span(b_s0.transpose());
  Matrix mean = Matrix::Zero(q, q);
  for (int m = 0; m < n; ++m) mean += p_dual.block(0, m * q, q, q);
  mean /= static_cast<double>(n);
  const double mean_zero = std::max({normalized_norm(mean), containment_residual(p_dual.transpose(), basis_s0),
                                     containment_residual(p_dual.transpose(), basis_s)});

  VerificationReport r;
  r.theorem = "cyclic";
  r.window = 0;
  r.grid = static_cast<std::size_t>(n);
  const auto expected_dim = static_cast<double>((n - static_cast<int>(s0.size())) * q);
  r.deviations.emplace_back("dimension_mismatch",
                            std::abs(static_cast<double>(annihilator.cols()) - static_cast<double>(span.cols())) +
                                std::abs(static_cast<double>(annihilator.cols()) - expected_dim));
  r.deviations.emplace_back("annihilator_in_span", contain_ann);
  r.deviations.emplace_back("span_in_annihilator", contain_span);
  r.deviations.emplace_back("delta_left_vs_right", relative_deviation(delta_left, delta_right));
  r.deviations.emplace_back("delta_direct_vs_dual", relative_deviation(delta_direct, delta_right));
  r.deviations.emplace_back("projection_identity", (p - p_dual).norm() / u.norm());
  r.deviations.emplace_back("mean_zero", mean_zero);
  r.values.emplace_back("annihilator_dimension", static_cast<double>(annihilator.cols()));
  r.values.emplace_back("span_dimension", static_cast<double>(span.cols()));
  r.values.emplace_back("dual_dimension_of_s", static_cast<double>(dual_dim_s));
  r.values.emplace_back("delta_scalar", std::exp(log_det_hermitian(delta_direct) / static_cast<double>(q)));
  r.pass = std::all_of(r.deviations.begin(), r.deviations.end(),
                       [&](const auto& d) { return std::isfinite(d.second) && d.second <= tolerance; });
  return r;
}

}  // namespace specpredict
