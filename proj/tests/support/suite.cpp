#include "suite.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace specpredict::testing {

WeightFunction ma1(double a) {
  return WeightFunction::trig_poly({Matrix::Constant(1, 1, 1.0 + a * a), Matrix::Constant(1, 1, a)});
}

WeightFunction random_trig_poly(int q, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::vector<Matrix> p;
  for (int k = 0; k <= degree; ++k) {
    Matrix m(q, q);
    for (int r = 0; r < q; ++r) {
      for (int c = 0; c < q; ++c) m(r, c) = cplx(normal(rng), normal(rng));
    }
    p.push_back(m);
  }
  // P^* P = sum_l (sum_j P_j^* P_{j+l}) e_l
  std::vector<Matrix> coeffs;
  for (int l = 0; l <= degree; ++l) {
    Matrix m = Matrix::Zero(q, q);
    for (int j = 0; j + l <= degree; ++j) m += p[j].adjoint() * p[j + l];
    coeffs.push_back(m);
  }
  coeffs[0] = hermitian_part(coeffs[0]) + 0.5 * Matrix::Identity(q, q);
  return WeightFunction::trig_poly(std::move(coeffs));
}

WeightFunction diagonal_pair() {
  Matrix m0 = Matrix::Zero(2, 2);
  Matrix m1 = Matrix::Zero(2, 2);
  m0(0, 0) = 1.25;
  m0(1, 1) = 1.09;
  m1(0, 0) = 0.5;
  m1(1, 1) = -0.3;
  return WeightFunction::trig_poly({m0, m1});
}

Matrix random_positive(int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> eig(0.5, 2.5);
  Matrix g(q, q);
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < q; ++c) g(r, c) = cplx(normal(rng), normal(rng));
  }
  const Matrix u = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Eigen::VectorXd d(q);
  for (int i = 0; i < q; ++i) d(i) = eig(rng);
  return hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint());
}

std::vector<NamedWeight> weight_suite() {
  return {
      {"ma1", ma1(0.5), true},
      {"random_q2_deg2", random_trig_poly(2, 2, 20240611), false},
      {"random_q2_deg3", random_trig_poly(2, 3, 77), false},
      {"diagonal_q2", diagonal_pair(), false},
  };
}

Matrix brute_fourier(const GridFunction& f, int lag) {
  const std::size_t n = f.size();
  Matrix acc = Matrix::Zero(f.dim(), f.dim());
  for (std::size_t j = 0; j < n; ++j) {
    const double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    acc += std::exp(cplx(0.0, lag * t)) * f[j];
  }
  return acc / static_cast<double>(n);
}

std::vector<Matrix> right_inverse(const std::vector<Matrix>& a) {
  const Matrix lead_inv = a.front().inverse();
  std::vector<Matrix> b{lead_inv};
  for (std::size_t m = 1; m < a.size(); ++m) {
    Matrix acc = Matrix::Zero(a.front().rows(), a.front().cols());
    for (std::size_t j = 1; j <= m; ++j) acc += b[m - j] * a[j];
    b.push_back(-acc * lead_inv);
  }
  return b;
}

double toeplitz_det(const std::map<int, Matrix>& c, int order) {
  const Eigen::Index q = c.at(0).rows();
  Matrix g(order * q, order * q);
  for (int j = 0; j < order; ++j) {
    for (int k = 0; k < order; ++k) g.block(j * q, k * q, q, q) = c.at(j - k);
  }
  return g.partialPivLu().determinant().real();
}

LeastSquaresFit weighted_least_squares(const GridFunction& w, const std::vector<int>& lags) {
  const std::size_t n = w.size();
  const Eigen::Index q = w.dim();
  const auto m = static_cast<Eigen::Index>(lags.size());
  // Row i of D stacks the rows i of D_k. The transposed residual of row i at t_j is
  // L_j^T u_i - M_j^T x with M_j the vertical stack of e_k(t_j) L_j.
  std::vector<Matrix> chol;
  chol.reserve(n);
  for (std::size_t j = 0; j < n; ++j) chol.push_back(Eigen::LLT<Matrix>(hermitian_part(w[j])).matrixL());
  Matrix a(static_cast<Eigen::Index>(n) * q, m * q);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    for (Eigen::Index k = 0; k < m; ++k) {
      a.block(static_cast<Eigen::Index>(j) * q, k * q, q, q) =
          (std::exp(cplx(0.0, lags[k] * t)) * chol[j]).transpose();
    }
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  std::map<int, Matrix> coeffs;
  for (int lag : lags) coeffs[lag] = Matrix::Zero(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    Vector b(static_cast<Eigen::Index>(n) * q);
    for (std::size_t j = 0; j < n; ++j) b.segment(static_cast<Eigen::Index>(j) * q, q) = chol[j].transpose().col(i);
    const Vector x = qr.solve(b);
    for (Eigen::Index k = 0; k < m; ++k) coeffs[lags[k]].row(i) = x.segment(k * q, q).transpose();
  }
  Matrix delta = Matrix::Zero(q, q);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    Matrix r = Matrix::Identity(q, q);
    for (const auto& [lag, d] : coeffs) r -= std::exp(cplx(0.0, lag * t)) * d;
    delta += r * w[j] * r.adjoint();
  }
  return {std::move(coeffs), hermitian_part(delta / static_cast<double>(n))};
}

double loewner_violation(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(b - a));
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

}  // namespace specpredict::testing
