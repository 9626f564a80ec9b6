#include "specpredict/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specpredict/error.hpp"

namespace specpredict {

void require_square(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(Errc::DimensionMismatch, "expected a non-empty square matrix, got " +
                                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw Error(Errc::NonFinite, "matrix has NaN or Inf entries");
}

void require_same_dimension(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, "operands have different dimensions");
  }
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianMatrix::HermitianMatrix(const Matrix& m, double tol) {
  require_square(m);
  const double defect = (m - m.adjoint()).norm();
  if (defect > tol * m.norm()) {
    throw Error(Errc::NotHermitian, "Hermitian defect " + std::to_string(defect));
  }
  m_ = hermitian_part(m);
}

HermitianMatrix::HermitianMatrix(const Matrix& m, Unchecked) : m_(hermitian_part(m)) {}

HermitianMatrix HermitianMatrix::from_symmetrized(const Matrix& m) {
  require_square(m);
  return HermitianMatrix(m, Unchecked{});
}

Eigen::VectorXd HermitianMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }
double HermitianMatrix::max_eigenvalue() const { return eigenvalues().maxCoeff(); }

bool is_positive(const HermitianMatrix& h, double eps) {
  const Eigen::VectorXd ev = h.eigenvalues();
  const double hi = ev.maxCoeff();
  return hi > 0.0 && ev.minCoeff() > eps * hi;
}

PositiveMatrix::PositiveMatrix(const HermitianMatrix& h, double eps) : h_(h) {
  if (!is_positive(h_, eps)) {
    throw Error(Errc::NotPositive, "minimum eigenvalue " + std::to_string(h_.min_eigenvalue()) +
                                       " below positivity threshold");
  }
}

cplx normalized_trace(const Matrix& a) {
  require_square(a);
  return a.trace() / static_cast<double>(a.rows());
}

double normalized_norm(const Matrix& a) {
  require_square(a);
  return a.norm() / std::sqrt(static_cast<double>(a.rows()));
}

NormalizedMetrics normalized_metrics(const Matrix& a) {
  return {normalized_trace(a), normalized_norm(a), a.determinant()};
}

PositiveMatrix principal_sqrt(const PositiveMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  const Eigen::VectorXd root = es.eigenvalues().cwiseSqrt();
  const Matrix r = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
  return PositiveMatrix(HermitianMatrix::from_symmetrized(r));
}

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double eps) {
  require_same_dimension(a.matrix(), b.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> ea(a.matrix(), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> eb(b.matrix(), Eigen::EigenvaluesOnly);
  const double scale = std::max({ea.eigenvalues().cwiseAbs().maxCoeff(),
                                 eb.eigenvalues().cwiseAbs().maxCoeff(),
                                 std::numeric_limits<double>::min()});
  const HermitianMatrix diff = HermitianMatrix::from_symmetrized(b.matrix() - a.matrix());
  return diff.min_eigenvalue() >= -eps * scale;
}

double log_det_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
  return ev.array().log().sum();
}

Matrix checked_inverse(const Matrix& m) {
  require_square(m);
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw Error(Errc::InvalidArgument, "matrix is numerically singular");
  return lu.inverse();
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

PolarDecomposition polar_decomposition(const Matrix& a) {
  require_square(a);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  PolarDecomposition out;
  out.unitary = u * v.adjoint();
  out.positive = hermitian_part(v * svd.singularValues().asDiagonal() * v.adjoint());
  return out;
}

double relative_deviation(const Matrix& a, const Matrix& b) {
  require_same_dimension(a, b);
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

}  // namespace specpredict
