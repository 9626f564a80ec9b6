#pragma once

// Complex q x q matrix algebra: Hermitian/positive wrappers, Loewner order,
// principal square roots, and the normalized trace/norm conventions
// (tr I = 1 and |I| = 1 for every dimension).

#include <complex>

#include <Eigen/Dense>

namespace specpredict {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTolHerm = 1e-12;  // relative Hermitian defect
inline constexpr double kEpsPd = 1e-12;    // positivity threshold, relative to the largest eigenvalue
inline constexpr double kTolSqrt = 1e-12;

/// Throws DimensionMismatch unless `m` is square and non-empty, NonFinite on NaN/Inf.
void require_square(const Matrix& m);
void require_same_dimension(const Matrix& a, const Matrix& b);

/// (A + A*) / 2.
Matrix hermitian_part(const Matrix& m);

/// A Hermitian matrix, stored exactly symmetrized.
class HermitianMatrix {
 public:
  /// Validates ||A - A*|| <= tol * ||A|| (Frobenius) and symmetrizes.
  explicit HermitianMatrix(const Matrix& m, double tol = kTolHerm);

  /// Symmetrizes without the defect check; for values Hermitian by construction.
  static HermitianMatrix from_symmetrized(const Matrix& m);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  struct Unchecked {};
  HermitianMatrix(const Matrix& m, Unchecked);

  Matrix m_;
};

/// A strictly positive Hermitian matrix: min eigenvalue > eps * max eigenvalue > 0.
class PositiveMatrix {
 public:
  explicit PositiveMatrix(const HermitianMatrix& h, double eps = kEpsPd);
  explicit PositiveMatrix(const Matrix& m, double eps = kEpsPd)
      : PositiveMatrix(HermitianMatrix(m), eps) {}

  const Matrix& matrix() const noexcept { return h_.matrix(); }
  const HermitianMatrix& hermitian() const noexcept { return h_; }
  Eigen::Index dim() const noexcept { return h_.dim(); }

 private:
  HermitianMatrix h_;
};

struct NormalizedMetrics {
  cplx ntrace;   // trace / q
  double nnorm;  // sqrt(tr(A A*)) with the normalized trace
  cplx det;
};

cplx normalized_trace(const Matrix& a);
double normalized_norm(const Matrix& a);
NormalizedMetrics normalized_metrics(const Matrix& a);

/// True when `h` passes the positivity test, without throwing.
bool is_positive(const HermitianMatrix& h, double eps = kEpsPd);

PositiveMatrix principal_sqrt(const PositiveMatrix& a);

/// A <= B in the Loewner order: min eig(B - A) >= -eps * max(||A||, ||B||).
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double eps = kEpsPd);

/// log det of a Hermitian matrix from its eigenvalues; -inf unless all are > 0.
double log_det_hermitian(const Matrix& m);

/// Inverse through a full-pivot LU; throws InvalidArgument if numerically singular.
Matrix checked_inverse(const Matrix& m);

/// 2-norm condition number from singular values (inf if singular).
double condition_number(const Matrix& m);

struct PolarDecomposition {
  Matrix unitary;   // U
  Matrix positive;  // P, so that A = U P
};

PolarDecomposition polar_decomposition(const Matrix& a);

/// ||a - b||_F / max(||a||_F, ||b||_F); 0 when both vanish.
double relative_deviation(const Matrix& a, const Matrix& b);

}  // namespace specpredict
