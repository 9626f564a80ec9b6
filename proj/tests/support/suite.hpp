#pragma once

// Shared test weights and independent oracles. Nothing here calls the FFT,
// Gram or recursion code paths under test.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "specpredict/matrix_core.hpp"
#include "specpredict/weight.hpp"

namespace specpredict::testing {

struct NamedWeight {
  std::string name;
  WeightFunction weight;
  bool scalar;  // q = 1, tighter tolerances apply
};

/// |1 + a e^{it}|^2.
WeightFunction ma1(double a);

/// P^* P + 0.5 I for a random analytic matrix polynomial P of the given degree.
WeightFunction random_trig_poly(int q, int degree, std::uint64_t seed);

/// diag(|1 + 0.5 e^{it}|^2, |1 - 0.3 e^{it}|^2).
WeightFunction diagonal_pair();

/// Random Hermitian positive definite matrix with eigenvalues in [0.5, 2.5].
Matrix random_positive(int q, std::uint64_t seed);

/// Scalar MA(1), two random q = 2 trigonometric polynomials and the diagonal pair.
std::vector<NamedWeight> weight_suite();

/// (1/N) sum_j exp(i l t_j) F(t_j) by direct summation.
Matrix brute_fourier(const GridFunction& f, int lag);

/// Right-sided power-series inverse: B_m = -(sum_{j=1}^m B_{m-j} A_j) A_0^{-1}.
std::vector<Matrix> right_inverse(const std::vector<Matrix>& a);

/// det of the block-Toeplitz matrix with blocks (j, k) = c_{j-k} by LU.
double toeplitz_det(const std::map<int, Matrix>& c, int order);

struct LeastSquaresFit {
  std::map<int, Matrix> coefficients;
  Matrix delta;
};

/// Minimizes (1/N) sum_j |(I - sum_k D_k e_k(t_j)) W(t_j)^{1/2}|_F^2 by a QR solve of
/// the stacked residual, then evaluates the error matrix on the grid.
LeastSquaresFit weighted_least_squares(const GridFunction& w, const std::vector<int>& lags);

/// Largest eigenvalue violation of a <= b (0 when the order holds).
double loewner_violation(const Matrix& a, const Matrix& b);

}  // namespace specpredict::testing
