#pragma once

// Matrix-valued spectral densities on the circle [-pi, pi).
//
// Functions are sampled on the uniform grid t_j = -pi + 2 pi j / N (N a power
// of two), and integrals against the normalized Haar measure become the
// arithmetic mean over the grid: exact for trigonometric polynomials of degree
// below N. Characters are e_k(t) = exp(i k t); a trigonometric polynomial weight
// is W(t) = sum_k M_k e_k(t) with M_{-k} = M_k^*.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "specpredict/matrix_core.hpp"

namespace specpredict {

inline constexpr std::size_t kDefaultGridSize = 4096;

bool is_power_of_two(std::size_t n) noexcept;

/// Grid node t_j for an N-point grid.
double grid_point(std::size_t j, std::size_t n) noexcept;

/// Matrix function sampled on the uniform grid.
class GridFunction {
 public:
  /// Requires a power-of-two sample count >= 2 and equal, square, finite samples.
  explicit GridFunction(std::vector<Matrix> samples);

  static GridFunction constant(const Matrix& value, std::size_t n);

  std::size_t size() const noexcept { return samples_.size(); }
  Eigen::Index dim() const noexcept { return samples_.front().rows(); }
  const Matrix& operator[](std::size_t j) const { return samples_[j]; }
  std::span<const Matrix> samples() const noexcept { return samples_; }

 private:
  std::vector<Matrix> samples_;
};

/// Spectral density held as Hermitian Fourier coefficients or as grid samples.
class WeightFunction {
 public:
  /// Coefficients M_0..M_d for lags 0..d. Lag 0 must be Hermitian within kTolHerm
  /// (it is then symmetrized); negative lags are implied.
  static WeightFunction trig_poly(std::vector<Matrix> coefficients);
  /// Samples must be Hermitian within kTolHerm; stored symmetrized.
  static WeightFunction grid(const GridFunction& samples);
  static WeightFunction constant(const Matrix& value);

  Eigen::Index dim() const;
  bool is_trig_poly() const noexcept { return std::holds_alternative<TrigCoefficients>(rep_); }

  /// Degree of the trigonometric polynomial; throws InvalidArgument for grid weights.
  int degree() const;
  const std::vector<Matrix>& coefficients() const;
  const GridFunction& samples() const;

  /// Direct evaluation at an arbitrary point (trigonometric polynomials only).
  Matrix evaluate(double t) const;

 private:
  struct TrigCoefficients {
    std::vector<Matrix> lags;
  };
  using Rep = std::variant<TrigCoefficients, GridFunction>;
  explicit WeightFunction(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
};

/// Samples at t_j. Trigonometric polynomials need N >= 2 d + 2 (GridTooCoarse);
/// grid weights are returned as stored and need N equal to their size.
GridFunction evaluate_on_grid(const WeightFunction& w, std::size_t n);

/// Normalized-Haar integral: (1/N) sum_j F(t_j), pairwise-summed.
Matrix mean_integral(const GridFunction& f);

/// Pointwise inverse; throws SingularSample naming the first non-positive node.
GridFunction inverse_weight(const GridFunction& w);
WeightFunction inverse_weight(const WeightFunction& w, std::size_t n);

/// int e_l F dlambda = (1/N) sum_j exp(i l t_j) F(t_j). Requires |l| < N/2.
Matrix fourier_coefficient(const GridFunction& f, int lag);

/// Fourier coefficients for lags -max_lag..max_lag in one transform per entry.
class LagTable {
 public:
  LagTable(int max_lag, std::vector<Matrix> values);

  int max_lag() const noexcept { return max_lag_; }
  /// Throws LagOutOfRange outside [-max_lag, max_lag].
  const Matrix& operator()(int lag) const;

 private:
  int max_lag_;
  std::vector<Matrix> values_;  // index lag + max_lag
};

LagTable fourier_coefficients(const GridFunction& f, int max_lag);

/// Expansion coefficients c_k with F(t) = sum_k c_k e_k(t), i.e. int e_{-k} F dlambda,
/// for k = 0..count-1.
std::vector<Matrix> analytic_coefficients(const GridFunction& f, std::size_t count);

/// Samples of sum_k c_k e_k(t) for the given lag -> coefficient pairs.
GridFunction synthesize(std::span<const int> lags, std::span<const Matrix> coefficients,
                        std::size_t n);
/// Same for consecutive lags 0..c.size()-1.
GridFunction synthesize_analytic(std::span<const Matrix> coefficients, std::size_t n);

/// grid mean of log det W(t_j), computed from eigenvalues. Returns -inf as soon as one
/// sample has det <= DBL_MIN (the "log det not integrable" value).
double log_det_mean(const GridFunction& w);

/// W + I/m.
GridFunction regularize(const GridFunction& w, int m);
WeightFunction regularize(const WeightFunction& w, int m);

/// Heuristic membership proxies for the weight classes.
struct ClassMembership {
  bool integrable = false;          // samples positive semidefinite, finite mean
  bool inverse_integrable = false;  // all samples invertible, mean |W^{-1}| <= kInverseMeanLimit
  bool log_integrable = false;      // see class_membership
};

inline constexpr double kInverseMeanLimit = 1e12;

/// log_integrable holds when log_det_mean is finite, or when every singular sample is
/// isolated (neither grid neighbour is singular) and the mean over the remaining
/// samples is finite: a grid point landing on a finite-order zero carries no mass.
ClassMembership class_membership(const GridFunction& w);

/// Fixed-order pairwise summation of matrices.
Matrix pairwise_sum(std::span<const Matrix> terms);
double pairwise_sum(std::span<const double> terms);

}  // namespace specpredict
