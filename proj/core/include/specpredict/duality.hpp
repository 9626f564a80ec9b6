#pragma once

// Finite-section Gram projections in L^2(W) and L^2(W^{-1}), and numerical
// checks of the duality between the two geometries.
//
// In L^2(W) the inner product is (F, G) = int F W G^* dlambda, so the Gram
// blocks of the character system are (e_j, e_k) = int e_{j-k} W dlambda.
// The dual geometry uses W^{-1}; its products are written (F, G)_~.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "specpredict/index_set.hpp"
#include "specpredict/matrix_core.hpp"
#include "specpredict/weight.hpp"

namespace specpredict {

enum class Geometry { Direct, Dual };

inline constexpr double kGramConditionLimit = 1e12;
inline constexpr double kTolDual = 1e-4;
inline constexpr int kDefaultWindow = 128;

struct GramSystem {
  Geometry geometry;
  std::vector<int> lags;
  Matrix gram;  // blocks (a, b) = int e_{lag_a - lag_b} V dlambda
  Matrix rhs;   // q x (|lags| q), block a = (I, e_{lag_a})
};

/// Best approximation of I by sum_{k in lags} D_k e_k.
struct Projection {
  std::vector<int> lags;
  std::vector<Matrix> coefficients;  // D_k in lag order
  HermitianMatrix delta;             // (I - P I, I - P I)
  double condition;                  // 1 / rcond of the Cholesky factor
};

/// Caches the Fourier coefficients of one sampled weight (W for the direct
/// geometry, W^{-1} for the dual one) up to a lag bound.
class ProjectionEngine {
 public:
  ProjectionEngine(const GridFunction& samples, Geometry geometry, int max_lag);

  Geometry geometry() const noexcept { return geometry_; }
  const GridFunction& samples() const noexcept { return samples_; }
  const LagTable& coefficients() const noexcept { return table_; }

  GramSystem assemble(const std::vector<int>& lags) const;

  /// Throws IllConditionedGram when the condition estimate exceeds kGramConditionLimit
  /// and LagOutOfRange when a lag difference is outside the cache.
  Projection project(const std::vector<int>& lags) const;

  /// (F, G) for F = sum_a F_a e_{fl_a}, G = sum_b G_b e_{gl_b} in this geometry.
  Matrix inner(const std::vector<int>& fl, const std::vector<Matrix>& f,
               const std::vector<int>& gl, const std::vector<Matrix>& g) const;

 private:
  GridFunction samples_;
  Geometry geometry_;
  LagTable table_;
};

/// One-shot projection over the given lags; `window` sizes the coefficient cache (2K).
Projection gram_project(const GridFunction& samples, Geometry geometry, const std::vector<int>& lags,
                        int window);

struct VerificationReport {
  std::string theorem;
  int window = 0;
  std::size_t grid = 0;
  std::vector<std::pair<std::string, double>> deviations;
  std::vector<std::pair<std::string, double>> values;
  bool pass = false;

  double deviation(const std::string& name) const;
  double value(const std::string& name) const;
};

struct VerifyOptions {
  int window = kDefaultWindow;
  std::size_t grid = kDefaultGridSize;
  double tolerance = kTolDual;
};

/// Direct projection onto S n [-K, K] and dual projection of I onto the span of
/// the complement lags [-K, K] \ (S u {0}).
struct DualPair {
  Projection direct;
  Projection dual;
  GridFunction weight;
  GridFunction inverse;
};

/// Throws InvalidArgument for families without a dual description.
DualPair dual_pair(const WeightFunction& w, const IndexSetSpec& s, int window, std::size_t grid);

/// Three routes to Delta_S plus the grid L^2(W) distance between the direct
/// predictor and I - (I - I~, I)_~^{-1} (I - I~) W^{-1}, relative to |I|.
VerificationReport dual_projection_check(const WeightFunction& w, const IndexSetSpec& s,
                                         const VerifyOptions& options = {});

/// delta_S from the direct section times det((I - I~, I - I~)_~)^{1/q}.
VerificationReport dual_infimum_check(const WeightFunction& w, const IndexSetSpec& s,
                                      const VerifyOptions& options = {});

/// Joint infimum of |A - T| over trace-one A and T in the span of S, solved as an
/// equality-constrained least-squares problem, against |I - I~|_~^{-1}. Evaluated
/// with the normalized trace (tr I = 1) and the classical trace.
VerificationReport trace_normalized_check(const WeightFunction& w, const IndexSetSpec& s,
                                          const VerifyOptions& options = {});

struct ConstrainedMinimum {
  Matrix a;
  double value;  // minimal tr(A Delta A^*) in the chosen convention
};

/// min tr(A Delta A^*) subject to tr A = 1, solved through its KKT system.
/// `normalized` selects trace/q for both the objective and the constraint.
ConstrainedMinimum trace_constrained_minimum(const HermitianMatrix& delta, bool normalized);

/// Finite abelian testbed over Z_N: W has one sample per point 2 pi m / N.
struct CyclicModel {
  int order;                      // N
  std::vector<Matrix> weight;     // W(2 pi m / N), m = 0..N-1
  std::vector<int> set;           // S as residues in 1..N-1

  Eigen::Index dim() const { return weight.front().rows(); }
};

/// Samples a weight at the Z_N points. Trigonometric polynomials are evaluated
/// directly; grid weights must have exactly N samples.
CyclicModel cyclic_model(const WeightFunction& w, const IndexSetSpec& s);

/// Exact subspace identity between the annihilator of S u {0} and the span of the
/// remaining characters, the two dual error expressions, the projection identity,
/// and the mean-zero characterization of the annihilator. Throws SingularSample.
VerificationReport cyclic_exact_verify(const CyclicModel& m, double tolerance = 1e-10);

}  // namespace specpredict
