#pragma once

// Closed-form prediction error matrices and predictors for the index-set
// families of IndexSetSpec.
//
// A predictor P approximates I from the observed lags; its error matrix is
// Delta = int (I - P) W (I - P)^* dlambda and delta = det(Delta)^{1/q}.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specpredict/index_set.hpp"
#include "specpredict/matrix_core.hpp"
#include "specpredict/spectral_factor.hpp"
#include "specpredict/weight.hpp"

namespace specpredict {

enum class PredictorForm {
  FrequencyCoefficients,  // P = sum_k K_k e_k
  FactorizationForm,      // P = I - (sum_k K_k e_k) X, X named by `kernel`
};

struct Predictor {
  PredictorForm form = PredictorForm::FrequencyCoefficients;
  std::string kernel;                 // "", "inverse_weight" or "inverse_adjoint_factor"
  std::map<int, Matrix> coefficients;  // K_k
  std::optional<GridFunction> samples; // P(t_j); absent when the kernel is singular at a node
};

struct PredictionSolution {
  IndexSetSpec set;
  Predictor predictor;
  HermitianMatrix delta;
  double delta_scalar;
};

/// Block-Toeplitz system sum_k C_{j-k} D_k^* = C_j, j = 1..n.
struct ToeplitzSystem {
  int order;
  Matrix gamma;            // Gamma_n, blocks (j, k) = C_{j-k}
  std::vector<Matrix> d;   // D_1..D_n
};

/// Throws SingularToeplitz unless Gamma_n is positive definite.
ToeplitzSystem solve_toeplitz(const LagTable& c, int order);

/// S = Z \ {0}. Throws NotInverseIntegrable.
PredictionSolution interpolate_all(const WeightFunction& w, std::size_t n = kDefaultGridSize);

/// S = Z \ {0, ..., order}. Throws NotInverseIntegrable, SingularToeplitz.
PredictionSolution yaglom_gap(const WeightFunction& w, int order,
                              std::size_t n = kDefaultGridSize);

/// det Gamma_order / det Gamma_{order+1}, from Cholesky factors in log space.
double yaglom_det_ratio(const WeightFunction& w, int order, std::size_t n = kDefaultGridSize);

/// exp(log_det_mean(W) / q); 0 when the log-determinant is not integrable.
double szego_delta(const WeightFunction& w, std::size_t n = kDefaultGridSize);

/// S = negatives and {1..order}; order 0 is the pure past. Throws TruncationTooShort.
PredictionSolution nakazi_predict(const OuterFactor& f, int order,
                                  std::size_t n = kDefaultGridSize);

/// S = negatives and {order}. When A_order is well conditioned the
/// alternative expression is evaluated too; FormulaMismatch if they differ.
HermitianMatrix single_future_delta(const OuterFactor& f, int order);
PredictionSolution single_future_predict(const OuterFactor& f, int order,
                                         std::size_t n = kDefaultGridSize);

/// S = negatives without -order. Throws SingularInnerMatrix, TruncationTooShort,
/// FormulaMismatch.
HermitianMatrix missing_past_delta(const OuterFactor& f, int order);
PredictionSolution missing_past_predict(const OuterFactor& f, int order,
                                        std::size_t n = kDefaultGridSize);

/// det(delta)^{1/q} in log space; 0 when singular.
double delta_scalar(const HermitianMatrix& delta);

/// int det((I - T) W (I - T)^*)^{1/q} dlambda for T = sum_k T_k e_k with k >= 1.
double szego_functional_probe(const WeightFunction& w, const std::map<int, Matrix>& t,
                              std::size_t n = kDefaultGridSize);

/// int (I - P) W (I - P)^* dlambda on the grid.
Matrix projection_error(const GridFunction& p, const GridFunction& w);

/// Grid values of a predictor (FactorizationForm needs the matching kernel samples).
GridFunction predictor_samples(const Predictor& p, const GridFunction* kernel, std::size_t n);

/// Whether the closed form for this family is expressed through the outer factor.
bool needs_factor(const IndexSetSpec& s);

/// Closed-form dispatch for every family except CustomWindow and CyclicSubset
/// (InvalidArgument). `f` is required when needs_factor(s).
PredictionSolution predict(const IndexSetSpec& s, const WeightFunction& w, const OuterFactor* f,
                           std::size_t n = kDefaultGridSize);

}  // namespace specpredict
