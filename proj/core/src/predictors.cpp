#include "specpredict/predictors.hpp"

#include <cmath>
#include <limits>

#include "specpredict/error.hpp"

namespace specpredict {

namespace {

constexpr double kRegularCondition = 1e8;
constexpr double kFormulaAgreement = 1e-9;
constexpr double kSingularCondition = 1e14;

GridFunction inverse_or_throw(const GridFunction& w) {
  try {
    GridFunction inv = inverse_weight(w);
    if (!class_membership(w).inverse_integrable) {
      throw Error(Errc::NotInverseIntegrable, "mean of |W^-1| exceeds the integrability limit");
    }
    return inv;
  } catch (const Error& e) {
    if (e.code() != Errc::SingularSample) throw;
    throw Error(Errc::NotInverseIntegrable, e.what());
  }
}

void require_truncation(const OuterFactor& f, int order) {
  if (order < 0) throw Error(Errc::InvalidArgument, "order must be >= 0");
  if (static_cast<std::size_t>(order) > f.truncation()) {
    throw Error(Errc::TruncationTooShort, "order " + std::to_string(order) + " exceeds L = " +
                                              std::to_string(f.truncation()));
  }
}

Matrix identity(Eigen::Index q) { return Matrix::Identity(q, q); }

Matrix block_toeplitz(const LagTable& c, int order, Eigen::Index q) {
  Matrix g(order * q, order * q);
  for (int j = 0; j < order; ++j) {
    for (int k = 0; k < order; ++k) g.block(j * q, k * q, q, q) = c(j - k);
  }
  return hermitian_part(g);
}

// log det of a Hermitian positive definite matrix; SingularToeplitz otherwise.
double toeplitz_log_det(const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw Error(Errc::SingularToeplitz, "Gamma is not positive definite");
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) s += std::log(llt.matrixL()(i, i).real());
  return 2.0 * s;
}

// Kernel X(t_j) = (Phi(t_j)^*)^{-1}; empty when Phi is singular at a node.
std::optional<GridFunction> inverse_adjoint_factor(const OuterFactor& f, std::size_t n) {
  const GridFunction phi = f.evaluate(n);
  std::vector<Matrix> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(condition_number(phi[j]) < kSingularCondition)) return std::nullopt;
    out.push_back(checked_inverse(phi[j].adjoint()));
  }
  return GridFunction(std::move(out));
}

void require_agreement(const Matrix& primary, const Matrix& alternative, const char* what) {
  const double dev = relative_deviation(primary, alternative);
  if (dev > kFormulaAgreement) {
    throw Error(Errc::FormulaMismatch,
                std::string(what) + ": alternative expression deviates by " + std::to_string(dev));
  }
}

PredictionSolution factor_solution(IndexSetSpec set, const OuterFactor& f, const Matrix& delta,
                                   std::map<int, Matrix> coefficients, std::size_t n) {
  Predictor p{PredictorForm::FactorizationForm, "inverse_adjoint_factor", std::move(coefficients), {}};
  if (const auto kernel = inverse_adjoint_factor(f, n)) p.samples = predictor_samples(p, &*kernel, n);
  HermitianMatrix h = HermitianMatrix::from_symmetrized(delta);
  const double ds = delta_scalar(h);
  return {std::move(set), std::move(p), std::move(h), ds};
}

}  // namespace

ToeplitzSystem solve_toeplitz(const LagTable& c, int order) {
  if (order < 1) throw Error(Errc::InvalidArgument, "Toeplitz order must be >= 1");
  const Eigen::Index q = c(0).rows();
  Matrix gamma = block_toeplitz(c, order, q);
  Eigen::LLT<Matrix> llt(gamma);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1.0 / kSingularCondition)) {
    throw Error(Errc::SingularToeplitz, "Gamma_" + std::to_string(order) + " is not positive definite");
  }
  Matrix rhs(order * q, q);
  for (int j = 1; j <= order; ++j) rhs.block((j - 1) * q, 0, q, q) = c(j);
  const Matrix x = llt.solve(rhs);
  std::vector<Matrix> d;
  d.reserve(order);
  for (int k = 1; k <= order; ++k) d.push_back(x.block((k - 1) * q, 0, q, q).adjoint());
  return {order, std::move(gamma), std::move(d)};
}

PredictionSolution interpolate_all(const WeightFunction& w, std::size_t n) {
  const GridFunction wg = evaluate_on_grid(w, n);
  const GridFunction winv = inverse_or_throw(wg);
  const Matrix delta = hermitian_part(checked_inverse(hermitian_part(mean_integral(winv))));
  Predictor p{PredictorForm::FactorizationForm, "inverse_weight", {{0, delta}}, {}};
  p.samples = predictor_samples(p, &winv, n);
  HermitianMatrix h = HermitianMatrix::from_symmetrized(delta);
  const double ds = delta_scalar(h);
  return {IndexSetSpec::all_but_zero(), std::move(p), std::move(h), ds};
}

PredictionSolution yaglom_gap(const WeightFunction& w, int order, std::size_t n) {
  IndexSetSpec set = IndexSetSpec::gap(order);
  const GridFunction wg = evaluate_on_grid(w, n);
  const GridFunction winv = inverse_or_throw(wg);
  const LagTable c = fourier_coefficients(winv, order);
  const ToeplitzSystem sys = solve_toeplitz(c, order);
  Matrix m = c(0);
  for (int k = 1; k <= order; ++k) m -= sys.d[k - 1] * c(k);
  const Matrix delta = hermitian_part(checked_inverse(hermitian_part(m)));
  std::map<int, Matrix> coeffs{{0, delta}};
  for (int k = 1; k <= order; ++k) coeffs.emplace(k, -delta * sys.d[k - 1]);
  Predictor p{PredictorForm::FactorizationForm, "inverse_weight", std::move(coeffs), {}};
  p.samples = predictor_samples(p, &winv, n);
  HermitianMatrix h = HermitianMatrix::from_symmetrized(delta);
  const double ds = delta_scalar(h);
  return {std::move(set), std::move(p), std::move(h), ds};
}

double yaglom_det_ratio(const WeightFunction& w, int order, std::size_t n) {
  if (order < 1) throw Error(Errc::InvalidArgument, "gap order must be >= 1");
  const GridFunction winv = inverse_or_throw(evaluate_on_grid(w, n));
  const LagTable c = fourier_coefficients(winv, order + 1);
  const Eigen::Index q = c(0).rows();
  return std::exp(toeplitz_log_det(block_toeplitz(c, order, q)) -
                  toeplitz_log_det(block_toeplitz(c, order + 1, q)));
}

double szego_delta(const WeightFunction& w, std::size_t n) {
  const double ld = log_det_mean(evaluate_on_grid(w, n));
  if (!std::isfinite(ld)) return 0.0;
  return std::exp(ld / static_cast<double>(w.dim()));
}

PredictionSolution nakazi_predict(const OuterFactor& f, int order, std::size_t n) {
  IndexSetSpec set = IndexSetSpec::nakazi(order);
  require_truncation(f, order);
  const auto& b = f.b();
  Matrix r = Matrix::Zero(f.dim(), f.dim());
  for (int j = 0; j <= order; ++j) r += b[j] * b[j].adjoint();
  const Matrix delta = hermitian_part(checked_inverse(hermitian_part(r)));
  std::map<int, Matrix> coeffs;
  for (int j = 0; j <= order; ++j) coeffs.emplace(j, delta * b[j]);
  return factor_solution(std::move(set), f, delta, std::move(coeffs), n);
}

HermitianMatrix single_future_delta(const OuterFactor& f, int order) {
  if (order < 1) throw Error(Errc::InvalidArgument, "future-one needs n >= 1");
  require_truncation(f, order);
  const auto& a = f.a();
  const Eigen::Index q = f.dim();
  Matrix qm = Matrix::Zero(q, q);
  for (int j = 0; j < order; ++j) qm += a[j].adjoint() * a[j];
  const Matrix q_prev = qm;
  qm += a[order].adjoint() * a[order];
  const Matrix q_inv = checked_inverse(hermitian_part(qm));
  const Matrix& an = a[order];
  const Matrix delta = hermitian_part(a[0].adjoint() * (identity(q) - an * q_inv * an.adjoint()) * a[0]);
  if (condition_number(an) < kRegularCondition) {
    const Matrix alt = a[0].adjoint() * checked_inverse(an.adjoint()) * q_prev * q_inv * an.adjoint() * a[0];
    require_agreement(delta, hermitian_part(alt), "single-future error");
  }
  return HermitianMatrix::from_symmetrized(delta);
}

PredictionSolution single_future_predict(const OuterFactor& f, int order, std::size_t n) {
  IndexSetSpec set = IndexSetSpec::single_future(order);
  const HermitianMatrix delta = single_future_delta(f, order);
  const auto& a = f.a();
  Matrix qm = Matrix::Zero(f.dim(), f.dim());
  for (int j = 0; j <= order; ++j) qm += a[j].adjoint() * a[j];
  const Matrix d = -a[0].adjoint() * a[order] * checked_inverse(hermitian_part(qm));
  // G = A_0^* + D sum_j A_j^* e_{n-j}
  std::map<int, Matrix> coeffs;
  for (int j = 0; j <= order; ++j) coeffs.emplace(order - j, d * a[j].adjoint());
  coeffs.at(0) += a[0].adjoint();
  return factor_solution(std::move(set), f, delta.matrix(), std::move(coeffs), n);
}

HermitianMatrix missing_past_delta(const OuterFactor& f, int order) {
  if (order < 1) throw Error(Errc::InvalidArgument, "missing-past needs n >= 1");
  require_truncation(f, order);
  const auto& a = f.a();
  const auto& b = f.b();
  const Eigen::Index q = f.dim();
  Matrix r = Matrix::Zero(q, q);
  for (int j = 0; j < order; ++j) r += b[j] * b[j].adjoint();
  const Matrix r_prev = r;
  r += b[order] * b[order].adjoint();
  const Matrix& bn = b[order];
  const Matrix inner = identity(q) - bn.adjoint() * checked_inverse(hermitian_part(r)) * bn;
  if (!(condition_number(inner) < kSingularCondition)) {
    throw Error(Errc::SingularInnerMatrix, "I - B_n^* R^-1 B_n is singular");
  }
  const Matrix delta = hermitian_part(a[0].adjoint() * checked_inverse(inner) * a[0]);
  if (condition_number(bn) < kRegularCondition) {
    const Matrix alt = a[0].adjoint() * checked_inverse(bn) * r * checked_inverse(hermitian_part(r_prev)) * bn * a[0];
    require_agreement(delta, hermitian_part(alt), "missing-past error");
  }
  return HermitianMatrix::from_symmetrized(delta);
}

PredictionSolution missing_past_predict(const OuterFactor& f, int order, std::size_t n) {
  IndexSetSpec set = IndexSetSpec::missing_past(order);
  const HermitianMatrix delta = missing_past_delta(f, order);
  const auto& b = f.b();
  Matrix r = Matrix::Zero(f.dim(), f.dim());
  for (int j = 0; j <= order; ++j) r += b[j] * b[j].adjoint();
  const Matrix e = b[0] * b[order].adjoint() * checked_inverse(hermitian_part(r));
  const Matrix& dm = delta.matrix();
  // Delta H with H = B_0 - E sum_j B_j e_{j-n}
  std::map<int, Matrix> coeffs;
  for (int j = 0; j <= order; ++j) coeffs.emplace(j - order, -dm * e * b[j]);
  coeffs.at(0) += dm * b[0];
  return factor_solution(std::move(set), f, dm, std::move(coeffs), n);
}

double delta_scalar(const HermitianMatrix& delta) {
  const double ld = log_det_hermitian(delta.matrix());
  if (!std::isfinite(ld)) return 0.0;
  return std::exp(ld / static_cast<double>(delta.dim()));
}

double szego_functional_probe(const WeightFunction& w, const std::map<int, Matrix>& t, std::size_t n) {
  std::vector<int> lags;
  std::vector<Matrix> coeffs;
  for (const auto& [k, m] : t) {
    if (k < 1) throw Error(Errc::InvalidArgument, "probe frequencies must be >= 1");
    require_same_dimension(m, Matrix::Zero(w.dim(), w.dim()));
    lags.push_back(k);
    coeffs.push_back(m);
  }
  const GridFunction wg = evaluate_on_grid(w, n);
  const double q = static_cast<double>(w.dim());
  const Matrix id = identity(w.dim());
  std::vector<double> values(n, 0.0);
  if (lags.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ld = log_det_hermitian(wg[j]);
      values[j] = std::isfinite(ld) ? std::exp(ld / q) : 0.0;
    }
  } else {
    const GridFunction tg = synthesize(lags, coeffs, n);
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix x = (id - tg[j]) * wg[j] * (id - tg[j]).adjoint();
      const double ld = log_det_hermitian(hermitian_part(x));
      values[j] = std::isfinite(ld) ? std::exp(ld / q) : 0.0;
    }
  }
  return pairwise_sum(values) / static_cast<double>(n);
}

Matrix projection_error(const GridFunction& p, const GridFunction& w) {
  if (p.size() != w.size()) throw Error(Errc::DimensionMismatch, "predictor and weight grids differ");
  const Matrix id = identity(w.dim());
  std::vector<Matrix> terms;
  terms.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) terms.push_back((id - p[j]) * w[j] * (id - p[j]).adjoint());
  return hermitian_part(pairwise_sum(terms) / static_cast<double>(w.size()));
}

GridFunction predictor_samples(const Predictor& p, const GridFunction* kernel, std::size_t n) {
  if (p.coefficients.empty()) throw Error(Errc::InvalidArgument, "predictor has no coefficients");
  std::vector<int> lags;
  std::vector<Matrix> coeffs;
  for (const auto& [k, m] : p.coefficients) {
    lags.push_back(k);
    coeffs.push_back(m);
  }
  GridFunction k = synthesize(lags, coeffs, n);
  if (p.form == PredictorForm::FrequencyCoefficients) return k;
  if (kernel == nullptr || kernel->size() != n) {
    throw Error(Errc::InvalidArgument, "factorization-form predictor needs kernel samples on the grid");
  }
  const Matrix id = identity(k.dim());
  std::vector<Matrix> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back(id - k[j] * (*kernel)[j]);
  return GridFunction(std::move(out));
}

bool needs_factor(const IndexSetSpec& s) {
  switch (s.family()) {
    case SetFamily::Past:
    case SetFamily::Nakazi:
    case SetFamily::SingleFuture:
    case SetFamily::MissingPast:
      return true;
    default:
      return false;
  }
}

PredictionSolution predict(const IndexSetSpec& s, const WeightFunction& w, const OuterFactor* f,
                           std::size_t n) {
  if (needs_factor(s) && f == nullptr) {
    throw Error(Errc::InvalidArgument, s.to_string() + " needs an outer factor");
  }
  switch (s.family()) {
    case SetFamily::AllButZero: return interpolate_all(w, n);
    case SetFamily::Gap: return yaglom_gap(w, s.order(), n);
    case SetFamily::Past: {
      PredictionSolution sol = nakazi_predict(*f, 0, n);
      sol.set = s;
      return sol;
    }
    case SetFamily::Nakazi: return nakazi_predict(*f, s.order(), n);
    case SetFamily::SingleFuture: return single_future_predict(*f, s.order(), n);
    case SetFamily::MissingPast: return missing_past_predict(*f, s.order(), n);
    case SetFamily::CustomWindow:
    case SetFamily::CyclicSubset:
      break;
  }
  throw Error(Errc::InvalidArgument, "no closed form for " + s.to_string());
}

}  // namespace specpredict
