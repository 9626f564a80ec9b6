#include "specpredict/weight.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "specpredict/error.hpp"

namespace specpredict {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit roots exp(2 pi i m / N), m = 0..N-1.
std::vector<cplx> unit_roots(std::size_t n) {
  std::vector<cplx> roots(n);
  for (std::size_t m = 0; m < n; ++m) roots[m] = std::polar(1.0, kTwoPi * double(m) / double(n));
  return roots;
}

std::size_t mod(long long k, std::size_t n) {
  const long long r = k % static_cast<long long>(n);
  return static_cast<std::size_t>(r < 0 ? r + static_cast<long long>(n) : r);
}

double sign_of_lag(long long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

Matrix pairwise_sum_range(std::span<const Matrix> terms) {
  if (terms.size() == 1) return terms.front();
  const std::size_t half = terms.size() / 2;
  return pairwise_sum_range(terms.first(half)) + pairwise_sum_range(terms.subspan(half));
}

double pairwise_sum_scalars(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum_scalars(xs.first(half)) + pairwise_sum_scalars(xs.subspan(half));
}

// Entry-wise transforms of a grid function: out[r][c] holds the inverse DFT
// (1/N) sum_j F_j(r,c) exp(2 pi i l j / N) at index l.
std::vector<std::vector<cplx>> inverse_dft_entries(const GridFunction& f) {
  const std::size_t n = f.size();
  const Eigen::Index q = f.dim();
  Eigen::FFT<double> fft;
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(q * q));
  std::vector<cplx> column(n);
  for (Eigen::Index r = 0; r < q; ++r) {
    for (Eigen::Index c = 0; c < q; ++c) {
      for (std::size_t j = 0; j < n; ++j) column[j] = f[j](r, c);
      std::vector<cplx>& dst = out[static_cast<std::size_t>(r * q + c)];
      fft.inv(dst, column);
    }
  }
  return out;
}

double log_det_or_neg_inf(const Matrix& m) {
  const double ld = log_det_hermitian(m);
  if (!(ld > std::log(DBL_MIN))) return -std::numeric_limits<double>::infinity();
  return ld;
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

double grid_point(std::size_t j, std::size_t n) noexcept {
  return -std::numbers::pi + kTwoPi * double(j) / double(n);
}

GridFunction::GridFunction(std::vector<Matrix> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2 || !is_power_of_two(samples_.size())) {
    throw Error(Errc::InvalidArgument,
                "grid size must be a power of two >= 2, got " + std::to_string(samples_.size()));
  }
  require_square(samples_.front());
  for (const Matrix& s : samples_) {
    require_same_dimension(s, samples_.front());
    if (!s.allFinite()) throw Error(Errc::NonFinite, "grid sample has NaN or Inf entries");
  }
}

GridFunction GridFunction::constant(const Matrix& value, std::size_t n) {
  return GridFunction(std::vector<Matrix>(n, value));
}

WeightFunction WeightFunction::trig_poly(std::vector<Matrix> coefficients) {
  if (coefficients.empty()) throw Error(Errc::InvalidArgument, "no coefficients");
  require_square(coefficients.front());
  for (const Matrix& c : coefficients) {
    require_same_dimension(c, coefficients.front());
    if (!c.allFinite()) throw Error(Errc::NonFinite, "coefficient has NaN or Inf entries");
  }
  coefficients.front() = HermitianMatrix(coefficients.front()).matrix();
  return WeightFunction(TrigCoefficients{std::move(coefficients)});
}

WeightFunction WeightFunction::grid(const GridFunction& samples) {
  std::vector<Matrix> sym;
  sym.reserve(samples.size());
  for (const Matrix& s : samples.samples()) sym.push_back(HermitianMatrix(s).matrix());
  return WeightFunction(GridFunction(std::move(sym)));
}

WeightFunction WeightFunction::constant(const Matrix& value) { return trig_poly({value}); }

Eigen::Index WeightFunction::dim() const {
  if (const auto* t = std::get_if<TrigCoefficients>(&rep_)) return t->lags.front().rows();
  return std::get<GridFunction>(rep_).dim();
}

int WeightFunction::degree() const {
  const auto* t = std::get_if<TrigCoefficients>(&rep_);
  if (t == nullptr) throw Error(Errc::InvalidArgument, "grid weight has no polynomial degree");
  return static_cast<int>(t->lags.size()) - 1;
}

const std::vector<Matrix>& WeightFunction::coefficients() const {
  const auto* t = std::get_if<TrigCoefficients>(&rep_);
  if (t == nullptr) throw Error(Errc::InvalidArgument, "grid weight has no coefficients");
  return t->lags;
}

const GridFunction& WeightFunction::samples() const {
  const auto* g = std::get_if<GridFunction>(&rep_);
  if (g == nullptr) throw Error(Errc::InvalidArgument, "weight is not held as grid samples");
  return *g;
}

Matrix WeightFunction::evaluate(double t) const {
  const std::vector<Matrix>& m = coefficients();
  Matrix acc = m.front();
  for (std::size_t k = 1; k < m.size(); ++k) {
    const Matrix term = m[k] * std::polar(1.0, double(k) * t);
    acc += term + term.adjoint();
  }
  return hermitian_part(acc);
}

GridFunction evaluate_on_grid(const WeightFunction& w, std::size_t n) {
  if (!w.is_trig_poly()) {
    const GridFunction& g = w.samples();
    if (g.size() != n) {
      throw Error(Errc::InvalidArgument, "grid weight has " + std::to_string(g.size()) +
                                             " samples, requested " + std::to_string(n));
    }
    return g;
  }
  const int d = w.degree();
  if (!is_power_of_two(n) || n < 2 * static_cast<std::size_t>(d) + 2) {
    throw Error(Errc::GridTooCoarse, "grid of " + std::to_string(n) +
                                         " points cannot resolve degree " + std::to_string(d));
  }
  const std::vector<Matrix>& m = w.coefficients();
  const std::vector<cplx> roots = unit_roots(n);
  std::vector<Matrix> samples(n, m.front());
  for (std::size_t j = 0; j < n; ++j) {
    Matrix& acc = samples[j];
    for (std::size_t k = 1; k < m.size(); ++k) {
      // exp(i k t_j) = (-1)^k exp(2 pi i k j / N)
      const cplx phase = sign_of_lag(static_cast<long long>(k)) * roots[mod(static_cast<long long>(k * j), n)];
      const Matrix term = m[k] * phase;
      acc += term + term.adjoint();
    }
    acc = hermitian_part(acc);
  }
  return GridFunction(std::move(samples));
}

Matrix pairwise_sum(std::span<const Matrix> terms) {
  if (terms.empty()) throw Error(Errc::InvalidArgument, "empty sum");
  return pairwise_sum_range(terms);
}

double pairwise_sum(std::span<const double> terms) { return pairwise_sum_scalars(terms); }

Matrix mean_integral(const GridFunction& f) {
  return pairwise_sum(f.samples()) / static_cast<double>(f.size());
}

GridFunction inverse_weight(const GridFunction& w) {
  std::vector<Matrix> inv;
  inv.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(w[j]));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double hi = ev.maxCoeff();
    if (!(hi > 0.0 && ev.minCoeff() > kEpsPd * hi)) {
      throw Error(Errc::SingularSample, "sample " + std::to_string(j) + " at t = " +
                                            std::to_string(grid_point(j, w.size())) +
                                            " is not positive definite");
    }
    const Matrix m = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    inv.push_back(hermitian_part(m));
  }
  return GridFunction(std::move(inv));
}

WeightFunction inverse_weight(const WeightFunction& w, std::size_t n) {
  return WeightFunction::grid(inverse_weight(evaluate_on_grid(w, n)));
}

LagTable::LagTable(int max_lag, std::vector<Matrix> values) : max_lag_(max_lag), values_(std::move(values)) {
  if (max_lag_ < 0 || values_.size() != static_cast<std::size_t>(2 * max_lag_ + 1)) {
    throw Error(Errc::InvalidArgument, "lag table size does not match its range");
  }
}

const Matrix& LagTable::operator()(int lag) const {
  if (lag < -max_lag_ || lag > max_lag_) {
    throw Error(Errc::LagOutOfRange, "lag " + std::to_string(lag) + " outside table range " +
                                         std::to_string(max_lag_));
  }
  return values_[static_cast<std::size_t>(lag + max_lag_)];
}

LagTable fourier_coefficients(const GridFunction& f, int max_lag) {
  const std::size_t n = f.size();
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n / 2) {
    throw Error(Errc::LagOutOfRange, "lags up to " + std::to_string(max_lag) +
                                         " need |l| < N/2 = " + std::to_string(n / 2));
  }
  const Eigen::Index q = f.dim();
  const auto entries = inverse_dft_entries(f);
  std::vector<Matrix> values;
  values.reserve(static_cast<std::size_t>(2 * max_lag + 1));
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    Matrix m(q, q);
    const std::size_t idx = mod(lag, n);
    const double sgn = sign_of_lag(lag);
    for (Eigen::Index r = 0; r < q; ++r) {
      for (Eigen::Index c = 0; c < q; ++c) m(r, c) = sgn * entries[static_cast<std::size_t>(r * q + c)][idx];
    }
    values.push_back(std::move(m));
  }
  return LagTable(max_lag, std::move(values));
}

Matrix fourier_coefficient(const GridFunction& f, int lag) {
  const std::size_t n = f.size();
  if (static_cast<std::size_t>(std::abs(lag)) >= n / 2) {
    throw Error(Errc::LagOutOfRange, "lag " + std::to_string(lag) + " needs |l| < N/2");
  }
  return fourier_coefficients(f, std::abs(lag))(lag);
}

std::vector<Matrix> analytic_coefficients(const GridFunction& f, std::size_t count) {
  const std::size_t n = f.size();
  if (count > n) throw Error(Errc::LagOutOfRange, "more coefficients requested than grid points");
  const Eigen::Index q = f.dim();
  const auto entries = inverse_dft_entries(f);
  std::vector<Matrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Matrix m(q, q);
    const long long lag = -static_cast<long long>(k);
    const std::size_t idx = mod(lag, n);
    const double sgn = sign_of_lag(lag);
    for (Eigen::Index r = 0; r < q; ++r) {
      for (Eigen::Index c = 0; c < q; ++c) m(r, c) = sgn * entries[static_cast<std::size_t>(r * q + c)][idx];
    }
    out.push_back(std::move(m));
  }
  return out;
}

GridFunction synthesize(std::span<const int> lags, std::span<const Matrix> coefficients, std::size_t n) {
  if (lags.size() != coefficients.size() || lags.empty()) {
    throw Error(Errc::InvalidArgument, "lags and coefficients must be non-empty and of equal length");
  }
  if (!is_power_of_two(n)) throw Error(Errc::InvalidArgument, "grid size must be a power of two");
  const Eigen::Index q = coefficients.front().rows();
  // a[k mod N] accumulates (-1)^k c_k, then F(t_j) = sum_m a_m exp(2 pi i m j / N).
  std::vector<Matrix> folded(n, Matrix::Zero(q, q));
  for (std::size_t i = 0; i < lags.size(); ++i) {
    require_same_dimension(coefficients[i], coefficients.front());
    folded[mod(lags[i], n)] += sign_of_lag(lags[i]) * coefficients[i];
  }
  Eigen::FFT<double> fft;
  std::vector<Matrix> samples(n, Matrix(q, q));
  std::vector<cplx> column(n), out;
  for (Eigen::Index r = 0; r < q; ++r) {
    for (Eigen::Index c = 0; c < q; ++c) {
      for (std::size_t m = 0; m < n; ++m) column[m] = folded[m](r, c);
      fft.inv(out, column);
      for (std::size_t j = 0; j < n; ++j) samples[j](r, c) = out[j] * double(n);
    }
  }
  return GridFunction(std::move(samples));
}

GridFunction synthesize_analytic(std::span<const Matrix> coefficients, std::size_t n) {
  std::vector<int> lags(coefficients.size());
  for (std::size_t k = 0; k < lags.size(); ++k) lags[k] = static_cast<int>(k);
  return synthesize(lags, coefficients, n);
}

double log_det_mean(const GridFunction& w) {
  std::vector<double> logs(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    logs[j] = log_det_or_neg_inf(w[j]);
    if (std::isinf(logs[j])) return -std::numeric_limits<double>::infinity();
  }
  return pairwise_sum_scalars(logs) / static_cast<double>(w.size());
}

GridFunction regularize(const GridFunction& w, int m) {
  if (m < 1) throw Error(Errc::InvalidArgument, "regularization index must be >= 1");
  const Matrix shift = Matrix::Identity(w.dim(), w.dim()) / static_cast<double>(m);
  std::vector<Matrix> out;
  out.reserve(w.size());
  for (const Matrix& s : w.samples()) out.push_back(s + shift);
  return GridFunction(std::move(out));
}

WeightFunction regularize(const WeightFunction& w, int m) {
  if (m < 1) throw Error(Errc::InvalidArgument, "regularization index must be >= 1");
  if (!w.is_trig_poly()) return WeightFunction::grid(regularize(w.samples(), m));
  std::vector<Matrix> c = w.coefficients();
  c.front() += Matrix::Identity(w.dim(), w.dim()) / static_cast<double>(m);
  return WeightFunction::trig_poly(std::move(c));
}

ClassMembership class_membership(const GridFunction& w) {
  const std::size_t n = w.size();
  ClassMembership out;

  bool psd = true;
  bool invertible = true;
  std::vector<double> inverse_norms;
  std::vector<double> logs(n);
  std::vector<bool> singular(n, false);
  inverse_norms.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(w[j]));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if (ev.minCoeff() < -kEpsPd * scale) psd = false;
    const double hi = ev.maxCoeff();
    if (hi > 0.0 && ev.minCoeff() > kEpsPd * hi) {
      const Matrix inv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
      inverse_norms.push_back(normalized_norm(inv));
    } else {
      invertible = false;
    }
    logs[j] = log_det_or_neg_inf(w[j]);
    singular[j] = std::isinf(logs[j]);
  }

  out.integrable = psd && mean_integral(w).allFinite();
  if (invertible) {
    const double mean_inv = pairwise_sum_scalars(inverse_norms) / static_cast<double>(n);
    out.inverse_integrable = std::isfinite(mean_inv) && mean_inv <= kInverseMeanLimit;
  }

  bool isolated = true;
  std::vector<double> finite_logs;
  finite_logs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!singular[j]) {
      finite_logs.push_back(logs[j]);
      continue;
    }
    if (singular[(j + 1) % n] || singular[(j + n - 1) % n]) isolated = false;
  }
  out.log_integrable = out.integrable && isolated && !finite_logs.empty() &&
                       std::isfinite(pairwise_sum_scalars(finite_logs));
  return out;
}

}  // namespace specpredict
