#include "specpredict/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specpredict/error.hpp"
#include "specpredict/predictors.hpp"

namespace specpredict {

namespace {

Matrix identity(Eigen::Index q) { return Matrix::Identity(q, q); }

double normalized_real_trace(const Matrix& m) { return normalized_trace(m).real(); }

double delta_scalar_of(const Matrix& m) { return delta_scalar(HermitianMatrix::from_symmetrized(m)); }

void add_check(VerificationReport& r, const std::string& name, double dev) {
  r.deviations.emplace_back(name, dev);
}

void finish(VerificationReport& r, double tolerance) {
  r.pass = std::all_of(r.deviations.begin(), r.deviations.end(),
                       [&](const auto& d) { return std::isfinite(d.second) && d.second <= tolerance; });
}

GridFunction inverse_or_throw(const GridFunction& w) {
  try {
    return inverse_weight(w);
  } catch (const Error& e) {
    if (e.code() != Errc::SingularSample) throw;
    throw Error(Errc::NotInverseIntegrable, e.what());
  }
}

}  // namespace

ProjectionEngine::ProjectionEngine(const GridFunction& samples, Geometry geometry, int max_lag)
    : samples_(samples), geometry_(geometry), table_(fourier_coefficients(samples, max_lag)) {}

GramSystem ProjectionEngine::assemble(const std::vector<int>& lags) const {
  const Eigen::Index q = samples_.dim();
  const auto m = static_cast<Eigen::Index>(lags.size());
  Matrix gram(m * q, m * q);
  Matrix rhs(q, m * q);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) gram.block(a * q, b * q, q, q) = table_(lags[a] - lags[b]);
    rhs.block(0, a * q, q, q) = table_(-lags[a]);
  }
  return {geometry_, lags, hermitian_part(gram), std::move(rhs)};
}

Projection ProjectionEngine::project(const std::vector<int>& lags) const {
  const Eigen::Index q = samples_.dim();
  const Matrix v0 = table_(0);
  if (lags.empty()) return {lags, {}, HermitianMatrix::from_symmetrized(v0), 1.0};

  const GramSystem sys = assemble(lags);
  Eigen::LLT<Matrix> llt(sys.gram);
  const double cond = llt.info() == Eigen::Success && llt.rcond() > 0.0
                          ? 1.0 / llt.rcond()
                          : std::numeric_limits<double>::infinity();
  if (!(cond <= kGramConditionLimit)) {
    throw Error(Errc::IllConditionedGram, "condition estimate " + std::to_string(cond) + " for " +
                                              std::to_string(lags.size()) + " lags");
  }
  // D G = r  <=>  G D^* = r^*
  const Matrix d = llt.solve(sys.rhs.adjoint()).adjoint();
  const Matrix delta = v0 - d * sys.rhs.adjoint() - sys.rhs * d.adjoint() + d * sys.gram * d.adjoint();
  std::vector<Matrix> coeffs;
  coeffs.reserve(lags.size());
  for (std::size_t a = 0; a < lags.size(); ++a) {
    coeffs.push_back(d.block(0, static_cast<Eigen::Index>(a) * q, q, q));
  }
  return {lags, std::move(coeffs), HermitianMatrix::from_symmetrized(delta), cond};
}

Matrix ProjectionEngine::inner(const std::vector<int>& fl, const std::vector<Matrix>& f,
                               const std::vector<int>& gl, const std::vector<Matrix>& g) const {
  Matrix out = Matrix::Zero(samples_.dim(), samples_.dim());
  for (std::size_t a = 0; a < fl.size(); ++a) {
    for (std::size_t b = 0; b < gl.size(); ++b) out += f[a] * table_(fl[a] - gl[b]) * g[b].adjoint();
  }
  return out;
}

Projection gram_project(const GridFunction& samples, Geometry geometry, const std::vector<int>& lags,
                        int window) {
  int reach = window;
  for (int k : lags) reach = std::max(reach, std::abs(k));
  return ProjectionEngine(samples, geometry, 2 * reach).project(lags);
}

double VerificationReport::deviation(const std::string& name) const {
  for (const auto& [k, v] : deviations) {
    if (k == name) return v;
  }
  throw Error(Errc::InvalidArgument, "no deviation named " + name);
}

double VerificationReport::value(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw Error(Errc::InvalidArgument, "no value named " + name);
}

DualPair dual_pair(const WeightFunction& w, const IndexSetSpec& s, int window, std::size_t grid) {
  if (!s.dual_available()) {
    throw Error(Errc::InvalidArgument, s.to_string() + " has no dual description (direct geometry only)");
  }
  if (window < 1) throw Error(Errc::InvalidArgument, "window K must be >= 1");
  GridFunction wg = evaluate_on_grid(w, grid);
  GridFunction winv = inverse_or_throw(wg);
  const ProjectionEngine direct(wg, Geometry::Direct, 2 * window);
  const ProjectionEngine dual(winv, Geometry::Dual, 2 * window);
  return {direct.project(s.truncated(window)), dual.project(s.complement_truncated(window)), std::move(wg),
          std::move(winv)};
}

VerificationReport dual_projection_check(const WeightFunction& w, const IndexSetSpec& s,
                                         const VerifyOptions& options) {
  const DualPair pair = dual_pair(w, s, options.window, options.grid);
  const Eigen::Index q = w.dim();
  const std::size_t n = options.grid;
  const ProjectionEngine dual(pair.inverse, Geometry::Dual, 2 * options.window);

  // I - I~ = I e_0 - sum_k D~_k e_k
  std::vector<int> rl{0};
  std::vector<Matrix> rc{identity(q)};
  for (std::size_t a = 0; a < pair.dual.lags.size(); ++a) {
    rl.push_back(pair.dual.lags[a]);
    rc.push_back(-pair.dual.coefficients[a]);
  }
  const Matrix left_inner = dual.inner(rl, rc, {0}, {identity(q)});
  const Matrix right_inner = dual.inner(rl, rc, rl, rc);
  const Matrix delta_left = checked_inverse(left_inner);
  const Matrix delta_right = checked_inverse(hermitian_part(right_inner));
  const Matrix& delta_direct = pair.direct.delta.matrix();

  const GridFunction residual = synthesize(rl, rc, n);
  std::vector<Matrix> diff_terms;
  diff_terms.reserve(n);
  const GridFunction p_direct = pair.direct.lags.empty()
                                    ? GridFunction::constant(Matrix::Zero(q, q), n)
                                    : synthesize(pair.direct.lags, pair.direct.coefficients, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Matrix p_dual = identity(q) - delta_left * residual[j] * pair.inverse[j];
    const Matrix e = p_direct[j] - p_dual;
    diff_terms.push_back(e * pair.weight[j] * e.adjoint());
  }
  const double diff_norm =
      std::sqrt(std::max(0.0, normalized_real_trace(pairwise_sum(diff_terms) / static_cast<double>(n))));
  const double unit_norm = std::sqrt(normalized_real_trace(mean_integral(pair.weight)));

  VerificationReport r;
  r.theorem = "projection";
  r.window = options.window;
  r.grid = n;
  add_check(r, "delta_direct_vs_left", relative_deviation(delta_direct, delta_left));
  add_check(r, "delta_direct_vs_right", relative_deviation(delta_direct, delta_right));
  add_check(r, "delta_left_vs_right", relative_deviation(delta_left, delta_right));
  add_check(r, "projection_identity", diff_norm / unit_norm);
  r.values.emplace_back("delta_direct_scalar", delta_scalar_of(delta_direct));
  r.values.emplace_back("delta_dual_scalar", delta_scalar_of(hermitian_part(delta_right)));
  r.values.emplace_back("direct_condition", pair.direct.condition);
  r.values.emplace_back("dual_condition", pair.dual.condition);
  finish(r, options.tolerance);
  return r;
}

VerificationReport dual_infimum_check(const WeightFunction& w, const IndexSetSpec& s,
                                      const VerifyOptions& options) {
  const DualPair pair = dual_pair(w, s, options.window, options.grid);
  const double direct = delta_scalar_of(pair.direct.delta.matrix());
  const double dual = delta_scalar_of(pair.dual.delta.matrix());
  VerificationReport r;
  r.theorem = "infimum";
  r.window = options.window;
  r.grid = options.grid;
  add_check(r, "product_minus_one", std::abs(direct * dual - 1.0));
  r.values.emplace_back("delta_direct", direct);
  r.values.emplace_back("dual_infimum", dual);
  r.values.emplace_back("product", direct * dual);
  finish(r, options.tolerance);
  return r;
}

ConstrainedMinimum trace_constrained_minimum(const HermitianMatrix& delta, bool normalized) {
  const Eigen::Index q = delta.dim();
  const double c = normalized ? 1.0 / static_cast<double>(q) : 1.0;
  // Unknown z stacks the columns a_i^* of the rows a_i of A. The objective is
  // c sum_i z_i^* Delta z_i and the constraint c sum_i (a_i)_i = 1 reads
  // sum_i (z_i)_i = 1 / c.
  const Eigen::Index m = q * q;
  Matrix kkt = Matrix::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < q; ++i) {
    kkt.block(i * q, i * q, q, q) = delta.matrix();
    kkt(i * q + i, m) = -1.0;
    kkt(m, i * q + i) = 1.0;
  }
  Vector rhs = Vector::Zero(m + 1);
  rhs(m) = 1.0 / c;
  Eigen::FullPivLU<Matrix> lu(kkt);
  if (!lu.isInvertible()) throw Error(Errc::InvalidArgument, "trace-constrained KKT system is singular");
  const Vector sol = lu.solve(rhs);
  Matrix a(q, q);
  double value = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    const Vector z = sol.segment(i * q, q);
    a.row(i) = z.adjoint();
    value += (z.adjoint() * delta.matrix() * z)(0, 0).real();
  }
  return {std::move(a), c * value};
}

VerificationReport trace_normalized_check(const WeightFunction& w, const IndexSetSpec& s,
                                          const VerifyOptions& options) {
  const DualPair pair = dual_pair(w, s, options.window, options.grid);
  const double q = static_cast<double>(w.dim());
  VerificationReport r;
  r.theorem = "trace";
  r.window = options.window;
  r.grid = options.grid;
  for (const bool normalized : {true, false}) {
    const std::string tag = normalized ? "normalized" : "classical";
    const double lhs = std::sqrt(trace_constrained_minimum(pair.direct.delta, normalized).value);
    const double tr = normalized_real_trace(pair.dual.delta.matrix()) * (normalized ? 1.0 : q);
    const double rhs = 1.0 / std::sqrt(tr);
    add_check(r, "relative_" + tag, std::abs(lhs - rhs) / rhs);
    r.values.emplace_back("lhs_" + tag, lhs);
    r.values.emplace_back("rhs_" + tag, rhs);
  }
  finish(r, options.tolerance);
  return r;
}

}  // namespace specpredict
