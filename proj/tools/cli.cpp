#include "cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "specpredict/duality.hpp"
#include "specpredict/error.hpp"
#include "specpredict/io.hpp"
#include "specpredict/predictors.hpp"
#include "specpredict/spectral_factor.hpp"
#include "specpredict/weight.hpp"

namespace specpredict::cli {

namespace {

struct Context {
  const RunConfig& config;
  WeightFunction weight;
  std::optional<OuterFactor> factor;
};

const OuterFactor& factor_of(Context& ctx) {
  if (!ctx.factor) {
    if (!ctx.config.factor_path.empty()) {
      ctx.factor = parse_factor(read_text_file(ctx.config.factor_path));
    } else {
      FactorOptions opts;
      opts.truncation = ctx.config.truncation;
      if (ctx.config.factor_tolerance) opts.residual_tolerance = *ctx.config.factor_tolerance;
      ctx.factor = factorize(evaluate_on_grid(ctx.weight, ctx.config.grid), opts);
    }
  }
  return *ctx.factor;
}

IndexSetSpec required_set(const RunConfig& c) {
  if (c.set.empty()) throw Error(Errc::ParseError, "--set is required for this command");
  return IndexSetSpec::parse(c.set);
}

// Direct finite-section solution for sets without a closed form.
PredictionSolution window_solution(Context& ctx, const IndexSetSpec& s) {
  const GridFunction wg = evaluate_on_grid(ctx.weight, ctx.config.grid);
  const Projection p = gram_project(wg, Geometry::Direct, s.lags(), ctx.config.window);
  Predictor pred{PredictorForm::FrequencyCoefficients, "", {}, {}};
  for (std::size_t a = 0; a < p.lags.size(); ++a) pred.coefficients.emplace(p.lags[a], p.coefficients[a]);
  const double ds = delta_scalar(p.delta);
  return {s, std::move(pred), p.delta, ds};
}

PredictionSolution solve(Context& ctx, const IndexSetSpec& s) {
  if (s.family() == SetFamily::CustomWindow) return window_solution(ctx, s);
  if (s.family() == SetFamily::CyclicSubset) {
    throw Error(Errc::InvalidArgument, "cyclic sets are handled by 'verify --theorem cyclic'");
  }
  const OuterFactor* f = needs_factor(s) ? &factor_of(ctx) : nullptr;
  return predict(s, ctx.weight, f, ctx.config.grid);
}

std::string csv_eigen_header(Eigen::Index q) {
  std::string h;
  for (Eigen::Index i = 1; i <= q; ++i) h += ",eig_" + std::to_string(i);
  return h;
}

std::string csv_eigen_values(const HermitianMatrix& d) {
  std::string row;
  const Eigen::VectorXd ev = d.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) row += "," + format_double(ev(i));
  return row;
}

void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << std::setw(24) << format_double(m(r, c).real());
      if (m(r, c).imag() != 0.0) out << (m(r, c).imag() < 0 ? " - " : " + ") << format_double(std::abs(m(r, c).imag())) << "i";
    }
    out << "\n";
  }
}

int cmd_predict(Context& ctx, std::ostream& out) {
  const IndexSetSpec s = required_set(ctx.config);
  const PredictionSolution sol = solve(ctx, s);
  switch (ctx.config.format) {
    case Format::Json: out << solution_to_json(sol); break;
    case Format::Csv:
      out << "set,delta_scalar" << csv_eigen_header(sol.delta.dim()) << "\n";
      out << sol.set.to_string() << "," << format_double(sol.delta_scalar) << csv_eigen_values(sol.delta) << "\n";
      break;
    case Format::Pretty:
      out << "set           " << sol.set.to_string() << "\n";
      out << "delta_scalar  " << format_double(sol.delta_scalar) << "\n";
      out << "delta\n";
      print_matrix(out, sol.delta.matrix());
      break;
  }
  return kExitOk;
}

int cmd_factorize(Context& ctx, std::ostream& out) {
  const OuterFactor& f = factor_of(ctx);
  switch (ctx.config.format) {
    case Format::Json: out << factor_to_json(f); break;
    case Format::Csv:
      out << "lag,norm_A,norm_B\n";
      for (std::size_t k = 0; k < f.a().size(); ++k) {
        out << k << "," << format_double(normalized_norm(f.a()[k])) << "," << format_double(normalized_norm(f.b()[k]))
            << "\n";
      }
      break;
    case Format::Pretty:
      out << "q             " << f.dim() << "\n";
      out << "L             " << f.truncation() << "\n";
      out << "residual      " << format_double(f.residual()) << "\n";
      out << "inverse_tail  " << format_double(f.inverse_tail()) << "\n";
      out << "A_0\n";
      print_matrix(out, f.a().front());
      break;
  }
  return kExitOk;
}

VerificationReport verify_report(Context& ctx) {
  const RunConfig& c = ctx.config;
  const IndexSetSpec s = required_set(c);
  VerifyOptions opts;
  opts.window = c.window;
  opts.grid = c.grid;
  if (c.tolerance) opts.tolerance = *c.tolerance;
  const std::string& t = c.theorem;
  if (t == "3.2" || t == "projection") return dual_projection_check(ctx.weight, s, opts);
  if (t == "3.6" || t == "infimum") return dual_infimum_check(ctx.weight, s, opts);
  if (t == "3.7" || t == "trace") return trace_normalized_check(ctx.weight, s, opts);
  if (t == "cyclic") return cyclic_exact_verify(cyclic_model(ctx.weight, s), c.tolerance.value_or(1e-10));
  throw Error(Errc::ParseError, "unknown theorem '" + t + "' (projection|infimum|trace|cyclic)");
}

int cmd_verify(Context& ctx, std::ostream& out) {
  const VerificationReport r = verify_report(ctx);
  switch (ctx.config.format) {
    case Format::Json: out << report_to_json(r); break;
    case Format::Csv:
      out << "kind,name,value\n";
      for (const auto& [k, v] : r.deviations) out << "deviation," << k << "," << format_double(v) << "\n";
      for (const auto& [k, v] : r.values) out << "value," << k << "," << format_double(v) << "\n";
      out << "pass,pass," << (r.pass ? "true" : "false") << "\n";
      break;
    case Format::Pretty:
      out << "theorem  " << r.theorem << "   K " << r.window << "   N " << r.grid << "\n";
      for (const auto& [k, v] : r.deviations) out << "  " << std::left << std::setw(26) << k << format_double(v) << "\n";
      for (const auto& [k, v] : r.values) out << "  " << std::left << std::setw(26) << k << format_double(v) << "\n";
      out << (r.pass ? "PASS" : "FAIL") << "\n";
      break;
  }
  return r.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_sweep(Context& ctx, std::ostream& out) {
  const RunConfig& c = ctx.config;
  if (c.set.empty()) throw Error(Errc::ParseError, "--set is required for sweep");
  const std::string family = c.set.substr(0, c.set.find(':'));
  int first = 1;
  if (family == "nakazi") {
    first = 0;
  } else if (family != "gap" && family != "future-one" && family != "missing-past") {
    throw Error(Errc::ParseError, "sweep supports gap, nakazi, future-one and missing-past");
  }
  if (c.n_max < first) throw Error(Errc::InvalidArgument, "--n-max must be >= " + std::to_string(first));
  std::vector<PredictionSolution> rows;
  for (int n = first; n <= c.n_max; ++n) rows.push_back(solve(ctx, IndexSetSpec::parse(family + ":" + std::to_string(n))));
  const Eigen::Index q = ctx.weight.dim();
  if (c.format == Format::Json) {
    out << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::string s = solution_to_json(rows[i]);
      s.pop_back();
      out << (i ? ", " : "") << s;
    }
    out << "]\n";
    return kExitOk;
  }
  out << "n,delta_scalar" << csv_eigen_header(q) << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (first + static_cast<int>(i)) << "," << format_double(rows[i].delta_scalar)
        << csv_eigen_values(rows[i].delta) << "\n";
  }
  return kExitOk;
}

template <class T>
bool positive(T x) {
  return x > T(0);
}

void validate(const RunConfig& c) {
  if (!is_power_of_two(c.grid) || c.grid < 2) throw Error(Errc::InvalidArgument, "grid must be a power of two >= 2");
  if (c.truncation < 1) throw Error(Errc::InvalidArgument, "L must be >= 1");
  if (c.window < 1) throw Error(Errc::InvalidArgument, "K must be >= 1");
  if (c.tolerance && !positive(*c.tolerance)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  if (c.factor_tolerance && !positive(*c.factor_tolerance)) {
    throw Error(Errc::InvalidArgument, "factor tolerance must be positive");
  }
}

}  // namespace

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err) {
  CLI::App app{"Prediction error matrices from matrix spectral densities", "specpredict"};
  app.require_subcommand(1);

  std::string format = "json";
  std::optional<std::size_t> grid;
  double tol = 0.0;
  double factor_tol = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--weight,-w", config.weight_path, "weight specification (JSON)")->required();
    sub->add_option("--grid,-N", grid, "grid size (power of two); default $SPECPREDICT_GRID or 4096");
    sub->add_option("-L,--truncation", config.truncation, "outer factor truncation L");
    sub->add_option("-K,--window", config.window, "finite-section window K");
    sub->add_option("--factor", config.factor_path, "precomputed outer factor (JSON from 'factorize')");
    sub->add_option("--format", format, "json | csv | pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("--tol", tol, "verification tolerance override");
    sub->add_option("--factor-tol", factor_tol, "factorization residual tolerance override");
  };

  CLI::App* predict = app.add_subcommand("predict", "closed-form prediction error for one index set");
  add_common(predict);
  predict->add_option("--set", config.set, "index set")->required();

  CLI::App* factor = app.add_subcommand("factorize", "outer spectral factor");
  add_common(factor);

  CLI::App* verify = app.add_subcommand("verify", "duality verification report");
  add_common(verify);
  verify->add_option("--set", config.set, "index set")->required();
  verify->add_option("--theorem", config.theorem, "projection | infimum | trace | cyclic");

  CLI::App* sweep = app.add_subcommand("sweep", "error sequence over the family order n");
  add_common(sweep);
  sweep->add_option("--set", config.set, "family: gap | nakazi | future-one | missing-past")->required();
  sweep->add_option("--n-max", config.n_max, "largest order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kExitInputError;
  }

  if (predict->parsed()) config.command = Command::Predict;
  if (factor->parsed()) config.command = Command::Factorize;
  if (verify->parsed()) config.command = Command::Verify;
  if (sweep->parsed()) config.command = Command::Sweep;
  config.format = format == "csv" ? Format::Csv : format == "pretty" ? Format::Pretty : Format::Json;
  if (tol != 0.0) config.tolerance = tol;
  if (factor_tol != 0.0) config.factor_tolerance = factor_tol;
  if (grid) {
    config.grid = *grid;
  } else if (const char* env = std::getenv("SPECPREDICT_GRID")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      err << "error: ParseError: SPECPREDICT_GRID must be an integer\n";
      return kExitInputError;
    }
    config.grid = static_cast<std::size_t>(v);
  }
  return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    std::ostringstream buffer;
    Context ctx{config, parse_weight(read_text_file(config.weight_path)), std::nullopt};
    int code = kExitOk;
    switch (config.command) {
      case Command::Predict: code = cmd_predict(ctx, buffer); break;
      case Command::Factorize: code = cmd_factorize(ctx, buffer); break;
      case Command::Verify: code = cmd_verify(ctx, buffer); break;
      case Command::Sweep: code = cmd_sweep(ctx, buffer); break;
    }
    out << buffer.str();
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace specpredict::cli
