#include "specpredict/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "specpredict/error.hpp"

namespace specpredict {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(Errc::ParseError, msg); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_fail(std::string("missing field '") + name + "'");
  return j.at(name);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

Eigen::MatrixXd real_block(const json& j, Eigen::Index q, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != q) {
    parse_fail(std::string(what) + " must be a " + std::to_string(q) + "x" + std::to_string(q) + " array");
  }
  Eigen::MatrixXd m(q, q);
  for (Eigen::Index r = 0; r < q; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != q) {
      parse_fail(std::string(what) + " row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < q; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

Matrix matrix_from(const json& j, Eigen::Index q) {
  Matrix m = real_block(field(j, "re"), q, "re").cast<cplx>();
  if (j.contains("im")) m += cplx(0.0, 1.0) * real_block(j.at("im"), q, "im").cast<cplx>();
  if (!m.allFinite()) parse_fail("matrix entries must be finite");
  return m;
}

json real_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_json(const Matrix& m) {
  json j = json::object();
  j["re"] = real_rows(m.real());
  j["im"] = real_rows(m.imag());
  return j;
}

json lag_entry(int lag, const Matrix& m) {
  json j = json::object();
  j["lag"] = lag;
  j["re"] = real_rows(m.real());
  j["im"] = real_rows(m.imag());
  return j;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

Eigen::Index dimension(const json& doc) {
  const int q = integer(field(doc, "q"), "q");
  if (q < 1) parse_fail("q must be >= 1");
  return q;
}

std::vector<Matrix> lag_sequence(const json& entries, Eigen::Index q, const char* what) {
  if (!entries.is_array() || entries.empty()) parse_fail(std::string(what) + " must be a non-empty array");
  std::map<int, Matrix> by_lag;
  for (const json& e : entries) {
    const int lag = integer(field(e, "lag"), "lag");
    if (lag < 0) parse_fail(std::string(what) + ": only lags >= 0 are given");
    if (!by_lag.emplace(lag, matrix_from(e, q)).second) {
      parse_fail(std::string(what) + ": duplicate lag " + std::to_string(lag));
    }
  }
  std::vector<Matrix> out(static_cast<std::size_t>(by_lag.rbegin()->first) + 1, Matrix::Zero(q, q));
  for (auto& [lag, m] : by_lag) out[static_cast<std::size_t>(lag)] = std::move(m);
  return out;
}

void write_value(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ", ";
        first = false;
        out += json(k).dump();
        out += ": ";
        write_value(out, v);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        write_value(out, j[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

std::string dump(const json& j) {
  std::string out;
  write_value(out, j);
  out += '\n';
  return out;
}

json set_json(const IndexSetSpec& s) {
  json j = json::object();
  j["spec"] = s.to_string();
  j["family"] = family_name(s.family());
  return j;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string family_name(SetFamily f) {
  switch (f) {
    case SetFamily::AllButZero: return "all-but-zero";
    case SetFamily::Gap: return "gap";
    case SetFamily::Past: return "past";
    case SetFamily::Nakazi: return "nakazi";
    case SetFamily::SingleFuture: return "future-one";
    case SetFamily::MissingPast: return "missing-past";
    case SetFamily::CustomWindow: return "window";
    case SetFamily::CyclicSubset: return "cyclic";
  }
  return "unknown";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightFunction parse_weight(std::string_view text) {
  const json doc = parse_document(text);
  const Eigen::Index q = dimension(doc);
  const json& kind = field(doc, "kind");
  if (!kind.is_string()) parse_fail("kind must be a string");
  try {
    if (kind == "trig_poly") return WeightFunction::trig_poly(lag_sequence(field(doc, "coefficients"), q, "coefficients"));
    if (kind == "grid") {
      const int n = integer(field(doc, "n_points"), "n_points");
      const json& samples = field(doc, "samples");
      if (!samples.is_array() || static_cast<int>(samples.size()) != n) {
        parse_fail("samples must hold n_points entries");
      }
      std::vector<Matrix> values;
      values.reserve(samples.size());
      for (const json& s : samples) values.push_back(matrix_from(s, q));
      return WeightFunction::grid(GridFunction(std::move(values)));
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    parse_fail(e.what());
  }
  parse_fail("kind must be \"trig_poly\" or \"grid\"");
}

OuterFactor parse_factor(std::string_view text) {
  const json doc = parse_document(text);
  const Eigen::Index q = dimension(doc);
  std::vector<Matrix> a = lag_sequence(field(doc, "A"), q, "A");
  std::vector<Matrix> b = lag_sequence(field(doc, "B"), q, "B");
  if (doc.contains("L") && integer(doc.at("L"), "L") + 1 != static_cast<int>(a.size())) {
    parse_fail("L does not match the number of A coefficients");
  }
  const json& res = field(doc, "residual");
  const double residual = res.is_null() ? std::numeric_limits<double>::quiet_NaN() : number(res, "residual");
  try {
    return OuterFactor(std::move(a), std::move(b), residual);
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

std::string weight_to_json(const WeightFunction& w) {
  json j = json::object();
  j["q"] = static_cast<int>(w.dim());
  if (w.is_trig_poly()) {
    j["kind"] = "trig_poly";
    json coeffs = json::array();
    const auto& c = w.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) coeffs.push_back(lag_entry(static_cast<int>(k), c[k]));
    j["coefficients"] = std::move(coeffs);
  } else {
    const GridFunction& g = w.samples();
    j["kind"] = "grid";
    j["n_points"] = g.size();
    json samples = json::array();
    for (const Matrix& m : g.samples()) samples.push_back(matrix_json(m));
    j["samples"] = std::move(samples);
  }
  return dump(j);
}

std::string factor_to_json(const OuterFactor& f) {
  json j = json::object();
  j["q"] = static_cast<int>(f.dim());
  j["L"] = f.truncation();
  j["residual"] = f.residual();
  json a = json::array();
  json b = json::array();
  for (std::size_t k = 0; k < f.a().size(); ++k) a.push_back(lag_entry(static_cast<int>(k), f.a()[k]));
  for (std::size_t k = 0; k < f.b().size(); ++k) b.push_back(lag_entry(static_cast<int>(k), f.b()[k]));
  j["A"] = std::move(a);
  j["B"] = std::move(b);
  j["inverse_tail"] = f.inverse_tail();
  return dump(j);
}

std::string solution_to_json(const PredictionSolution& s) {
  json j = json::object();
  j["set"] = set_json(s.set);
  j["delta_re"] = real_rows(s.delta.matrix().real());
  j["delta_im"] = real_rows(s.delta.matrix().imag());
  j["delta_scalar"] = s.delta_scalar;
  json p = json::object();
  p["form"] = s.predictor.form == PredictorForm::FrequencyCoefficients ? "frequency_coefficients"
                                                                        : "factorization_form";
  p["kernel"] = s.predictor.kernel;
  json coeffs = json::array();
  for (const auto& [lag, m] : s.predictor.coefficients) coeffs.push_back(lag_entry(lag, m));
  p["coefficients"] = std::move(coeffs);
  j["predictor"] = std::move(p);
  return dump(j);
}

std::string report_to_json(const VerificationReport& r) {
  json j = json::object();
  j["theorem"] = r.theorem;
  j["K"] = r.window;
  j["N_grid"] = r.grid;
  json dev = json::object();
  for (const auto& [k, v] : r.deviations) dev[k] = v;
  json val = json::object();
  for (const auto& [k, v] : r.values) val[k] = v;
  j["deviations"] = std::move(dev);
  j["values"] = std::move(val);
  j["pass"] = r.pass;
  return dump(j);
}

}  // namespace specpredict
