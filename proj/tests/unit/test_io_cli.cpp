#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "specpredict/index_set.hpp"
#include "specpredict/io.hpp"
#include "specpredict/predictors.hpp"
#include "specpredict/spectral_factor.hpp"
#include "support/errors.hpp"
#include "support/suite.hpp"

namespace sp = specpredict;
namespace cli = specpredict::cli;
using sp::IndexSetSpec;
using sp::Matrix;
using sp::testing::error_code;

namespace {

const std::string kData = SPECPREDICT_TEST_DATA;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "specpredict");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  cli::RunConfig config;
  if (auto stop = cli::parse_args(static_cast<int>(argv.size()), argv.data(), config, out, err)) {
    return {*stop, out.str(), err.str()};
  }
  const int code = cli::run(config, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("specpredict_test_" + name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(IndexSet, ParseAndPrint) {
  for (const char* text : {"all-but-zero", "past", "gap:3", "nakazi:0", "nakazi:2", "future-one:1", "missing-past:4",
                           "window:[-3,1,5]", "cyclic:8:[1,2,3]"}) {
    const auto s = IndexSetSpec::parse(text);
    EXPECT_EQ(s.to_string(), text);
    EXPECT_EQ(IndexSetSpec::parse(s.to_string()), s);
  }
  EXPECT_EQ(IndexSetSpec::parse("nakazi:0").family(), sp::SetFamily::Nakazi);
  EXPECT_EQ(IndexSetSpec::parse("cyclic:8:[9]").lags(), std::vector<int>{1});
  EXPECT_EQ(IndexSetSpec::parse(" gap:2 "), IndexSetSpec::gap(2));
}

TEST(IndexSet, ParseErrors) {
  for (const char* text : {"", "gap", "gap:0", "nakazi:-1", "future-one:0", "missing-past:x", "window:[0,1]",
                           "window:[1,", "cyclic:8:[8]", "cyclic:0:[1]", "future:1", "gap:2x"}) {
    EXPECT_EQ(error_code([&] { IndexSetSpec::parse(text); }), sp::Errc::ParseError) << text;
  }
}

TEST(IndexSet, Membership) {
  const auto nak = IndexSetSpec::nakazi(2);
  EXPECT_TRUE(nak.contains(-7));
  EXPECT_TRUE(nak.contains(2));
  EXPECT_FALSE(nak.contains(0));
  EXPECT_FALSE(nak.contains(3));
  EXPECT_EQ(nak.truncated(3), (std::vector<int>{-3, -2, -1, 1, 2}));
  EXPECT_EQ(nak.complement_truncated(4), (std::vector<int>{3, 4}));

  const auto mp = IndexSetSpec::missing_past(2);
  EXPECT_EQ(mp.truncated(3), (std::vector<int>{-3, -1}));
  EXPECT_EQ(mp.complement_truncated(2), (std::vector<int>{-2, 1, 2}));
  EXPECT_EQ(IndexSetSpec::gap(1).truncated(3), (std::vector<int>{-3, -2, -1, 2, 3}));
  EXPECT_EQ(IndexSetSpec::single_future(2).complement_truncated(3), (std::vector<int>{1, 3}));
  EXPECT_TRUE(IndexSetSpec::cyclic_subset(4, {1}).contains(5));
  EXPECT_FALSE(IndexSetSpec::custom_window({1, 2}).dual_available());
  EXPECT_TRUE(IndexSetSpec::past().dual_available());
}

TEST(Io, WeightRoundTrip) {
  const auto w = sp::parse_weight(sp::read_text_file(kData + "/constant2.json"));
  ASSERT_EQ(w.dim(), 2);
  EXPECT_EQ(w.coefficients()[0](0, 1), sp::cplx(0.5, 0.25));
  const auto again = sp::parse_weight(sp::weight_to_json(w));
  EXPECT_EQ(again.coefficients()[0], w.coefficients()[0]);

  const auto r = sp::testing::random_trig_poly(2, 3, 4);
  const auto rr = sp::parse_weight(sp::weight_to_json(r));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(rr.coefficients()[k], r.coefficients()[k]);
}

TEST(Io, FactorRoundTrip) {
  sp::FactorOptions o;
  o.truncation = 16;
  const auto f = sp::factorize(sp::evaluate_on_grid(sp::testing::random_trig_poly(2, 2, 8), 256), o);
  const auto g = sp::parse_factor(sp::factor_to_json(f));
  ASSERT_EQ(g.truncation(), 16u);
  for (std::size_t k = 0; k <= 16; ++k) {
    EXPECT_EQ(g.a()[k], f.a()[k]);
    EXPECT_EQ(g.b()[k], f.b()[k]);
  }
  EXPECT_EQ(g.residual(), f.residual());
}

TEST(Io, ParseErrors) {
  EXPECT_EQ(error_code([] { sp::parse_weight("{"); }), sp::Errc::ParseError);
  EXPECT_EQ(error_code([] { sp::parse_weight(R"({"q": 1, "kind": "trig_poly", "coefficients": []})"); }),
            sp::Errc::ParseError);
  EXPECT_EQ(error_code([] {
              sp::parse_weight(R"({"q": 2, "kind": "trig_poly", "coefficients": [
                {"lag": 0, "re": [[1, 0.5], [0, 1]], "im": [[0, 0], [0, 0]]}]})");
            }),
            sp::Errc::ParseError);
  EXPECT_EQ(error_code([] { sp::read_text_file("/nonexistent/weight.json"); }), sp::Errc::ParseError);
}

TEST(Io, FormatDouble) {
  EXPECT_EQ(sp::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(sp::format_double(std::nan("")), "nan");
  EXPECT_EQ(sp::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Io, SolutionJsonShape) {
  const auto sol = sp::interpolate_all(sp::testing::ma1(0.5), 256);
  const auto j = nlohmann::json::parse(sp::solution_to_json(sol));
  EXPECT_EQ(j["set"]["spec"], "all-but-zero");
  EXPECT_NEAR(j["delta_scalar"].get<double>(), 0.75, 1e-12);
  EXPECT_EQ(j["predictor"]["form"], "factorization_form");
  EXPECT_EQ(j["predictor"]["kernel"], "inverse_weight");
}

TEST(Cli, PredictConstant) {
  const auto r = invoke({"predict", "-w", kData + "/constant2.json", "--set", "all-but-zero"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["delta_re"][0][0].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(j["delta_re"][1][0].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["delta_im"][0][1].get<double>(), 0.25, 1e-12);
}

TEST(Cli, PredictNakaziMa1) {
  const auto r = invoke({"predict", "-w", kData + "/ma1.json", "--set", "nakazi:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["delta_scalar"].get<double>(), 0.8, 1e-10);
}

TEST(Cli, PredictCustomWindowUsesFiniteSection) {
  const auto r = invoke({"predict", "-w", kData + "/ma1.json", "--set", "window:[-1,1]"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["predictor"]["form"], "frequency_coefficients");
  // both neighbours of an MA(1), checked against the least-squares oracle
  const auto fit = sp::testing::weighted_least_squares(sp::evaluate_on_grid(sp::testing::ma1(0.5), 4096), {-1, 1});
  EXPECT_NEAR(j["delta_scalar"].get<double>(), fit.delta(0, 0).real(), 1e-12);
}

TEST(Cli, VerifyPastPasses) {
  for (const char* theorem : {"projection", "infimum", "trace"}) {
    const auto r = invoke({"verify", "-w", kData + "/ma1.json", "--set", "past", "-K", "96", "--theorem", theorem});
    ASSERT_EQ(r.code, 0) << theorem << " " << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>()) << theorem;
  }
  const auto c = invoke({"verify", "-w", kData + "/ma1.json", "--set", "cyclic:8:[1,2,3]", "--theorem", "cyclic"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(nlohmann::json::parse(c.out)["theorem"], "cyclic");
}

TEST(Cli, NumericTheoremAliases) {
  const std::vector<std::pair<std::string, std::string>> aliases{
      {"3.2", "projection"}, {"3.6", "infimum"}, {"3.7", "trace"}};
  for (const auto& [alias, name] : aliases) {
    const auto a = invoke({"verify", "-w", kData + "/ma1.json", "--set", "gap:1", "-K", "32", "--theorem", alias});
    const auto b = invoke({"verify", "-w", kData + "/ma1.json", "--set", "gap:1", "-K", "32", "--theorem", name});
    EXPECT_EQ(a.out, b.out) << alias;
  }
  EXPECT_EQ(invoke({"verify", "-w", kData + "/ma1.json", "--set", "gap:1", "--theorem", "4.1"}).code,
            cli::kExitInputError);
}

TEST(Cli, VerificationFailureExitsTwo) {
  const auto r = invoke({"verify", "-w", kData + "/ma1.json", "--set", "nakazi:1", "-K", "4", "--tol", "1e-14"});
  EXPECT_EQ(r.code, cli::kExitVerificationFailed);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, InputErrorsExitOne) {
  auto r = invoke({"predict", "-w", "/nonexistent.json", "--set", "past"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_EQ(r.err.rfind("error: ParseError:", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  r = invoke({"predict", "-w", kData + "/ma1.json", "--set", "gap:zero"});
  EXPECT_EQ(r.code, cli::kExitInputError);

  r = invoke({"predict", "-w", kData + "/ma1.json", "--set", "nakazi:1", "-N", "1000"});
  EXPECT_EQ(r.code, cli::kExitInputError);

  const auto bz = temp_file("boundary.json", sp::weight_to_json(sp::testing::ma1(1.0)));
  r = invoke({"predict", "-w", bz.string(), "--set", "all-but-zero"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("NotInverseIntegrable"), std::string::npos) << r.err;

  r = invoke({"predict", "-w", kData + "/ma1.json"});
  EXPECT_EQ(r.code, cli::kExitInputError);
}

TEST(Cli, GridFromEnvironment) {
  ::setenv("SPECPREDICT_GRID", "1000", 1);
  const auto bad = invoke({"predict", "-w", kData + "/ma1.json", "--set", "past"});
  ::setenv("SPECPREDICT_GRID", "512", 1);
  const auto ok = invoke({"predict", "-w", kData + "/ma1.json", "--set", "past", "-L", "32"});
  ::unsetenv("SPECPREDICT_GRID");
  EXPECT_EQ(bad.code, cli::kExitInputError);
  EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"predict", "-w", kData + "/constant2.json", "--set", "nakazi:2", "-L", "64"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, FactorRoundTripReproducesPrediction) {
  const auto w = temp_file("random.json", sp::weight_to_json(sp::testing::random_trig_poly(2, 2, 20240611)));
  const auto f = invoke({"factorize", "-w", w.string(), "-L", "64"});
  ASSERT_EQ(f.code, 0) << f.err;
  const auto fpath = temp_file("random_factor.json", f.out);
  for (const char* set : {"nakazi:2", "future-one:1", "missing-past:2"}) {
    const auto direct = invoke({"predict", "-w", w.string(), "--set", set, "-L", "64"});
    const auto via = invoke({"predict", "-w", w.string(), "--set", set, "--factor", fpath.string()});
    ASSERT_EQ(direct.code, 0) << direct.err;
    EXPECT_EQ(direct.out, via.out) << set;
  }
}

TEST(Cli, SweepCsv) {
  const auto r = invoke({"sweep", "-w", kData + "/ma1.json", "--set", "nakazi", "--n-max", "2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("n,delta_scalar", 0), 0u);
  EXPECT_EQ(lines[2].rfind("1,0.8", 0), 0u) << lines[2];

  const auto j = invoke({"sweep", "-w", kData + "/ma1.json", "--set", "gap", "--n-max", "3"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 3u);
  EXPECT_EQ(invoke({"sweep", "-w", kData + "/ma1.json", "--set", "past"}).code, cli::kExitInputError);
}

TEST(Cli, PrettyAndCsvFormats) {
  const auto p = invoke({"predict", "-w", kData + "/ma1.json", "--set", "gap:1", "--format", "pretty"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("delta_scalar"), std::string::npos);
  const auto v = invoke({"verify", "-w", kData + "/ma1.json", "--set", "gap:1", "-K", "32", "--format", "csv"});
  EXPECT_EQ(v.out.rfind("kind,name,value", 0), 0u);
}
