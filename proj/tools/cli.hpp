#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace specpredict::cli {

enum class Command { Predict, Factorize, Verify, Sweep };
enum class Format { Json, Csv, Pretty };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerificationFailed = 2;

struct RunConfig {
  Command command = Command::Predict;
  std::string weight_path;
  std::string factor_path;  // optional precomputed factor
  std::string set;
  std::string theorem = "projection";
  std::size_t grid = 4096;
  std::size_t truncation = 512;  // L
  int window = 128;              // K
  int n_max = 10;
  Format format = Format::Json;
  std::optional<double> tolerance;         // verification tolerance
  std::optional<double> factor_tolerance;  // factorization residual tolerance
};

/// Parses argv. Returns an exit code when the program should stop (help, or a
/// usage error already reported on `err`).
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err);

/// Executes one command. Library errors are reported as a single line on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace specpredict::cli
