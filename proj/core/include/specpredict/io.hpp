#pragma once

// JSON text formats for weights, outer factors, prediction results and
// verification reports. Matrices are written as {"re": [[...]], "im": [[...]]}
// in row-major order; output has a fixed field order and prints every double
// with 17 significant digits, so equal inputs give byte-identical text.

#include <filesystem>
#include <string>
#include <string_view>

#include "specpredict/duality.hpp"
#include "specpredict/predictors.hpp"
#include "specpredict/spectral_factor.hpp"
#include "specpredict/weight.hpp"

namespace specpredict {

/// Throws ParseError on malformed input or a non-Hermitian lag-0 block.
WeightFunction parse_weight(std::string_view text);
OuterFactor parse_factor(std::string_view text);

/// Reads a whole file; ParseError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

std::string weight_to_json(const WeightFunction& w);
std::string factor_to_json(const OuterFactor& f);
std::string solution_to_json(const PredictionSolution& s);
std::string report_to_json(const VerificationReport& r);

/// %.17g, with "nan", "inf" and "-inf" spelled out for non-finite values.
std::string format_double(double x);

std::string family_name(SetFamily f);

}  // namespace specpredict
