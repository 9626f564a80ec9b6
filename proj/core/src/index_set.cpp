#include "specpredict/index_set.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "specpredict/error.hpp"

namespace specpredict {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view context) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::ParseError, "expected an integer in '" + std::string(context) + "'");
  }
  return value;
}

std::vector<int> parse_list(std::string_view s, std::string_view context) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw Error(Errc::ParseError, "expected [k1,k2,...] in '" + std::string(context) + "'");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<int> out;
  if (trim(s).empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma), context));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string list_to_string(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out + "]";
}

void require_order(int n, int minimum, const char* family) {
  if (n < minimum) {
    throw Error(Errc::InvalidArgument,
                std::string(family) + " needs n >= " + std::to_string(minimum) + ", got " + std::to_string(n));
  }
}

}  // namespace

IndexSetSpec::IndexSetSpec(SetFamily family, int order, std::vector<int> lags, int group_order)
    : family_(family), order_(order), lags_(std::move(lags)), group_order_(group_order) {}

IndexSetSpec IndexSetSpec::all_but_zero() { return {SetFamily::AllButZero, 0, {}, 0}; }

IndexSetSpec IndexSetSpec::gap(int n) {
  require_order(n, 1, "gap");
  return {SetFamily::Gap, n, {}, 0};
}

IndexSetSpec IndexSetSpec::past() { return {SetFamily::Past, 0, {}, 0}; }

IndexSetSpec IndexSetSpec::nakazi(int n) {
  require_order(n, 0, "nakazi");
  return {SetFamily::Nakazi, n, {}, 0};
}

IndexSetSpec IndexSetSpec::single_future(int n) {
  require_order(n, 1, "future-one");
  return {SetFamily::SingleFuture, n, {}, 0};
}

IndexSetSpec IndexSetSpec::missing_past(int n) {
  require_order(n, 1, "missing-past");
  return {SetFamily::MissingPast, n, {}, 0};
}

IndexSetSpec IndexSetSpec::custom_window(std::vector<int> lags) {
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  if (lags.empty()) throw Error(Errc::InvalidArgument, "window needs at least one lag");
  if (std::binary_search(lags.begin(), lags.end(), 0)) {
    throw Error(Errc::InvalidArgument, "window must not contain the target lag 0");
  }
  return {SetFamily::CustomWindow, 0, std::move(lags), 0};
}

IndexSetSpec IndexSetSpec::cyclic_subset(int group_order, std::vector<int> lags) {
  if (group_order < 2) throw Error(Errc::InvalidArgument, "cyclic group order must be >= 2");
  for (int& k : lags) k = ((k % group_order) + group_order) % group_order;
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  if (std::binary_search(lags.begin(), lags.end(), 0)) {
    throw Error(Errc::InvalidArgument, "cyclic subset must not contain 0");
  }
  return {SetFamily::CyclicSubset, 0, std::move(lags), group_order};
}

IndexSetSpec IndexSetSpec::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto colon = s.find(':');
  const std::string_view head = s.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  auto no_arg = [&](IndexSetSpec spec) {
    if (has_arg) throw Error(Errc::ParseError, "'" + std::string(head) + "' takes no argument");
    return spec;
  };
  auto need_arg = [&]() {
    if (!has_arg) throw Error(Errc::ParseError, "'" + std::string(head) + "' needs ':n'");
  };
  try {
    if (head == "all-but-zero") return no_arg(all_but_zero());
    if (head == "past") return no_arg(past());
    if (head == "gap") return need_arg(), gap(parse_int(rest, s));
    if (head == "nakazi") return need_arg(), nakazi(parse_int(rest, s));
    if (head == "future-one") return need_arg(), single_future(parse_int(rest, s));
    if (head == "missing-past") return need_arg(), missing_past(parse_int(rest, s));
    if (head == "window") return need_arg(), custom_window(parse_list(rest, s));
    if (head == "cyclic") {
      need_arg();
      const auto second = rest.find(':');
      if (second == std::string_view::npos) throw Error(Errc::ParseError, "cyclic needs N:[...]");
      return cyclic_subset(parse_int(rest.substr(0, second), s), parse_list(rest.substr(second + 1), s));
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    throw Error(Errc::ParseError, e.what());
  }
  throw Error(Errc::ParseError, "unknown index set '" + std::string(s) + "'");
}

std::string IndexSetSpec::to_string() const {
  switch (family_) {
    case SetFamily::AllButZero: return "all-but-zero";
    case SetFamily::Gap: return "gap:" + std::to_string(order_);
    case SetFamily::Past: return "past";
    case SetFamily::Nakazi: return "nakazi:" + std::to_string(order_);
    case SetFamily::SingleFuture: return "future-one:" + std::to_string(order_);
    case SetFamily::MissingPast: return "missing-past:" + std::to_string(order_);
    case SetFamily::CustomWindow: return "window:" + list_to_string(lags_);
    case SetFamily::CyclicSubset: return "cyclic:" + std::to_string(group_order_) + ":" + list_to_string(lags_);
  }
  return {};
}

bool IndexSetSpec::contains(int lag) const {
  switch (family_) {
    case SetFamily::AllButZero: return lag != 0;
    case SetFamily::Gap: return lag < 0 || lag > order_;
    case SetFamily::Past: return lag < 0;
    case SetFamily::Nakazi: return lag < 0 || (lag >= 1 && lag <= order_);
    case SetFamily::SingleFuture: return lag < 0 || lag == order_;
    case SetFamily::MissingPast: return lag < 0 && lag != -order_;
    case SetFamily::CustomWindow: return std::binary_search(lags_.begin(), lags_.end(), lag);
    case SetFamily::CyclicSubset: {
      const int r = ((lag % group_order_) + group_order_) % group_order_;
      return std::binary_search(lags_.begin(), lags_.end(), r);
    }
  }
  return false;
}

std::vector<int> IndexSetSpec::truncated(int window) const {
  if (window < 0) throw Error(Errc::InvalidArgument, "window must be >= 0");
  std::vector<int> out;
  for (int k = -window; k <= window; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::vector<int> IndexSetSpec::complement_truncated(int window) const {
  if (window < 0) throw Error(Errc::InvalidArgument, "window must be >= 0");
  std::vector<int> out;
  for (int k = -window; k <= window; ++k) {
    if (k != 0 && !contains(k)) out.push_back(k);
  }
  return out;
}

bool IndexSetSpec::dual_available() const noexcept {
  return family_ != SetFamily::CustomWindow && family_ != SetFamily::CyclicSubset;
}

}  // namespace specpredict
