#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace specpredict {

enum class SetFamily {
  AllButZero,    // Z \ {0}
  Gap,           // Z \ {0, 1, ..., n}
  Past,          // negative integers
  Nakazi,        // negatives and {1, ..., n}; n = 0 is the pure past
  SingleFuture,  // negatives and {n}
  MissingPast,   // negatives without -n
  CustomWindow,  // explicit finite list, 0 excluded
  CyclicSubset,  // subset of Z_N \ {0}
};

/// Index set S of observed lags; the prediction target is lag 0.
///
/// Text form: all-but-zero | gap:n | past | nakazi:n | future-one:n |
/// missing-past:n | window:[k1,k2,...] | cyclic:N:[k1,...]
class IndexSetSpec {
 public:
  static IndexSetSpec all_but_zero();
  static IndexSetSpec gap(int n);
  static IndexSetSpec past();
  static IndexSetSpec nakazi(int n);
  static IndexSetSpec single_future(int n);
  static IndexSetSpec missing_past(int n);
  static IndexSetSpec custom_window(std::vector<int> lags);
  static IndexSetSpec cyclic_subset(int group_order, std::vector<int> lags);

  /// Throws ParseError on malformed text.
  static IndexSetSpec parse(std::string_view text);
  std::string to_string() const;

  SetFamily family() const noexcept { return family_; }
  int order() const noexcept { return order_; }
  const std::vector<int>& lags() const noexcept { return lags_; }
  int group_order() const noexcept { return group_order_; }

  /// Membership of an integer lag (CyclicSubset: residue mod N).
  bool contains(int lag) const;

  /// S intersected with [-K, K] in ascending order.
  std::vector<int> truncated(int window) const;

  /// Complement lags [-K, K] \ (S u {0}) in ascending order.
  std::vector<int> complement_truncated(int window) const;

  /// Whether the dual-space description of this family is available: every
  /// family except CustomWindow is a finite alteration of the past or the future.
  bool dual_available() const noexcept;

  bool operator==(const IndexSetSpec&) const = default;

 private:
  IndexSetSpec(SetFamily family, int order, std::vector<int> lags, int group_order);

  SetFamily family_;
  int order_ = 0;
  std::vector<int> lags_;
  int group_order_ = 0;
};

}  // namespace specpredict
