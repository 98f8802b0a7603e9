#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace esshist {

enum class TiePolicy { kReject, kJitter };

/// Immutable, strictly increasing sample X_(1) < ... < X_(n), n >= 2.
///
/// Order statistics are addressed 1-based through `at(i)`, matching the
/// index convention used by interval systems: an interval (j, k] covers
/// X_(j+1) ... X_(k) and has empirical mass (k - j) / n.
class SortedSample {
 public:
  /// Sorts `values`. Exact duplicates throw DataError under kReject; under
  /// kJitter each run of ties is spread deterministically (seeded) within
  /// 1e-9 of the local spacing.
  explicit SortedSample(std::vector<double> values,
                        TiePolicy ties = TiePolicy::kReject,
                        std::uint64_t jitter_seed = 0);

  std::size_t size() const { return values_.size(); }
  double at(std::size_t i) const { return values_[i - 1]; }  // 1-based
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  std::span<const double> values() const { return values_; }

  /// Length X_(k) - X_(j) of the order-statistic interval (j, k]; j >= 1.
  double width(std::size_t j, std::size_t k) const { return at(k) - at(j); }

  /// Number of sample points <= x.
  std::size_t count_at_or_below(double x) const;
  /// Number of sample points < x.
  std::size_t count_below(double x) const;

  /// Applies x -> scale * x + shift (scale > 0).
  SortedSample affine(double scale, double shift) const;

 private:
  struct Trusted {};
  SortedSample(Trusted, std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

}  // namespace esshist
