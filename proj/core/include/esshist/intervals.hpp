#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace esshist {

/// Order-statistic interval (X_(j), X_(k)], 1 <= j < k <= n.
struct IntervalSpec {
  std::size_t j = 0;
  std::size_t k = 0;
  int scale = 0;  // dyadic level that produced the (j, k) pair

  std::size_t count() const { return k - j; }
  double mass(std::size_t n) const {
    return static_cast<double>(k - j) / static_cast<double>(n);
  }
  friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

/// Which logarithm divides n in the largest scale floor(log2(n / log n)).
enum class ScaleLog { kNatural, kBinary };

int max_scale(std::size_t n, ScaleLog base = ScaleLog::kNatural);

/// The dyadic, grid-thinned interval family over the order statistics of a
/// sample of size n. Scale l contributes pairs on the grid {1 + i*d_l} with
/// m_l < k - j <= 2 m_l, m_l = n 2^-l, d_l = ceil(m_l / (6 sqrt(l))), for
/// l = 2 .. max_scale(n). Pairs produced by several scales are kept once,
/// with the smallest scale.
///
/// Only indices are stored, so one system serves every sample of size n.
class IntervalSystem {
 public:
  explicit IntervalSystem(std::size_t n, ScaleLog base = ScaleLog::kNatural);

  std::size_t sample_size() const { return n_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  /// All intervals, sorted by right index then left index.
  std::span<const IntervalSpec> intervals() const { return intervals_; }
  const IntervalSpec& operator[](std::size_t idx) const { return intervals_[idx]; }

  /// Intervals whose right index equals k, ascending in left index.
  std::span<const IntervalSpec> ending_at(std::size_t k) const;
  /// Position of the first interval with right index k in intervals().
  std::size_t first_ending_at(std::size_t k) const { return right_offsets_[k]; }

  /// Intervals I with j <= I.j and I.k <= k, i.e. contained in (X_(j), X_(k)].
  /// j = 0 denotes the closed left edge at X_(1) and admits every I.j >= 1.
  std::vector<IntervalSpec> within(std::size_t j, std::size_t k) const;

 private:
  std::size_t n_;
  std::vector<IntervalSpec> intervals_;
  std::vector<std::size_t> right_offsets_;  // size n + 2
};

/// Free-function form of the system constructor.
std::vector<IntervalSpec> build_interval_system(std::size_t n,
                                                ScaleLog base = ScaleLog::kNatural);

/// Containment query over an explicit list.
std::vector<IntervalSpec> intervals_within(std::span<const IntervalSpec> system,
                                           std::size_t j, std::size_t k);

}  // namespace esshist
