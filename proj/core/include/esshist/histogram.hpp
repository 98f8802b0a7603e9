#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esshist/sample.hpp"

namespace esshist {

/// Piecewise-constant density on [breaks.front(), breaks.back()].
///
/// Bin b covers (breaks[b], breaks[b+1]]; the first bin is closed on the
/// left. `counts` is optional (empty when unknown) and otherwise holds the
/// number of sample points attributed to each bin.
struct HistogramModel {
  std::size_t n = 0;
  std::vector<double> breaks;
  std::vector<double> heights;
  std::vector<std::size_t> counts;

  std::size_t bins() const { return heights.size(); }
  double total_mass() const;

  /// Density at x; 0 outside the support. Bins are right-closed.
  double density(double x) const;
  /// Integral of the density up to x.
  double cdf(double x) const;
  /// Bin holding x under the right-closed convention; bins() if outside.
  std::size_t bin_of(double x) const;

  /// Merges neighbours with identical heights (counts are summed).
  void merge_equal_neighbors();
  /// Throws DataError unless breaks are increasing, heights nonnegative and
  /// sizes agree.
  void validate() const;

  friend bool operator==(const HistogramModel&, const HistogramModel&) = default;
};

/// Histogram with bins ending at the given order-statistic indices
/// (1-based, strictly increasing, last == n). Heights are count/(n*width).
HistogramModel histogram_from_ends(const SortedSample& sample, std::span<const std::size_t> ends);

/// Single bin over [X_(1), X_(n)].
HistogramModel single_bin_histogram(const SortedSample& sample);

}  // namespace esshist
