#include "esshist/evaluate.hpp"

#include <algorithm>

#include "esshist/bounds.hpp"
#include "esshist/errors.hpp"

namespace esshist {
namespace {

HistogramModel normalized(const HistogramModel& estimator) {
  estimator.validate();
  HistogramModel h = estimator;
  h.counts.clear();
  h.merge_equal_neighbors();
  return h;
}

// Calls fn(position) for every system interval inside (X_(j), X_(k)].
template <typename Fn>
void for_each_within(const IntervalSystem& system, std::size_t j, std::size_t k, Fn&& fn) {
  for (std::size_t r = j + 1; r <= k; ++r) {
    const auto group = system.ending_at(r);
    const auto base = system.first_ending_at(r);
    for (std::size_t g = 0; g < group.size(); ++g) {
      if (group[g].j >= j) fn(base + g);
    }
  }
}

}  // namespace

std::vector<IntervalSpec> violation_intervals_at(const SortedSample& sample,
                                                 const HistogramModel& estimator, double kappa) {
  const auto h = normalized(estimator);
  const IntervalSystem system(sample.size());
  const auto bands = compute_bands(system, sample, kappa);
  const auto& br = h.breaks;
  std::vector<IntervalSpec> out;
  for (std::size_t idx = 0; idx < system.size(); ++idx) {
    const auto& iv = system[idx];
    const double a = sample.at(iv.j), b = sample.at(iv.k);
    double level;
    if (b <= br.front() || a >= br.back()) {
      level = 0.0;
    } else if (a < br.front()) {
      continue;  // straddles the left edge of the support
    } else {
      const auto piece =
          static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), a) - br.begin()) - 1;
      if (b > br[piece + 1]) continue;  // crosses a breakpoint
      level = h.heights[piece];
    }
    if (!bands[idx].admits(level)) out.push_back(iv);
  }
  return out;
}

std::vector<RemovablePoint> removable_changepoints_at(const SortedSample& sample,
                                                      const HistogramModel& estimator,
                                                      double kappa, std::size_t window) {
  if (window < 2) throw DomainError("merge window must span at least 2 pieces");
  const auto h = normalized(estimator);
  const std::size_t pieces = h.bins();
  if (pieces < 2) return {};
  const IntervalSystem system(sample.size());
  const auto bands = compute_bands(system, sample, kappa);
  const double nd = static_cast<double>(sample.size());

  auto admissible = [&](std::size_t first, std::size_t last) {
    const double lo = h.breaks[first], hi = h.breaks[last + 1];
    const std::size_t below = first == 0 ? sample.count_below(lo) : sample.count_at_or_below(lo);
    const std::size_t count = sample.count_at_or_below(hi) - below;
    const double mu = static_cast<double>(count) / (nd * (hi - lo));
    const std::size_t j = sample.count_below(lo) + 1;
    const std::size_t k = sample.count_at_or_below(hi);
    bool ok = true;
    if (j < k) {
      for_each_within(system, j, k, [&](std::size_t idx) { ok = ok && bands[idx].admits(mu); });
    }
    return ok;
  };

  std::vector<std::size_t> multiplicity(pieces, 0);
  std::vector<bool> pairwise(pieces, false);
  for (std::size_t first = 0; first + 1 < pieces; ++first) {
    for (std::size_t last = first + 1; last < pieces && last - first + 1 <= window; ++last) {
      if (!admissible(first, last)) continue;
      if (last == first + 1) pairwise[last] = true;
      for (std::size_t m = first + 1; m <= last; ++m) ++multiplicity[m];
    }
  }
  std::vector<RemovablePoint> out;
  for (std::size_t m = 1; m < pieces; ++m) {
    if (pairwise[m]) out.push_back({m, h.breaks[m], multiplicity[m]});
  }
  return out;
}

std::vector<IntervalSpec> violation_intervals(const SortedSample& sample,
                                              const HistogramModel& estimator, double alpha,
                                              const QuantileTable& table) {
  if (IntervalSystem(sample.size()).empty()) return {};
  return violation_intervals_at(sample, estimator, lookup_kappa(table, alpha, sample.size()));
}

std::vector<RemovablePoint> removable_changepoints(const SortedSample& sample,
                                                   const HistogramModel& estimator, double alpha,
                                                   const QuantileTable& table,
                                                   std::size_t window) {
  if (IntervalSystem(sample.size()).empty()) {
    // No constraints: every merge is admissible.
    return removable_changepoints_at(sample, estimator, 0.0, window);
  }
  return removable_changepoints_at(sample, estimator, lookup_kappa(table, alpha, sample.size()),
                                   window);
}

AuditReport audit(const SortedSample& sample, const HistogramModel& estimator, double alpha,
                  const QuantileTable& table, std::size_t window) {
  return {violation_intervals(sample, estimator, alpha, table),
          removable_changepoints(sample, estimator, alpha, table, window)};
}

std::vector<std::size_t> violation_cover_counts(const SortedSample& sample,
                                                const std::vector<IntervalSpec>& violations,
                                                const std::vector<double>& grid) {
  std::vector<std::size_t> counts(grid.size(), 0);
  for (const auto& iv : violations) {
    const double a = sample.at(iv.j), b = sample.at(iv.k);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (grid[g] > a && grid[g] <= b) ++counts[g];
    }
  }
  return counts;
}

}  // namespace esshist
