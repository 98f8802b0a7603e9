#pragma once

#include <cstddef>
#include <vector>

#include "esshist/histogram.hpp"
#include "esshist/intervals.hpp"
#include "esshist/quantiles.hpp"
#include "esshist/sample.hpp"

namespace esshist {

inline constexpr std::size_t kDefaultMergeWindow = 5;

struct RemovablePoint {
  std::size_t index = 0;  // breakpoint position in the (merged) estimator, 1..K-1
  double value = 0.0;
  std::size_t multiplicity = 0;  // admissible contiguous merges covering it

  friend bool operator==(const RemovablePoint&, const RemovablePoint&) = default;
};

struct AuditReport {
  std::vector<IntervalSpec> violations;
  std::vector<RemovablePoint> removable;

  bool clean() const { return violations.empty() && removable.empty(); }
  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

/// Intervals of the system lying inside one constant piece of `estimator`
/// (neighbouring equal heights count as one piece; height 0 outside the
/// support) whose constant fails the local constraint at threshold kappa.
std::vector<IntervalSpec> violation_intervals_at(const SortedSample& sample,
                                                 const HistogramModel& estimator, double kappa);

/// Breakpoints whose two neighbouring pieces can be merged into one block
/// (pooled empirical density) without violating any contained constraint.
/// Multiplicity counts every admissible merge of 2..window contiguous pieces
/// that has the breakpoint in its interior.
std::vector<RemovablePoint> removable_changepoints_at(const SortedSample& sample,
                                                      const HistogramModel& estimator,
                                                      double kappa,
                                                      std::size_t window = kDefaultMergeWindow);

std::vector<IntervalSpec> violation_intervals(const SortedSample& sample,
                                              const HistogramModel& estimator, double alpha,
                                              const QuantileTable& table);

std::vector<RemovablePoint> removable_changepoints(const SortedSample& sample,
                                                   const HistogramModel& estimator, double alpha,
                                                   const QuantileTable& table,
                                                   std::size_t window = kDefaultMergeWindow);

AuditReport audit(const SortedSample& sample, const HistogramModel& estimator, double alpha,
                  const QuantileTable& table, std::size_t window = kDefaultMergeWindow);

/// Number of violation intervals covering each location of `grid`.
std::vector<std::size_t> violation_cover_counts(const SortedSample& sample,
                                                const std::vector<IntervalSpec>& violations,
                                                const std::vector<double>& grid);

}  // namespace esshist
