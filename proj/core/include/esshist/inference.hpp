#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "esshist/intervals.hpp"
#include "esshist/quantiles.hpp"
#include "esshist/sample.hpp"

namespace esshist {

enum class Direction { kIncrease, kDecrease };

const char* to_string(Direction d);

/// Hull (X_(left_j), X_(right_k)] of two disjoint intervals I1 < I2 of the
/// system whose average densities differ by more than half the sum of their
/// confidence radii. With confidence 1 - alpha, simultaneously over all
/// emitted features, the average density increases (decreases) across it.
struct FeatureInterval {
  std::size_t left_j = 0;
  std::size_t right_k = 0;
  double left = 0.0;
  double right = 0.0;
  Direction direction = Direction::kIncrease;
  double margin = 0.0;  // |avg(I2) - avg(I1)| - (r(I1) + r(I2)) / 2 > 0
  IntervalSpec first;   // I1, left witness
  IntervalSpec second;  // I2, right witness

  friend bool operator==(const FeatureInterval&, const FeatureInterval&) = default;
};

/// Empirical average density F_n(I) / |I|.
double average_density(const IntervalSpec& interval, const SortedSample& sample);

/// r_n(I) = (2 c / |I|) (sqrt(F_n(I)(1 - F_n(I)) / n) + c / (2n)),
/// c = penalty(F_n(I)) + kappa.
double confidence_radius(const IntervalSpec& interval, const SortedSample& sample, double kappa);

/// Certified features at threshold kappa, reduced to hulls that are minimal
/// under inclusion within each direction, sorted by (left_j, right_k).
/// Runs in O(|J| log n) using a max segment tree over right ends.
std::vector<FeatureInterval> significant_feature_intervals_at(const SortedSample& sample,
                                                              double kappa);

std::vector<FeatureInterval> significant_feature_intervals(const SortedSample& sample,
                                                           double alpha,
                                                           const QuantileTable& table);

/// Lower confidence bounds (modes, troughs) from a direction-alternating
/// chain of pairwise disjoint hulls, picked greedily by earliest right end,
/// once starting with an increase and once with a decrease. Each adjacent
/// (increase, decrease) pair in a chain certifies a mode and each
/// (decrease, increase) pair a trough; both bounds take the better chain.
/// (0, 0) means no nontrivial bound.
std::pair<int, int> lower_bound_modes(const std::vector<FeatureInterval>& features);

}  // namespace esshist
