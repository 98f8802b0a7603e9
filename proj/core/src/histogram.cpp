#include "esshist/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "esshist/errors.hpp"

namespace esshist {

double HistogramModel::total_mass() const {
  double mass = 0.0;
  for (std::size_t b = 0; b < bins(); ++b) mass += heights[b] * (breaks[b + 1] - breaks[b]);
  return mass;
}

std::size_t HistogramModel::bin_of(double x) const {
  if (bins() == 0 || x < breaks.front() || x > breaks.back()) return bins();
  if (x == breaks.front()) return 0;
  const auto it = std::lower_bound(breaks.begin(), breaks.end(), x);
  return static_cast<std::size_t>(it - breaks.begin()) - 1;
}

double HistogramModel::density(double x) const {
  const auto b = bin_of(x);
  return b < bins() ? heights[b] : 0.0;
}

double HistogramModel::cdf(double x) const {
  if (bins() == 0 || x <= breaks.front()) return 0.0;
  double mass = 0.0;
  for (std::size_t b = 0; b < bins(); ++b) {
    if (x >= breaks[b + 1]) {
      mass += heights[b] * (breaks[b + 1] - breaks[b]);
    } else {
      mass += heights[b] * (x - breaks[b]);
      break;
    }
  }
  return mass;
}

void HistogramModel::merge_equal_neighbors() {
  if (bins() < 2) return;
  std::vector<double> nb{breaks.front()}, nh;
  std::vector<std::size_t> nc;
  const bool has_counts = counts.size() == bins();
  for (std::size_t b = 0; b < bins(); ++b) {
    if (!nh.empty() && heights[b] == nh.back()) {
      nb.back() = breaks[b + 1];
      if (has_counts) nc.back() += counts[b];
      continue;
    }
    nh.push_back(heights[b]);
    nb.push_back(breaks[b + 1]);
    if (has_counts) nc.push_back(counts[b]);
  }
  breaks = std::move(nb);
  heights = std::move(nh);
  counts = std::move(nc);
}

void HistogramModel::validate() const {
  if (heights.empty() || breaks.size() != heights.size() + 1) {
    throw DataError("histogram needs K >= 1 heights and K + 1 breaks");
  }
  if (!counts.empty() && counts.size() != heights.size()) {
    throw DataError("histogram counts must match the number of bins");
  }
  for (std::size_t b = 0; b < breaks.size(); ++b) {
    if (!std::isfinite(breaks[b])) throw DataError("histogram break is not finite");
    if (b > 0 && !(breaks[b] > breaks[b - 1])) {
      throw DataError("histogram breaks must be strictly increasing");
    }
  }
  for (double h : heights) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw DataError("histogram heights must be finite and >= 0");
  }
}

HistogramModel histogram_from_ends(const SortedSample& sample, std::span<const std::size_t> ends) {
  const std::size_t n = sample.size();
  const double nd = static_cast<double>(n);
  HistogramModel h;
  h.n = n;
  h.breaks.push_back(sample.front());
  std::size_t prev = 0;
  for (std::size_t end : ends) {
    const std::size_t count = prev == 0 ? end : end - prev;
    const double width = sample.at(end) - sample.at(prev == 0 ? 1 : prev);
    h.breaks.push_back(sample.at(end));
    h.counts.push_back(count);
    h.heights.push_back(static_cast<double>(count) / (nd * width));
    prev = end;
  }
  h.merge_equal_neighbors();
  return h;
}

HistogramModel single_bin_histogram(const SortedSample& sample) {
  const std::size_t ends[] = {sample.size()};
  return histogram_from_ends(sample, ends);
}

}  // namespace esshist
