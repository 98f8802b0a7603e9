#include "esshist/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "esshist/errors.hpp"

namespace esshist {
namespace {

double sample_sd(const SortedSample& sample) {
  const auto v = sample.values();
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

HistogramModel from_breaks(const SortedSample& sample, std::vector<double> breaks) {
  const std::size_t n = sample.size();
  HistogramModel h;
  h.n = n;
  h.breaks = std::move(breaks);
  std::size_t below = 0;
  for (std::size_t b = 0; b + 1 < h.breaks.size(); ++b) {
    const std::size_t upto = b + 2 == h.breaks.size() ? n : sample.count_at_or_below(h.breaks[b + 1]);
    const std::size_t count = upto - below;
    below = upto;
    h.counts.push_back(count);
    h.heights.push_back(static_cast<double>(count) /
                        (static_cast<double>(n) * (h.breaks[b + 1] - h.breaks[b])));
  }
  h.merge_equal_neighbors();
  return h;
}

}  // namespace

std::size_t classical_bin_count(const SortedSample& sample, ClassicalRule rule) {
  const double n = static_cast<double>(sample.size());
  if (rule == ClassicalRule::kSturges) {
    return static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
  }
  const double s = sample_sd(sample);
  if (!(s > 0.0)) return 1;
  const double h = kScottConstant * s * std::cbrt(1.0 / n);
  const double range = sample.back() - sample.front();
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / h)));
}

HistogramModel classical_histogram(const SortedSample& sample, ClassicalRule rule) {
  const std::size_t k = classical_bin_count(sample, rule);
  const double lo = sample.front(), hi = sample.back();
  std::vector<double> breaks{lo};
  if (rule == ClassicalRule::kScottArea) {
    const std::size_t n = sample.size();
    const std::size_t bins = std::min(k, n - 1);
    for (std::size_t b = 1; b < bins; ++b) {
      // Right end of bin b at the order statistic closest to b n / k.
      const auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(b * n) /
                                                             static_cast<double>(bins)));
      const double x = sample.at(std::clamp<std::size_t>(idx, 1, n));
      if (x > breaks.back() && x < hi) breaks.push_back(x);
    }
  } else {
    for (std::size_t b = 1; b < k; ++b) {
      breaks.push_back(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(k));
    }
  }
  breaks.push_back(hi);
  return from_breaks(sample, std::move(breaks));
}

ClassicalRule parse_classical_rule(const std::string& name) {
  if (name == "sturges") return ClassicalRule::kSturges;
  if (name == "scott_width" || name == "scott") return ClassicalRule::kScottWidth;
  if (name == "scott_area") return ClassicalRule::kScottArea;
  throw DataError("unknown histogram rule '" + name + "'");
}

const char* to_string(ClassicalRule rule) {
  switch (rule) {
    case ClassicalRule::kSturges: return "sturges";
    case ClassicalRule::kScottWidth: return "scott_width";
    case ClassicalRule::kScottArea: return "scott_area";
  }
  return "?";
}

}  // namespace esshist
