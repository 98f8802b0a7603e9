#include "esshist/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace esshist {

int max_scale(std::size_t n, ScaleLog base) {
  if (n < 2) return 0;
  const double nd = static_cast<double>(n);
  const double log_n = base == ScaleLog::kNatural ? std::log(nd) : std::log2(nd);
  return static_cast<int>(std::floor(std::log2(nd / log_n)));
}

IntervalSystem::IntervalSystem(std::size_t n, ScaleLog base) : n_(n) {
  const int top = max_scale(n, base);
  const double nd = static_cast<double>(n);
  for (int level = 2; level <= top; ++level) {
    const double m = nd * std::ldexp(1.0, -level);
    const auto d = static_cast<std::size_t>(
        std::ceil(m / (6.0 * std::sqrt(static_cast<double>(level)))));
    for (std::size_t j = 1; j < n; j += d) {
      for (std::size_t k = j + d; k <= n; k += d) {
        const double len = static_cast<double>(k - j);
        if (len <= m) continue;
        if (len > 2.0 * m) break;
        intervals_.push_back({j, k, level});
      }
    }
  }
  // Stable on scale so the smallest level survives deduplication.
  std::stable_sort(intervals_.begin(), intervals_.end(),
                   [](const IntervalSpec& a, const IntervalSpec& b) {
                     return std::tie(a.k, a.j) < std::tie(b.k, b.j);
                   });
  intervals_.erase(std::unique(intervals_.begin(), intervals_.end(),
                               [](const IntervalSpec& a, const IntervalSpec& b) {
                                 return a.j == b.j && a.k == b.k;
                               }),
                   intervals_.end());

  right_offsets_.assign(n + 2, 0);
  for (const auto& iv : intervals_) ++right_offsets_[iv.k + 1];
  for (std::size_t i = 1; i < right_offsets_.size(); ++i) {
    right_offsets_[i] += right_offsets_[i - 1];
  }
}

std::span<const IntervalSpec> IntervalSystem::ending_at(std::size_t k) const {
  if (k > n_) return {};
  const auto begin = right_offsets_[k];
  const auto end = right_offsets_[k + 1];
  return std::span<const IntervalSpec>(intervals_).subspan(begin, end - begin);
}

std::vector<IntervalSpec> IntervalSystem::within(std::size_t j, std::size_t k) const {
  std::vector<IntervalSpec> out;
  k = std::min(k, n_);
  for (std::size_t r = j + 1; r <= k; ++r) {
    const auto group = ending_at(r);
    auto first = std::lower_bound(group.begin(), group.end(), j,
                                  [](const IntervalSpec& iv, std::size_t left) {
                                    return iv.j < left;
                                  });
    out.insert(out.end(), first, group.end());
  }
  return out;
}

std::vector<IntervalSpec> build_interval_system(std::size_t n, ScaleLog base) {
  IntervalSystem sys(n, base);
  return {sys.intervals().begin(), sys.intervals().end()};
}

std::vector<IntervalSpec> intervals_within(std::span<const IntervalSpec> system,
                                           std::size_t j, std::size_t k) {
  std::vector<IntervalSpec> out;
  std::copy_if(system.begin(), system.end(), std::back_inserter(out),
               [&](const IntervalSpec& iv) { return j <= iv.j && iv.k <= k; });
  return out;
}

}  // namespace esshist
