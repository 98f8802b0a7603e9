#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include <esshist/esshist.hpp>

namespace esshist::testing {

inline constexpr std::uint64_t kCalibrationSeed = 20240611;
inline constexpr std::size_t kCalibrationReps = 2000;

inline std::filesystem::path cache_dir() { return ESSHIST_TEST_CACHE_DIR; }

/// Calibrated table for n, shared across a test binary and cached on disk.
inline const QuantileTable& table_for(std::size_t n, std::size_t reps = kCalibrationReps) {
  static std::map<std::pair<std::size_t, std::size_t>, QuantileTable> tables;
  const auto key = std::make_pair(capped_size(n), reps);
  auto it = tables.find(key);
  if (it == tables.end()) {
    const QuantileCache cache(cache_dir());
    it = tables.emplace(key, cache.get_or_simulate(n, reps, kCalibrationSeed,
                                                   default_alpha_grid())).first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately avoid the library's own helpers.

inline double oracle_loglr(double p, double q, double n) {
  auto term = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); };
  return n * (term(p, q) + term(1.0 - p, 1.0 - q));
}

inline double oracle_penalty(double p) {
  return std::sqrt(2.0 * std::log(std::exp(1.0) / (p * (1.0 - p))));
}

struct OraclePair {
  std::size_t j, k;
  int scale;
};

/// Direct enumeration of all grid pairs, scale by scale.
inline std::vector<OraclePair> oracle_system(std::size_t n) {
  std::vector<OraclePair> out;
  const double nd = static_cast<double>(n);
  const int top = static_cast<int>(std::floor(std::log2(nd / std::log(nd))));
  for (int l = 2; l <= top; ++l) {
    const double m = nd * std::pow(2.0, -l);
    const auto d = static_cast<std::size_t>(std::ceil(m / (6.0 * std::sqrt(double(l)))));
    for (std::size_t j = 1; j <= n; j += d) {
      for (std::size_t k = j + d; k <= n; k += d) {
        const double len = static_cast<double>(k - j);
        if (len > m && len <= 2.0 * m) {
          const bool seen = std::any_of(out.begin(), out.end(), [&](const OraclePair& o) {
            return o.j == j && o.k == k;
          });
          if (!seen) out.push_back({j, k, l});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const OraclePair& a, const OraclePair& b) {
    return std::tie(a.k, a.j) < std::tie(b.k, b.j);
  });
  return out;
}

/// Bisection for a sign change of f on [a, b].
inline double oracle_bisect(const std::function<double(double)>& f, double a, double b) {
  const bool fa_pos = f(a) > 0.0;
  for (int it = 0; it < 400 && b - a > 0.0; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if ((f(m) > 0.0) == fa_pos) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Exhaustive segmentation oracle. Blocks are (t_{i-1}, t_i] with t_0 = 0
/// meaning the closed left edge at X_(1). A block is feasible when every
/// system pair inside it passes the local statistic test against kappa.
struct OracleFit {
  std::vector<std::size_t> ends;
  std::vector<double> breaks;
  std::vector<double> heights;
};

inline OracleFit oracle_segmentation(const std::vector<double>& x, double kappa) {
  const std::size_t n = x.size();
  const auto pairs = oracle_system(n);
  const double nd = static_cast<double>(n);
  auto X = [&](std::size_t i) { return x[i - 1]; };
  auto block = [&](std::size_t a, std::size_t b) {
    const std::size_t c = a == 0 ? b : b - a;
    const double w = X(b) - X(a == 0 ? 1 : a);
    return std::make_pair(c, w);
  };
  auto feasible = [&](std::size_t a, std::size_t b) {
    const auto [c, w] = block(a, b);
    if (!(w > 0.0)) return false;
    const double mu = static_cast<double>(c) / (nd * w);
    for (const auto& p : pairs) {
      if (p.j < std::max<std::size_t>(a, 1) || p.k > b) continue;
      const double ph = static_cast<double>(p.k - p.j) / nd;
      const double q = mu * (X(p.k) - X(p.j));
      if (!(q > 0.0 && q < 1.0)) return false;
      if (std::sqrt(2.0 * oracle_loglr(ph, q, nd)) - oracle_penalty(ph) > kappa) return false;
    }
    return true;
  };
  OracleFit best;
  std::size_t best_bins = n + 1;
  double best_cost = INFINITY;
  const std::size_t free_points = n - 2;  // candidate ends 2 .. n-1
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_points); ++mask) {
    std::vector<std::size_t> ends;
    for (std::size_t b = 0; b < free_points; ++b) {
      if (mask >> b & 1) ends.push_back(b + 2);
    }
    ends.push_back(n);
    if (ends.size() > best_bins) continue;
    bool ok = true;
    double cost = 0.0;
    std::size_t prev = 0;
    for (auto e : ends) {
      if (!feasible(prev, e)) {
        ok = false;
        break;
      }
      const auto [c, w] = block(prev, e);
      cost += -static_cast<double>(c) * std::log(static_cast<double>(c) / (nd * w));
      prev = e;
    }
    if (!ok) continue;
    const double tol = 1e-12 * std::max(1.0, std::abs(best_cost));
    const bool better = ends.size() < best_bins ||
                        (cost < best_cost - tol) ||
                        (std::abs(cost - best_cost) <= tol && ends < best.ends);
    if (better) {
      best_bins = ends.size();
      best_cost = cost;
      best.ends = ends;
    }
  }
  best.breaks = {X(1)};
  std::size_t prev = 0;
  for (auto e : best.ends) {
    const auto [c, w] = block(prev, e);
    best.breaks.push_back(X(e));
    best.heights.push_back(static_cast<double>(c) / (nd * w));
    prev = e;
  }
  return best;
}

/// Samples for property tests, cycling through a few shapes.
inline SortedSample varied_sample(std::uint64_t seed, std::size_t n) {
  static const std::vector<std::string> names = {"uniform", "claw", "exponential", "bimodal",
                                                 "mix_uniform", "harp"};
  return density_by_name(names[seed % names.size()]).sample(seed, n);
}

/// Indices i with X_(i) equal to each break value.
inline std::vector<std::size_t> break_indices(const SortedSample& s, const HistogramModel& h) {
  std::vector<std::size_t> idx;
  for (double b : h.breaks) idx.push_back(s.count_at_or_below(b));
  return idx;
}

}  // namespace esshist::testing
