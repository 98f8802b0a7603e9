#include "esshist/bounds.hpp"

#include <cmath>
#include <unordered_map>

#include "esshist/multiscale.hpp"
#include "esshist/roots.hpp"

namespace esshist {
namespace {

constexpr double kMassTol = 1e-14;

}  // namespace

MassRoots constraint_mass_roots(std::size_t count, std::size_t n, double kappa) {
  const double p_hat = static_cast<double>(count) / static_cast<double>(n);
  const double c = penalty(p_hat) + kappa;
  if (!(c > 0.0)) return {0.0, 0.0, true};
  const double target = c * c;
  auto g = [&](double q) { return 2.0 * log_likelihood_ratio(p_hat, q, n) - target; };

  // g(p_hat) = -target < 0 and g -> +inf at both ends of (0,1): step outward
  // geometrically to a finite positive bracket end.
  double lo_in = p_hat, lo_out = 0.5 * p_hat;
  double g_lo_out = g(lo_out);
  while (g_lo_out <= 0.0 && lo_out > 1e-300) {
    lo_in = lo_out;
    lo_out *= 0.5;
    g_lo_out = g(lo_out);
  }
  const double lower = g_lo_out <= 0.0
                           ? lo_out
                           : bracketed_root(g, lo_out, lo_in, g_lo_out, g(lo_in), kMassTol * lo_in);

  double up_in = p_hat, gap = 0.5 * (1.0 - p_hat);
  double up_out = 1.0 - gap;
  double g_up_out = g(up_out);
  while (g_up_out <= 0.0 && 1.0 - 0.5 * gap < 1.0) {
    up_in = up_out;
    gap *= 0.5;
    up_out = 1.0 - gap;
    g_up_out = g(up_out);
  }
  const double upper = g_up_out <= 0.0
                           ? up_out
                           : bracketed_root(g, up_in, up_out, g(up_in), g_up_out, kMassTol);
  return {lower, upper, false};
}

FeasibleBand constraint_interval(const IntervalSpec& interval, const SortedSample& sample,
                                 double kappa) {
  const auto roots = constraint_mass_roots(interval.count(), sample.size(), kappa);
  FeasibleBand band{interval, 0.0, 0.0, roots.empty};
  if (!roots.empty) {
    const double width = sample.width(interval.j, interval.k);
    band.lower = roots.lower / width;
    band.upper = roots.upper / width;
  }
  return band;
}

std::vector<FeasibleBand> compute_bands(const IntervalSystem& system, const SortedSample& sample,
                                        double kappa) {
  std::unordered_map<std::size_t, MassRoots> by_count;
  std::vector<FeasibleBand> bands;
  bands.reserve(system.size());
  for (const auto& iv : system.intervals()) {
    auto it = by_count.find(iv.count());
    if (it == by_count.end()) {
      it = by_count.emplace(iv.count(), constraint_mass_roots(iv.count(), sample.size(), kappa))
               .first;
    }
    const auto& roots = it->second;
    FeasibleBand band{iv, 0.0, 0.0, roots.empty};
    if (!roots.empty) {
      const double width = sample.width(iv.j, iv.k);
      band.lower = roots.lower / width;
      band.upper = roots.upper / width;
    }
    bands.push_back(band);
  }
  return bands;
}

}  // namespace esshist
