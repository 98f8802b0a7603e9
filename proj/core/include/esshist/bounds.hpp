#pragma once

#include <cstddef>
#include <vector>

#include "esshist/intervals.hpp"
#include "esshist/sample.hpp"

namespace esshist {

/// Relative slack applied when testing a density against a band, so that
/// values sitting on a root do not flap between feasible and infeasible.
inline constexpr double kBandSlack = 1e-9;

/// Constant densities mu on an interval I that pass its local constraint
/// sqrt(2 logLR(F_n(I), mu |I|)) - penalty(F_n(I)) <= kappa.
struct FeasibleBand {
  IntervalSpec interval;
  double lower = 0.0;
  double upper = 0.0;
  bool empty = false;  // kappa <= -penalty(F_n(I)): nothing passes

  bool admits(double mu) const {
    return !empty && mu >= lower * (1.0 - kBandSlack) && mu <= upper * (1.0 + kBandSlack);
  }
};

/// Roots in mass q of 2 logLR(p_hat, q, n) = (penalty(p_hat) + kappa)^2 on
/// either side of p_hat = count / n. Both are nullopt-free: `empty` marks
/// the kappa <= -penalty case.
struct MassRoots {
  double lower = 0.0;
  double upper = 0.0;
  bool empty = false;
};

MassRoots constraint_mass_roots(std::size_t count, std::size_t n, double kappa);

FeasibleBand constraint_interval(const IntervalSpec& interval, const SortedSample& sample,
                                 double kappa);

/// Bands for every interval of `system` (aligned with system.intervals()).
/// Roots depend on the count only, so they are solved once per distinct count.
std::vector<FeasibleBand> compute_bands(const IntervalSystem& system, const SortedSample& sample,
                                        double kappa);

}  // namespace esshist
