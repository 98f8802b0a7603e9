#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "esshist/densities.hpp"
#include "esshist/histogram.hpp"

namespace esshist {

struct ModeCount {
  int modes = 0;
  int troughs = 0;
};

/// Strict local maxima / minima of a height sequence, with zero-height
/// virtual neighbours beyond both ends. Equal neighbours are merged first.
ModeCount count_modes(const std::vector<double>& heights);

/// Skewness of the distribution with the histogram as density.
double histogram_skewness(const HistogramModel& h);

/// Integrated squared error of the histogram against the truth over the real
/// line (the truth's mass outside the support counts fully).
double integrated_squared_error(const HistogramModel& h, const ReferenceDensity& truth);

/// sup_x |F(x) - H(x)|.
double kolmogorov_distance(const HistogramModel& h, const ReferenceDensity& truth);

inline constexpr std::size_t kDpGrid = 2048;
std::vector<double> default_p_grid();

/// sup over intervals I with F(I) = p of |H(I) - p| / sqrt(p (1 - p)), scanned
/// over `grid` left-end locations in mass space. `hist_cdf` is H.
template <typename HistCdf>
double standardized_error(const ReferenceDensity& truth, HistCdf&& hist_cdf, double p,
                          std::size_t grid = kDpGrid);

double standardized_error(const ReferenceDensity& truth, const HistogramModel& h, double p,
                          std::size_t grid = kDpGrid);

struct MetricSet {
  double ise = 0.0;
  double kolmogorov = 0.0;
  double skewness = 0.0;
  int modes = 0;
  int troughs = 0;
  std::size_t n_bins = 0;
  std::vector<std::pair<double, double>> dp;  // (p, d_p)
};

MetricSet metrics(const HistogramModel& fit, const ReferenceDensity& truth,
                  const std::vector<double>& p_grid = default_p_grid());

struct Proposition1Bound {
  double lhs = 0.0;  // sqrt(n) d_p(F, H_n)
  double rhs = 0.0;  // sqrt(n p) / 2
  double p = 0.0;    // 1 / (4 k)
  double middle_height = 0.0;
};

/// For the step density (3/2 on [0,1/2), 1/2 on [1/2,1]) and its population
/// histogram with k equal-width bins on [0,1] (k odd >= 3): the lower bound
/// sqrt(n) d_p >= sqrt(n p) / 2 at p = 1/(4k), with d_p evaluated on the
/// interval next to 1/2 that carries mass p.
Proposition1Bound proposition1_check(std::size_t k, double n = 1.0);

/// Population histogram of `truth` with k equal-width bins on [lo, hi].
HistogramModel population_histogram(const ReferenceDensity& truth, double lo, double hi,
                                    std::size_t k);

// ---------------------------------------------------------------------------

template <typename HistCdf>
double standardized_error(const ReferenceDensity& truth, HistCdf&& hist_cdf, double p,
                          std::size_t grid) {
  const double scale = std::sqrt(p * (1.0 - p));
  double best = 0.0;
  for (std::size_t g = 0; g < grid; ++g) {
    const double s = (1.0 - p) * static_cast<double>(g) / static_cast<double>(grid - 1);
    const double left_mass = g == 0 ? 0.0 : hist_cdf(truth.quantile(s));
    const double t = s + p;
    const double right_mass = t >= 1.0 ? 1.0 : hist_cdf(truth.quantile(t));
    best = std::max(best, std::abs(right_mass - left_mass - p) / scale);
  }
  return best;
}

}  // namespace esshist
