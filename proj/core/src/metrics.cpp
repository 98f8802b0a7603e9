#include "esshist/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "esshist/errors.hpp"

namespace esshist {

ModeCount count_modes(const std::vector<double>& heights) {
  std::vector<double> c;
  for (double h : heights) {
    if (c.empty() || c.back() != h) c.push_back(h);
  }
  ModeCount out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double left = k == 0 ? 0.0 : c[k - 1];
    const double right = k + 1 == c.size() ? 0.0 : c[k + 1];
    if (c[k] > std::max(left, right)) ++out.modes;
    if (c[k] < std::min(left, right)) ++out.troughs;
  }
  return out;
}

double histogram_skewness(const HistogramModel& h) {
  const double mass = h.total_mass();
  double mean = 0.0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    const double a = h.breaks[b], z = h.breaks[b + 1];
    mean += h.heights[b] * (z * z - a * a) / 2.0;
  }
  mean /= mass;
  // Central moments of a uniform piece via shifted endpoints.
  double m2 = 0.0, m3 = 0.0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    const double a = h.breaks[b] - mean, z = h.breaks[b + 1] - mean;
    m2 += h.heights[b] * (std::pow(z, 3) - std::pow(a, 3)) / 3.0;
    m3 += h.heights[b] * (std::pow(z, 4) - std::pow(a, 4)) / 4.0;
  }
  m2 /= mass;
  m3 /= mass;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

double integrated_squared_error(const HistogramModel& h, const ReferenceDensity& truth) {
  // int (f - h)^2 = int f^2 - 2 sum_b h_b F(bin b) + sum_b h_b^2 w_b.
  double cross = 0.0, own = 0.0;
  for (std::size_t b = 0; b < h.bins(); ++b) {
    const double a = h.breaks[b], z = h.breaks[b + 1];
    cross += h.heights[b] * (truth.cdf(z) - truth.cdf(a));
    own += h.heights[b] * h.heights[b] * (z - a);
  }
  return std::max(0.0, truth.squared_norm() - 2.0 * cross + own);
}

double kolmogorov_distance(const HistogramModel& h, const ReferenceDensity& truth) {
  constexpr int kPerBin = 128;
  double best = std::max(truth.cdf(h.breaks.front()), 1.0 - truth.cdf(h.breaks.back()));
  double below = 0.0;  // H at the left end of the current bin
  for (std::size_t b = 0; b < h.bins(); ++b) {
    const double a = h.breaks[b], z = h.breaks[b + 1], height = h.heights[b];
    auto gap = [&](double x) { return std::abs(truth.cdf(x) - (below + height * (x - a))); };
    double arg = a, top = gap(a);
    for (int g = 1; g <= kPerBin; ++g) {
      const double x = a + (z - a) * g / kPerBin;
      const double v = gap(x);
      if (v > top) {
        top = v;
        arg = x;
      }
    }
    // Refine around the best grid point.
    const double step = (z - a) / kPerBin;
    const double lo = std::max(a, arg - step), hi = std::min(z, arg + step);
    const auto [x, neg] = boost::math::tools::brent_find_minima(
        [&](double x) { return -gap(x); }, lo, hi, 40);
    best = std::max({best, top, -neg});
    below += height * (z - a);
  }
  return best;
}

std::vector<double> default_p_grid() { return {0.01, 0.05, 0.1, 0.25}; }

double standardized_error(const ReferenceDensity& truth, const HistogramModel& h, double p,
                          std::size_t grid) {
  return standardized_error(truth, [&](double x) { return h.cdf(x); }, p, grid);
}

MetricSet metrics(const HistogramModel& fit, const ReferenceDensity& truth,
                  const std::vector<double>& p_grid) {
  MetricSet m;
  m.n_bins = fit.bins();
  const auto mc = count_modes(fit.heights);
  m.modes = mc.modes;
  m.troughs = mc.troughs;
  m.ise = integrated_squared_error(fit, truth);
  m.kolmogorov = kolmogorov_distance(fit, truth);
  m.skewness = histogram_skewness(fit);
  for (double p : p_grid) m.dp.emplace_back(p, standardized_error(truth, fit, p));
  return m;
}

HistogramModel population_histogram(const ReferenceDensity& truth, double lo, double hi,
                                    std::size_t k) {
  HistogramModel h;
  for (std::size_t b = 0; b <= k; ++b) {
    h.breaks.push_back(b == k ? hi : lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(k));
  }
  for (std::size_t b = 0; b < k; ++b) {
    const double a = h.breaks[b], z = h.breaks[b + 1];
    h.heights.push_back((truth.cdf(z) - truth.cdf(a)) / (z - a));
  }
  return h;
}

Proposition1Bound proposition1_check(std::size_t k, double n) {
  if (k < 3 || k % 2 == 0) throw DomainError("proposition1_check: k must be odd and >= 3");
  const auto truth = density_by_name("step");
  const auto hist = population_histogram(truth, 0.0, 1.0, k);
  const double kd = static_cast<double>(k);
  Proposition1Bound out;
  out.p = 1.0 / (4.0 * kd);
  out.middle_height = hist.heights[(k - 1) / 2];
  double left, right;
  if (out.middle_height <= 0.75) {
    left = 0.5 - 1.0 / (6.0 * kd);
    right = 0.5;
  } else {
    left = 0.5;
    right = 0.5 + 1.0 / (2.0 * kd);
  }
  const double f_mass = truth.cdf(right) - truth.cdf(left);
  const double h_mass = hist.cdf(right) - hist.cdf(left);
  const double d = std::abs(f_mass - h_mass) / std::sqrt(f_mass * (1.0 - f_mass));
  out.lhs = std::sqrt(n) * d;
  out.rhs = 0.5 * std::sqrt(n * out.p);
  return out;
}

}  // namespace esshist
