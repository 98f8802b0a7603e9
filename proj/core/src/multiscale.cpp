#include "esshist/multiscale.hpp"

#include <algorithm>
#include <limits>

namespace esshist {
namespace {

double xlogy_ratio(double x, double y) {
  // x log(x / y) with 0 log 0 = 0.
  return x == 0.0 ? 0.0 : x * (std::log(x) - std::log(y));
}

}  // namespace

double log_likelihood_ratio(double p_hat, double p0, std::size_t n) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("log_likelihood_ratio: p0 must lie in (0,1)");
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
    throw DomainError("log_likelihood_ratio: p_hat must lie in [0,1]");
  }
  const double value =
      static_cast<double>(n) * (xlogy_ratio(p_hat, p0) + xlogy_ratio(1.0 - p_hat, 1.0 - p0));
  return std::max(0.0, value);
}

double penalty(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("penalty: mass must lie in (0,1)");
  return std::sqrt(2.0 * (1.0 - std::log(p * (1.0 - p))));
}

double local_statistic(const IntervalSpec& interval, double mu, const SortedSample& sample) {
  const std::size_t n = sample.size();
  const double q = mu * sample.width(interval.j, interval.k);
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("local_statistic: candidate mass mu*|I| outside (0,1)");
  }
  const double p_hat = interval.mass(n);
  return std::sqrt(2.0 * log_likelihood_ratio(p_hat, q, n)) - penalty(p_hat);
}

PenaltyTable::PenaltyTable(std::size_t n) : n_(n), mass_(n + 1), penalty_(n + 1), entropy_(n + 1) {
  const double nd = static_cast<double>(n);
  for (std::size_t c = 0; c <= n; ++c) {
    const double p = static_cast<double>(c) / nd;
    mass_[c] = p;
    penalty_[c] =
        (c == 0 || c == n) ? std::numeric_limits<double>::infinity() : esshist::penalty(p);
    const double a = p == 0.0 ? 0.0 : p * std::log(p);
    const double b = p == 1.0 ? 0.0 : (1.0 - p) * std::log1p(-p);
    entropy_[c] = nd * (a + b);
  }
}

double multiscale_statistic(const IntervalSystem& system, const PenaltyTable& penalties,
                            std::span<const double> cdf_at) {
  if (system.empty()) {
    throw CalibrationError("interval system is empty: sample too small for multiscale calibration");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& iv : system.intervals()) {
    const std::size_t c = iv.count();
    const double pen = penalties.penalty(c);
    // sqrt(2L) - pen > best  <=>  2L > (best + pen)^2 when best + pen >= 0.
    const double bar = best + pen;
    const double q = cdf_at[iv.k - 1] - cdf_at[iv.j - 1];
    double two_l;
    if (!(q > 0.0 && q < 1.0)) {
      two_l = std::numeric_limits<double>::infinity();
    } else {
      two_l = 2.0 * std::max(0.0, penalties.log_lr(c, q));
    }
    if (bar >= 0.0 && two_l <= bar * bar) continue;
    best = std::max(best, std::sqrt(two_l) - pen);
  }
  return best;
}

}  // namespace esshist
