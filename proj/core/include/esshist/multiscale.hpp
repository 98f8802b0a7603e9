#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "esshist/errors.hpp"
#include "esshist/intervals.hpp"
#include "esshist/sample.hpp"

namespace esshist {

/// Binomial log-likelihood ratio for testing mass p0 when the observed
/// fraction is p_hat, out of n trials:
///   n [p_hat log(p_hat/p0) + (1-p_hat) log((1-p_hat)/(1-p0))].
/// Total on [0,1] x (0,1) with 0 log 0 = 0. Throws DomainError otherwise.
double log_likelihood_ratio(double p_hat, double p0, std::size_t n);

/// Scale penalty sqrt(2 log(e / (p (1-p)))) for p in (0,1).
double penalty(double p);

/// sqrt(2 logLR(F_n(I), mu |I|)) - penalty(F_n(I)): the per-interval term of
/// the multiscale statistic for a constant density mu on I. Throws
/// DomainError when mu |I| is not in (0,1).
double local_statistic(const IntervalSpec& interval, double mu, const SortedSample& sample);

/// Per-count cache of p_hat, log terms and penalty for a fixed n.
class PenaltyTable {
 public:
  explicit PenaltyTable(std::size_t n);

  std::size_t n() const { return n_; }
  double mass(std::size_t count) const { return mass_[count]; }
  double penalty(std::size_t count) const { return penalty_[count]; }
  /// n * [p log p + (1-p) log(1-p)] for p = count / n.
  double entropy_term(std::size_t count) const { return entropy_[count]; }

  /// logLR(count / n, q, n) using the cached entropy term.
  double log_lr(std::size_t count, double q) const {
    const double p = mass_[count];
    const double nd = static_cast<double>(n_);
    return entropy_[count] - nd * (p * std::log(q) + (1.0 - p) * std::log1p(-q));
  }

 private:
  std::size_t n_;
  std::vector<double> mass_, penalty_, entropy_;
};

/// T_n = max over I in the system of sqrt(2 logLR(F_n(I), F(I))) - penalty(F_n(I)),
/// where F(I) = cdf_at[k-1] - cdf_at[j-1] and cdf_at holds F(X_(1)) ... F(X_(n)).
/// Throws CalibrationError if the system is empty.
double multiscale_statistic(const IntervalSystem& system, const PenaltyTable& penalties,
                            std::span<const double> cdf_at);

/// Convenience form taking the true distribution as an interval -> mass callable.
template <typename TrueMass>
double multiscale_statistic(const SortedSample& sample, const IntervalSystem& system,
                            TrueMass&& true_mass) {
  if (system.empty()) {
    throw CalibrationError("interval system is empty: sample too small for multiscale calibration");
  }
  const std::size_t n = sample.size();
  double best = -INFINITY;
  for (const auto& iv : system.intervals()) {
    const double p_hat = iv.mass(n);
    const double stat =
        std::sqrt(2.0 * std::max(0.0, log_likelihood_ratio(p_hat, true_mass(iv), n))) -
        penalty(p_hat);
    best = std::max(best, stat);
  }
  return best;
}

}  // namespace esshist
