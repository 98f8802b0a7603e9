#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace esshist {
namespace {

using testing::table_for;

TEST(ModeCount, Definition) {
  const auto mc = count_modes({1, 3, 2, 4, 1});
  EXPECT_EQ(mc.modes, 2);
  EXPECT_EQ(mc.troughs, 1);
  EXPECT_EQ(count_modes({2}).modes, 1);
  EXPECT_EQ(count_modes({1, 2, 3}).modes, 1);
  EXPECT_EQ(count_modes({1, 2, 2, 1}).modes, 1);
  EXPECT_EQ(count_modes({1, 0, 1}).troughs, 1);
}

TEST(ModeCount, ModesAndTroughsAlternate) {
  std::mt19937_64 eng(8);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> h(1 + eng() % 12);
    for (auto& v : h) v = static_cast<double>(eng() % 5);
    const auto mc = count_modes(h);
    EXPECT_LE(std::abs(mc.modes - mc.troughs), 1);
  }
}

HistogramModel step_truth_histogram() {
  HistogramModel h;
  h.breaks = {0.0, 0.5, 1.0};
  h.heights = {1.5, 0.5};
  return h;
}

TEST(Metrics, TruthOwnHistogramHasZeroLoss) {
  const auto truth = density_by_name("step");
  const auto h = step_truth_histogram();
  EXPECT_NEAR(integrated_squared_error(h, truth), 0.0, 1e-12);
  EXPECT_NEAR(kolmogorov_distance(h, truth), 0.0, 1e-12);
  for (double p : default_p_grid()) EXPECT_NEAR(standardized_error(truth, h, p), 0.0, 1e-9);
  EXPECT_EQ(population_histogram(truth, 0.0, 1.0, 2), h);
}

TEST(Metrics, IseAndKolmogorovMatchFineGrid) {
  for (const std::string name : {"claw", "exponential", "mix_uniform", "cauchy"}) {
    const auto truth = density_by_name(name);
    const auto s = truth.sample(3, 800);
    const auto h = essential_histogram(s, 0.3, table_for(800));
    // Inside the support on a fine grid, plus the truth's mass outside it.
    const int m = 400000;
    const double a = h.breaks.front(), b = h.breaks.back();
    double inside = 0.0, ks = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = a + (b - a) * (i + 0.5) / m;
      const double d = truth.pdf(x) - h.density(x);
      inside += d * d * (b - a) / m;
      ks = std::max(ks, std::abs(truth.cdf(x) - h.cdf(x)));
    }
    ks = std::max({ks, truth.cdf(a), 1.0 - truth.cdf(b)});
    // Outside: integral of f^2, by fine grids on both tails.
    double outside = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double lo = side == 0 ? truth.quantile(1e-12) : b;
      const double hi = side == 0 ? a : truth.quantile(1.0 - 1e-12);
      if (!(hi > lo)) continue;
      // Log-spaced for the heavy tail.
      const int k = 400000;
      for (int i = 0; i < k; ++i) {
        const double x0 = lo + (hi - lo) * i / k, x1 = lo + (hi - lo) * (i + 1) / k;
        const double f = truth.pdf(0.5 * (x0 + x1));
        outside += f * f * (x1 - x0);
      }
    }
    const double ise = integrated_squared_error(h, truth);
    EXPECT_NEAR(ise, inside + outside, 2e-4 * std::max(1.0, ise)) << name;
    EXPECT_NEAR(kolmogorov_distance(h, truth), ks, 1e-5) << name;
    EXPECT_GE(kolmogorov_distance(h, truth), ks - 1e-12) << name;
  }
}

TEST(Metrics, HistogramSkewnessMatchesNumericalMoments) {
  const auto s = density_by_name("exponential").sample(4, 600);
  const auto h = classical_histogram(s, ClassicalRule::kSturges);
  double m0 = 0, m1 = 0;
  const int m = 200000;
  const double a = h.breaks.front(), b = h.breaks.back(), dx = (b - a) / m;
  for (int i = 0; i < m; ++i) {
    const double x = a + (i + 0.5) * dx;
    m0 += h.density(x) * dx;
    m1 += x * h.density(x) * dx;
  }
  const double mean = m1 / m0;
  double c2 = 0, c3 = 0;
  for (int i = 0; i < m; ++i) {
    const double x = a + (i + 0.5) * dx;
    c2 += std::pow(x - mean, 2) * h.density(x) * dx;
    c3 += std::pow(x - mean, 3) * h.density(x) * dx;
  }
  EXPECT_NEAR(histogram_skewness(h), (c3 / m0) / std::pow(c2 / m0, 1.5), 1e-3);
  EXPECT_GT(histogram_skewness(h), 1.0);
}

TEST(Metrics, StandardizedErrorAgainstDirectScan) {
  const auto truth = density_by_name("bimodal");
  const auto s = truth.sample(9, 1000);
  const auto h = classical_histogram(s, ClassicalRule::kSturges);
  for (double p : default_p_grid()) {
    double best = 0.0;
    const int grid = 2048;
    for (int g = 0; g < grid; ++g) {
      const double lo = (1.0 - p) * g / (grid - 1);
      const double x0 = g == 0 ? -INFINITY : truth.quantile(lo);
      const double x1 = lo + p >= 1.0 ? INFINITY : truth.quantile(lo + p);
      const double hm = (std::isinf(x1) ? 1.0 : h.cdf(x1)) - (std::isinf(x0) ? 0.0 : h.cdf(x0));
      best = std::max(best, std::abs(hm - p) / std::sqrt(p * (1 - p)));
    }
    EXPECT_NEAR(standardized_error(truth, h, p), best, 1e-9);
    EXPECT_GT(best, 0.0);
  }
}

TEST(Metrics, MetricSetFields) {
  const auto truth = density_by_name("claw");
  const auto s = truth.sample(1, 500);
  const auto h = essential_histogram(s, 0.5, table_for(500));
  const auto m = metrics(h, truth);
  EXPECT_EQ(m.n_bins, h.bins());
  EXPECT_EQ(m.modes, count_modes(h.heights).modes);
  EXPECT_EQ(m.troughs, count_modes(h.heights).troughs);
  EXPECT_GE(m.ise, 0.0);
  EXPECT_GE(m.kolmogorov, 0.0);
  ASSERT_EQ(m.dp.size(), default_p_grid().size());
  for (const auto& [p, d] : m.dp) EXPECT_GE(d, 0.0);
}

TEST(Proposition1, BoundHoldsForOddBinCounts) {
  for (std::size_t k : {3, 5, 9, 17, 33, 101}) {
    const auto b = proposition1_check(k);
    const double p = 1.0 / (4.0 * k);
    EXPECT_DOUBLE_EQ(b.p, p);
    EXPECT_NEAR(b.middle_height, 1.0, 1e-12);
    // Interval [1/2, 1/2 + 1/(2k)): F mass p, histogram mass 2p.
    EXPECT_NEAR(b.lhs, p / std::sqrt(p * (1 - p)), 1e-12);
    EXPECT_GE(b.lhs, b.rhs);
    for (double n : {10.0, 1000.0, 1e6}) {
      const auto bn = proposition1_check(k, n);
      EXPECT_GE(bn.lhs, bn.rhs);
      EXPECT_NEAR(bn.lhs / std::sqrt(n), b.lhs, 1e-12);
    }
  }
  EXPECT_THROW(proposition1_check(4), DomainError);
  EXPECT_THROW(proposition1_check(1), DomainError);
}

// Exact sup over intervals [x, y] with F([x, y]) = p of |H - F| for the step
// truth on [0, 1]: the sup is attained when an endpoint sits on a kink of F
// or H, so checking those placements suffices.
double exact_standardized_error(const HistogramModel& h, double p) {
  auto F = [](double x) { return x <= 0 ? 0.0 : x < 0.5 ? 1.5 * x : x < 1 ? 0.75 + 0.5 * (x - 0.5) : 1.0; };
  auto Finv = [](double m) { return m <= 0.75 ? m / 1.5 : 0.5 + (m - 0.75) / 0.5; };
  std::vector<double> kinks(h.breaks.begin(), h.breaks.end());
  kinks.push_back(0.5);
  double best = 0.0;
  for (double b : kinks) {
    for (double left_mass : {F(b), F(b) - p}) {
      if (left_mass < 0.0 || left_mass + p > 1.0) continue;
      const double x = Finv(left_mass), y = Finv(left_mass + p);
      best = std::max(best, std::abs(h.cdf(y) - h.cdf(x) - p));
    }
  }
  return best / std::sqrt(p * (1.0 - p));
}

TEST(Proposition1, ExactSupremumIsAtLeastTheBound) {
  const auto truth = density_by_name("step");
  for (std::size_t k : {5, 9, 17}) {
    const auto h = population_histogram(truth, 0.0, 1.0, k);
    const auto b = proposition1_check(k);
    const double sup = exact_standardized_error(h, b.p);
    EXPECT_GE(sup, b.lhs - 1e-12);
    EXPECT_GE(sup, b.rhs);
    // The grid scan approaches the exact value from below.
    const double scan = standardized_error(truth, h, b.p, 1 << 16);
    EXPECT_LE(scan, sup + 1e-12);
    EXPECT_GT(scan, sup - 1e-3);
  }
}

TEST(Classical, BinCounts) {
  EXPECT_EQ(classical_bin_count(density_by_name("uniform").sample(1, 100), ClassicalRule::kSturges),
            8u);
  EXPECT_NEAR(kScottConstant * 1.0 * std::pow(1000.0, -1.0 / 3.0), 0.349, 1e-12);
  const auto s = density_by_name("bimodal").sample(2, 1000);
  double mean = 0, ss = 0;
  for (double x : s.values()) mean += x;
  mean /= 1000;
  for (double x : s.values()) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 999);
  const double width = 3.49 * sd * std::pow(1000.0, -1.0 / 3.0);
  const auto k = static_cast<std::size_t>(std::ceil((s.back() - s.front()) / width));
  EXPECT_EQ(classical_bin_count(s, ClassicalRule::kScottWidth), k);
  EXPECT_EQ(classical_bin_count(s, ClassicalRule::kScottArea), k);
}

TEST(Classical, ShapesOfTheThreeRules) {
  const auto s = density_by_name("claw").sample(3, 1000);
  const auto sturges = classical_histogram(s, ClassicalRule::kSturges);
  EXPECT_EQ(sturges.bins(), 11u);
  EXPECT_NEAR(sturges.total_mass(), 1.0, 1e-12);
  const double w = (s.back() - s.front()) / 11.0;
  for (std::size_t b = 0; b < sturges.bins(); ++b) {
    EXPECT_NEAR(sturges.breaks[b + 1] - sturges.breaks[b], w, 1e-9);
  }
  const auto area = classical_histogram(s, ClassicalRule::kScottArea);
  const auto k = classical_bin_count(s, ClassicalRule::kScottArea);
  EXPECT_EQ(area.bins(), k);
  std::size_t total = 0;
  for (auto c : area.counts) {
    EXPECT_LE(std::abs(double(c) - 1000.0 / k), 1.0 + 1e-9);
    total += c;
  }
  EXPECT_EQ(total, 1000u);
  EXPECT_NEAR(area.total_mass(), 1.0, 1e-12);
}

TEST(Classical, EmptyBinsAreMerged) {
  std::vector<double> x;
  for (int i = 0; i < 500; ++i) x.push_back(i / 500.0);
  for (int i = 0; i < 500; ++i) x.push_back(100.0 + i / 500.0);
  const SortedSample s(x);
  const auto k = classical_bin_count(s, ClassicalRule::kScottWidth);
  ASSERT_GE(k, 4u);
  const auto h = classical_histogram(s, ClassicalRule::kScottWidth);
  EXPECT_EQ(h.bins(), 3u);
  EXPECT_EQ(h.heights[1], 0.0);
  EXPECT_NEAR(h.total_mass(), 1.0, 1e-12);
}

TEST(Classical, RuleNames) {
  for (auto r : {ClassicalRule::kSturges, ClassicalRule::kScottWidth, ClassicalRule::kScottArea}) {
    EXPECT_EQ(parse_classical_rule(to_string(r)), r);
  }
  EXPECT_THROW(parse_classical_rule("freedman"), DataError);
}

}  // namespace
}  // namespace esshist
