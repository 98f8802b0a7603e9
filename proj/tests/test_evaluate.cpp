#include <gtest/gtest.h>

#include "support.hpp"

namespace esshist {
namespace {

using testing::oracle_loglr;
using testing::oracle_penalty;
using testing::table_for;

bool oracle_passes(const SortedSample& s, const IntervalSpec& iv, double level, double kappa) {
  const double n = s.size();
  const double q = level * (s.at(iv.k) - s.at(iv.j));
  if (!(q > 0.0 && q < 1.0)) return false;
  const double p = iv.mass(s.size());
  return std::sqrt(2.0 * oracle_loglr(p, q, n)) - oracle_penalty(p) <= kappa;
}

// Violations by scanning every system pair against the estimator's values.
std::vector<IntervalSpec> oracle_violations(const SortedSample& s, const HistogramModel& h,
                                            double kappa) {
  std::vector<IntervalSpec> out;
  for (const auto& iv : build_interval_system(s.size())) {
    const double a = s.at(iv.j), b = s.at(iv.k);
    double level = -1.0;
    if (b <= h.breaks.front() || a >= h.breaks.back()) level = 0.0;
    for (std::size_t p = 0; p < h.bins(); ++p) {
      if (a >= h.breaks[p] && b <= h.breaks[p + 1]) level = h.heights[p];
    }
    if (level < 0.0) continue;
    if (!oracle_passes(s, iv, level, kappa)) out.push_back(iv);
  }
  return out;
}

TEST(Audit, EssentialHistogramIsClean) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 100 + 37 * seed;
    const auto s = testing::varied_sample(seed, n);
    const auto& table = table_for(n);
    for (double alpha : {0.05, 0.5}) {
      const auto fit = essential_histogram(s, alpha, table);
      const auto report = audit(s, fit, alpha, table);
      EXPECT_TRUE(report.violations.empty()) << "seed " << seed;
      EXPECT_TRUE(report.removable.empty()) << "seed " << seed;
      EXPECT_TRUE(report.clean());
    }
  }
}

TEST(Audit, SingleBinOnBimodalDataViolates) {
  const auto s = density_by_name("bimodal").sample(3, 500);
  const auto one = single_bin_histogram(s);
  const double kappa = lookup_kappa(table_for(500), 0.1, 500);
  const auto got = violation_intervals(s, one, 0.1, table_for(500));
  EXPECT_FALSE(got.empty());
  EXPECT_EQ(got, oracle_violations(s, one, kappa));
}

TEST(Audit, ViolationsMatchDirectScan) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto s = density_by_name("claw").sample(seed, 1500);
    const double kappa = lookup_kappa(table_for(1500), 0.1, 1500);
    for (auto rule : {ClassicalRule::kSturges, ClassicalRule::kScottWidth,
                      ClassicalRule::kScottArea}) {
      const auto h = classical_histogram(s, rule);
      EXPECT_EQ(violation_intervals_at(s, h, kappa), oracle_violations(s, h, kappa))
          << to_string(rule);
    }
    if (seed < 6) {
      EXPECT_FALSE(violation_intervals_at(s, classical_histogram(s, ClassicalRule::kSturges), kappa)
                       .empty());
    }
  }
}

TEST(Audit, ZeroHeightOutsideSupportIsFlagged) {
  const auto s = density_by_name("uniform").sample(2, 400);
  HistogramModel narrow;
  narrow.n = 400;
  narrow.breaks = {0.25, 0.75};
  narrow.heights = {2.0};
  const double kappa = lookup_kappa(table_for(400), 0.1, 400);
  const auto got = violation_intervals_at(s, narrow, kappa);
  ASSERT_FALSE(got.empty());
  bool outside = false;
  for (const auto& iv : got) outside = outside || s.at(iv.k) <= 0.25 || s.at(iv.j) >= 0.75;
  EXPECT_TRUE(outside);
  EXPECT_EQ(got, oracle_violations(s, narrow, kappa));
}

TEST(Audit, ViolationsMonotoneInAlpha) {
  const auto s = density_by_name("harp").sample(11, 800);
  const auto h = classical_histogram(s, ClassicalRule::kSturges);
  const auto& table = table_for(800);
  std::vector<IntervalSpec> prev;
  for (double alpha : table.alphas) {
    const auto cur = violation_intervals(s, h, alpha, table);
    for (const auto& iv : prev) EXPECT_NE(std::find(cur.begin(), cur.end(), iv), cur.end());
    prev = cur;
  }
}

TEST(Audit, TwoBinsOnUniformDataHaveRemovablePoint) {
  const auto s = density_by_name("uniform").sample(6, 500);
  const std::size_t ends[] = {250, 500};
  const auto two = histogram_from_ends(s, ends);
  ASSERT_EQ(two.bins(), 2u);
  const double kappa = lookup_kappa(table_for(500), 0.1, 500);
  const double mu = 1.0 / (s.back() - s.front());
  bool expect = true;
  for (const auto& iv : build_interval_system(500)) expect = expect && oracle_passes(s, iv, mu, kappa);
  ASSERT_TRUE(expect);
  const auto got = removable_changepoints(s, two, 0.1, table_for(500));
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].index, 1u);
  EXPECT_EQ(got[0].value, s.at(250));
  EXPECT_EQ(got[0].multiplicity, 1u);
}

TEST(Audit, MultiplicityCountsWindowedMerges) {
  const auto s = density_by_name("uniform").sample(7, 600);
  const std::size_t ends[] = {100, 200, 300, 400, 500, 600};
  const auto h = histogram_from_ends(s, ends);
  const double kappa = lookup_kappa(table_for(600), 0.1, 600);
  const auto pairwise = removable_changepoints_at(s, h, kappa, 2);
  for (const auto& r : pairwise) EXPECT_EQ(r.multiplicity, 1u);
  const auto wide = removable_changepoints_at(s, h, kappa, 5);
  ASSERT_EQ(wide.size(), pairwise.size());
  for (std::size_t i = 0; i < wide.size(); ++i) {
    EXPECT_GE(wide[i].multiplicity, 1u);
    EXPECT_GE(wide[i].multiplicity, pairwise[i].multiplicity);
    // A breakpoint m sits inside at most sum over window sizes w of min(...) merges.
    EXPECT_LE(wide[i].multiplicity, 1u + 2u + 3u + 4u);
  }
  EXPECT_THROW(removable_changepoints_at(s, h, kappa, 1), DomainError);
}

TEST(Audit, Deterministic) {
  const auto s = density_by_name("claw").sample(1, 1000);
  const auto h = classical_histogram(s, ClassicalRule::kScottArea);
  EXPECT_EQ(audit(s, h, 0.1, table_for(1000)), audit(s, h, 0.1, table_for(1000)));
}

TEST(Audit, CoverCounts) {
  const SortedSample s({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const std::vector<IntervalSpec> v = {{1, 6, 2}, {3, 9, 2}};
  const auto c = violation_cover_counts(s, v, {0.0, 0.5, 3.0, 5.0, 5.5, 8.0, 9.0});
  EXPECT_EQ(c, (std::vector<std::size_t>{0, 1, 2, 2, 1, 1, 0}));
}

}  // namespace
}  // namespace esshist
