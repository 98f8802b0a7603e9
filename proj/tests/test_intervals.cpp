#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace esshist {
namespace {

using testing::oracle_system;

TEST(Intervals, TooSmallIsEmpty) {
  EXPECT_EQ(max_scale(4), 1);
  EXPECT_TRUE(build_interval_system(4).empty());
  EXPECT_TRUE(build_interval_system(8).empty());
  EXPECT_FALSE(build_interval_system(9).empty());
}

TEST(Intervals, SixteenHasAllPairsOfLengthFiveToEight) {
  const auto sys = build_interval_system(16);
  ASSERT_EQ(sys.size(), 38u);
  for (const auto& iv : sys) {
    EXPECT_GT(iv.count(), 4u);
    EXPECT_LE(iv.count(), 8u);
    EXPECT_EQ(iv.scale, 2);
  }
}

TEST(Intervals, MatchesDirectEnumeration) {
  for (std::size_t n : {9, 16, 37, 100, 257, 1000, 3001}) {
    const auto sys = build_interval_system(n);
    const auto expect = oracle_system(n);
    ASSERT_EQ(sys.size(), expect.size()) << "n=" << n;
    for (std::size_t i = 0; i < sys.size(); ++i) {
      EXPECT_EQ(sys[i].j, expect[i].j);
      EXPECT_EQ(sys[i].k, expect[i].k);
      EXPECT_EQ(sys[i].scale, expect[i].scale);
    }
  }
}

TEST(Intervals, HundredUsesScalesTwoToFour) {
  const auto sys = build_interval_system(100);
  std::set<int> scales;
  for (const auto& iv : sys) {
    scales.insert(iv.scale);
    const double m = 100.0 * std::pow(2.0, -iv.scale);
    const auto d = static_cast<std::size_t>(std::ceil(m / (6.0 * std::sqrt(iv.scale))));
    EXPECT_EQ((iv.j - 1) % d, 0u);
    EXPECT_EQ((iv.k - 1) % d, 0u);
    EXPECT_GT(static_cast<double>(iv.count()), m);
    EXPECT_LE(static_cast<double>(iv.count()), 2 * m);
  }
  EXPECT_EQ(scales, (std::set<int>{2, 3, 4}));
}

TEST(Intervals, BinaryLogShrinksTopScaleByAtMostOne) {
  for (std::size_t n : {16, 100, 1000, 10000, 100000}) {
    const int nat = max_scale(n, ScaleLog::kNatural);
    const int bin = max_scale(n, ScaleLog::kBinary);
    EXPECT_LE(bin, nat);
    EXPECT_GE(bin, nat - 1);
  }
}

TEST(Intervals, SizeAndMassBounds) {
  for (std::size_t n : {10, 50, 500, 5000, 100000}) {
    const IntervalSystem sys(n);
    EXPECT_LE(sys.size(), 40 * n);
    for (const auto& iv : sys.intervals()) {
      EXPECT_LE(iv.mass(n), 0.75);
      EXPECT_GT(iv.mass(n), 0.0);
      EXPECT_GE(iv.j, 1u);
      EXPECT_LE(iv.k, n);
    }
  }
}

TEST(Intervals, Deterministic) {
  EXPECT_EQ(build_interval_system(777), build_interval_system(777));
}

TEST(Intervals, SortedAndUnique) {
  const auto sys = build_interval_system(2000);
  for (std::size_t i = 1; i < sys.size(); ++i) {
    EXPECT_TRUE(std::tie(sys[i - 1].k, sys[i - 1].j) < std::tie(sys[i].k, sys[i].j));
  }
}

TEST(Intervals, EndingAtIndex) {
  const IntervalSystem sys(300);
  std::size_t total = 0;
  for (std::size_t k = 0; k <= 300; ++k) {
    for (const auto& iv : sys.ending_at(k)) EXPECT_EQ(iv.k, k);
    total += sys.ending_at(k).size();
    if (!sys.ending_at(k).empty()) EXPECT_EQ(sys.intervals()[sys.first_ending_at(k)].k, k);
  }
  EXPECT_EQ(total, sys.size());
}

TEST(IntervalsWithin, WholeRangeAndNarrowQueries) {
  const auto sys = build_interval_system(16);
  EXPECT_EQ(intervals_within(sys, 0, 16), sys);
  EXPECT_EQ(intervals_within(sys, 1, 16), sys);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_TRUE(intervals_within(sys, j, j + 1).empty());
}

TEST(IntervalsWithin, MatchesFilterOnSixteen) {
  const auto sys = build_interval_system(16);
  const auto got = intervals_within(sys, 1, 10);
  std::size_t expect = 0;
  for (std::size_t j = 1; j <= 10; ++j) {
    for (std::size_t k = j + 1; k <= 10; ++k) {
      if (k - j > 4 && k - j <= 8) ++expect;
    }
  }
  EXPECT_EQ(expect, 14u);
  EXPECT_EQ(got.size(), expect);
}

TEST(IntervalsWithin, MemberFormAgreesAndIsMonotone) {
  const IntervalSystem sys(400);
  for (std::size_t j : {0, 1, 17, 120}) {
    for (std::size_t k : {150, 260, 400}) {
      const auto a = sys.within(j, k);
      EXPECT_EQ(a, intervals_within(sys.intervals(), j, k));
      for (const auto& iv : a) {
        EXPECT_GE(iv.j, j);
        EXPECT_LE(iv.k, k);
      }
      if (k < 400) {
        const auto wider = sys.within(j, k + 40);
        for (const auto& iv : a) {
          EXPECT_NE(std::find(wider.begin(), wider.end(), iv), wider.end());
        }
      }
    }
  }
}

}  // namespace
}  // namespace esshist
