#pragma once

#include <string>

#include "esshist/histogram.hpp"
#include "esshist/sample.hpp"

namespace esshist {

enum class ClassicalRule { kSturges, kScottWidth, kScottArea };

inline constexpr double kScottConstant = 3.49;

/// Bin count for the rule: ceil(log2 n) + 1 for Sturges, ceil(range / h)
/// with h = 3.49 s n^(-1/3) for both Scott variants.
std::size_t classical_bin_count(const SortedSample& sample, ClassicalRule rule);

/// Equal-width bins over [X_(1), X_(n)] (Sturges, Scott width) or bins with
/// equal counts at empirical quantiles (Scott area). Adjacent bins of equal
/// height, in particular runs of empty bins, are merged.
HistogramModel classical_histogram(const SortedSample& sample, ClassicalRule rule);

ClassicalRule parse_classical_rule(const std::string& name);
const char* to_string(ClassicalRule rule);

}  // namespace esshist
