#include "esshist/sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "esshist/errors.hpp"
#include "esshist/rng.hpp"

namespace esshist {
namespace {

void jitter_ties(std::vector<double>& v, std::uint64_t seed) {
  auto eng = stream_engine(seed, 0);
  std::size_t run_begin = 0;
  while (run_begin < v.size()) {
    std::size_t run_end = run_begin + 1;
    while (run_end < v.size() && v[run_end] == v[run_begin]) ++run_end;
    const std::size_t run = run_end - run_begin;
    if (run > 1) {
      const double x = v[run_begin];
      double spacing;
      if (run_end < v.size()) {
        spacing = v[run_end] - x;
      } else if (run_begin > 0) {
        spacing = x - v[run_begin - 1];
      } else {
        spacing = std::max(std::abs(x), 1.0);
      }
      std::vector<double> offsets(run - 1);
      for (auto& o : offsets) o = uniform_open(eng);
      std::sort(offsets.begin(), offsets.end());
      // The first tie keeps its value; the rest move right by < 1e-9 * spacing.
      for (std::size_t r = 1; r < run; ++r) {
        v[run_begin + r] = x + offsets[r - 1] * 1e-9 * spacing;
      }
    }
    run_begin = run_end;
  }
  // Offsets can collapse below one ulp for large |x|; step to the next double.
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) {
      v[i] = std::nextafter(v[i - 1], std::numeric_limits<double>::infinity());
    }
  }
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values, TiePolicy ties,
                           std::uint64_t jitter_seed)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw DataError("sample must contain at least 2 values, got " +
                    std::to_string(values_.size()));
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw DataError("sample contains a non-finite value");
  }
  std::sort(values_.begin(), values_.end());
  const auto dup = std::adjacent_find(values_.begin(), values_.end());
  if (dup != values_.end()) {
    if (ties == TiePolicy::kReject) {
      throw DataError("sample contains duplicate value " + std::to_string(*dup) +
                      " (enable jitter to spread ties)");
    }
    jitter_ties(values_, jitter_seed);
  }
}

std::size_t SortedSample::count_at_or_below(double x) const {
  return static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
}

std::size_t SortedSample::count_below(double x) const {
  return static_cast<std::size_t>(
      std::lower_bound(values_.begin(), values_.end(), x) - values_.begin());
}

SortedSample SortedSample::affine(double scale, double shift) const {
  if (!(scale > 0.0)) throw DomainError("affine scale must be positive");
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [&](double x) { return scale * x + shift; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) throw DataError("affine map collapsed distinct values");
  }
  return SortedSample(Trusted{}, std::move(out));
}

}  // namespace esshist
