#include "esshist/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

#include "esshist/multiscale.hpp"

namespace esshist {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Max segment tree over positions 0..size-1 with "leftmost position whose
// value exceeds a threshold" queries.
class MaxTree {
 public:
  explicit MaxTree(std::size_t size) {
    while (leaves_ < size) leaves_ *= 2;
    value_.assign(2 * leaves_, kNegInf);
    arg_.assign(2 * leaves_, 0);
  }

  void raise(std::size_t pos, double v, std::size_t arg) {
    std::size_t node = pos + leaves_;
    if (!(v > value_[node])) return;
    value_[node] = v;
    arg_[node] = arg;
    for (node /= 2; node >= 1; node /= 2) {
      const auto l = 2 * node, r = l + 1;
      const auto best = value_[r] > value_[l] ? r : l;
      value_[node] = value_[best];
      arg_[node] = arg_[best];
    }
  }

  // Leftmost leaf with value > threshold: (position, arg, value).
  std::optional<std::tuple<std::size_t, std::size_t, double>> first_above(double threshold) const {
    if (!(value_[1] > threshold)) return std::nullopt;
    std::size_t node = 1;
    while (node < leaves_) node = value_[2 * node] > threshold ? 2 * node : 2 * node + 1;
    return std::make_tuple(node - leaves_, arg_[node], value_[node]);
  }

 private:
  std::size_t leaves_ = 1;
  std::vector<double> value_;
  std::vector<std::size_t> arg_;
};

struct Summary {
  double avg;
  double half_radius;
};

std::vector<FeatureInterval> minimal_hulls(std::vector<FeatureInterval> cands) {
  // Larger left end first, then smaller right end, then larger margin.
  std::sort(cands.begin(), cands.end(), [](const FeatureInterval& a, const FeatureInterval& b) {
    if (a.left_j != b.left_j) return a.left_j > b.left_j;
    if (a.right_k != b.right_k) return a.right_k < b.right_k;
    return a.margin > b.margin;
  });
  std::vector<FeatureInterval> out;
  std::size_t best_right = std::numeric_limits<std::size_t>::max();
  for (const auto& c : cands) {
    if (c.right_k < best_right) {
      out.push_back(c);
      best_right = c.right_k;
    }
  }
  return out;
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::kIncrease ? "increase" : "decrease"; }

double average_density(const IntervalSpec& interval, const SortedSample& sample) {
  return interval.mass(sample.size()) / sample.width(interval.j, interval.k);
}

double confidence_radius(const IntervalSpec& interval, const SortedSample& sample, double kappa) {
  const double nd = static_cast<double>(sample.size());
  const double p = interval.mass(sample.size());
  const double c = penalty(p) + kappa;
  const double width = sample.width(interval.j, interval.k);
  return 2.0 * c / width * (std::sqrt(p * (1.0 - p) / nd) + c / (2.0 * nd));
}

std::vector<FeatureInterval> significant_feature_intervals_at(const SortedSample& sample,
                                                              double kappa) {
  const IntervalSystem system(sample.size());
  const auto ivs = system.intervals();
  std::vector<Summary> sums(ivs.size());
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    sums[i] = {average_density(ivs[i], sample), 0.5 * confidence_radius(ivs[i], sample, kappa)};
  }

  // Right witnesses enter once their left end clears the left witness' right end.
  std::vector<std::size_t> by_left_desc(ivs.size()), by_right_desc(ivs.size());
  for (std::size_t i = 0; i < ivs.size(); ++i) by_left_desc[i] = by_right_desc[i] = i;
  std::sort(by_left_desc.begin(), by_left_desc.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(ivs[a].j, ivs[a].k) > std::tie(ivs[b].j, ivs[b].k);
  });
  std::sort(by_right_desc.begin(), by_right_desc.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(ivs[a].k, ivs[a].j) > std::tie(ivs[b].k, ivs[b].j);
  });

  std::vector<FeatureInterval> increases, decreases;
  MaxTree rising(sample.size() + 1), falling(sample.size() + 1);
  std::size_t next = 0;
  for (std::size_t left : by_right_desc) {
    const auto& i1 = ivs[left];
    while (next < by_left_desc.size() && ivs[by_left_desc[next]].j >= i1.k) {
      const auto idx = by_left_desc[next++];
      rising.raise(ivs[idx].k, sums[idx].avg - sums[idx].half_radius, idx);
      falling.raise(ivs[idx].k, -(sums[idx].avg + sums[idx].half_radius), idx);
    }
    const double high1 = sums[left].avg + sums[left].half_radius;
    const double low1 = sums[left].avg - sums[left].half_radius;
    if (auto hit = rising.first_above(high1)) {
      const auto [k2, right, value] = *hit;
      increases.push_back({i1.j, k2, sample.at(i1.j), sample.at(k2), Direction::kIncrease,
                           value - high1, i1, ivs[right]});
    }
    if (auto hit = falling.first_above(-low1)) {
      const auto [k2, right, value] = *hit;
      decreases.push_back({i1.j, k2, sample.at(i1.j), sample.at(k2), Direction::kDecrease,
                           value + low1, i1, ivs[right]});
    }
  }

  auto out = minimal_hulls(std::move(increases));
  auto dec = minimal_hulls(std::move(decreases));
  out.insert(out.end(), dec.begin(), dec.end());
  std::sort(out.begin(), out.end(), [](const FeatureInterval& a, const FeatureInterval& b) {
    return std::tie(a.left_j, a.right_k, a.direction) < std::tie(b.left_j, b.right_k, b.direction);
  });
  return out;
}

std::vector<FeatureInterval> significant_feature_intervals(const SortedSample& sample,
                                                           double alpha,
                                                           const QuantileTable& table) {
  if (IntervalSystem(sample.size()).empty()) return {};
  return significant_feature_intervals_at(sample, lookup_kappa(table, alpha, sample.size()));
}

std::pair<int, int> lower_bound_modes(const std::vector<FeatureInterval>& features) {
  std::vector<const FeatureInterval*> order;
  order.reserve(features.size());
  for (const auto& f : features) order.push_back(&f);
  std::sort(order.begin(), order.end(), [](const FeatureInterval* a, const FeatureInterval* b) {
    return std::tie(a->right_k, a->left_j, a->direction) <
           std::tie(b->right_k, b->left_j, b->direction);
  });
  // Earliest-right-end greedy is optimal once the first direction is fixed.
  int modes = 0, troughs = 0;
  for (const Direction first : {Direction::kIncrease, Direction::kDecrease}) {
    Direction want = first;
    std::size_t last_right = 0;
    int length = 0;
    for (const auto* f : order) {
      if (f->direction == want && f->left_j >= last_right) {
        ++length;
        last_right = f->right_k;
        want = want == Direction::kIncrease ? Direction::kDecrease : Direction::kIncrease;
      }
    }
    const int ups = first == Direction::kIncrease ? length / 2 : (length - 1) / 2;
    const int downs = first == Direction::kIncrease ? (length - 1) / 2 : length / 2;
    modes = std::max(modes, ups);
    troughs = std::max(troughs, downs);
  }
  return {modes, troughs};
}

}  // namespace esshist
