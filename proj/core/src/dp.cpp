#include "esshist/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "esshist/errors.hpp"
#include "esshist/multiscale.hpp"

namespace esshist {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running intersection of bands.
struct BandMeet {
  double lo = -kInf;
  double hi = kInf;
  bool empty = false;

  void absorb(const FeasibleBand& band) {
    if (band.empty) {
      empty = true;
      return;
    }
    lo = std::max(lo, band.lower);
    hi = std::min(hi, band.upper);
  }
  // Same test as FeasibleBand::admits applied to every absorbed band.
  bool admits(double mu) const {
    return !empty && mu >= lo * (1.0 - kBandSlack) && mu <= hi * (1.0 + kBandSlack);
  }
  bool admits_nothing() const { return empty || lo * (1.0 - kBandSlack) > hi * (1.0 + kBandSlack); }
};

// Interval positions grouped by left index, ascending right index in each group.
struct LeftIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> order;

  explicit LeftIndex(const IntervalSystem& system) {
    const std::size_t n = system.sample_size();
    offsets.assign(n + 2, 0);
    for (const auto& iv : system.intervals()) ++offsets[iv.j + 1];
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
    order.resize(system.size());
    auto fill = offsets;
    // intervals() is sorted by (k, j), so each group comes out ascending in k.
    for (std::size_t idx = 0; idx < system.size(); ++idx) order[fill[system[idx].j]++] = idx;
  }
  std::span<const std::size_t> group(std::size_t j) const {
    return std::span<const std::size_t>(order).subspan(offsets[j], offsets[j + 1] - offsets[j]);
  }
};

std::vector<std::size_t> path_to(const BellmanState& state, std::size_t node) {
  std::vector<std::size_t> ends;
  while (node != 0) {
    ends.push_back(node);
    node = state.pred[node];
  }
  std::reverse(ends.begin(), ends.end());
  return ends;
}

// Whether predecessor `cand` beats the current choice `cur` for node i.
bool improves(const BellmanState& state, long cand_changes, double cand_cost, std::size_t cand,
              long cur_changes, double cur_cost, std::size_t cur) {
  if (cur_changes == BellmanState::kUnreachable) return true;
  if (cand_changes != cur_changes) return cand_changes < cur_changes;
  if (cand_cost != cur_cost) return cand_cost < cur_cost;
  return path_to(state, cand) < path_to(state, cur);
}

void relax(BellmanState& state, const ConstraintProblem& problem, const BandMeet& meet,
           std::size_t j, std::size_t i) {
  const auto n = problem.sample.size();
  const auto stats = block_stats(problem.sample, j, i);
  if (!(stats.width > 0.0)) return;
  const double mu = static_cast<double>(stats.count) / (static_cast<double>(n) * stats.width);
  if (!meet.admits(mu)) return;
  const long cand_changes = state.changes[j] + 1;
  const double cand_cost = state.cost[j] + block_cost(stats.count, stats.width, n);
  if (improves(state, cand_changes, cand_cost, j, state.changes[i], state.cost[i], state.pred[i])) {
    state.changes[i] = cand_changes;
    state.cost[i] = cand_cost;
    state.pred[i] = j;
  }
}

}  // namespace

BlockStats block_stats(const SortedSample& sample, std::size_t j, std::size_t i) {
  if (j == 0) return {i, sample.at(i) - sample.at(1)};
  return {i - j, sample.at(i) - sample.at(j)};
}

double block_cost(std::size_t count, double width, std::size_t n) {
  const double c = static_cast<double>(count);
  return -c * std::log(c / (static_cast<double>(n) * width));
}

std::optional<double> segment_cost(const ConstraintProblem& problem, std::size_t j, std::size_t i) {
  const auto n = problem.sample.size();
  if (!(j < i && i <= n)) throw DomainError("segment_cost: need 0 <= j < i <= n");
  const auto stats = block_stats(problem.sample, j, i);
  if (!(stats.width > 0.0)) return std::nullopt;
  const double mu = static_cast<double>(stats.count) / (static_cast<double>(n) * stats.width);
  for (const auto& band : problem.bands) {
    if (band.interval.j >= j && band.interval.k <= i && !band.admits(mu)) return std::nullopt;
  }
  return block_cost(stats.count, stats.width, n);
}

BellmanState::BellmanState(std::size_t n)
    : changes(n + 1, kUnreachable), pred(n + 1, 0), cost(n + 1, kInf) {
  changes[0] = -1;
  cost[0] = 0.0;
}

Segmentation BellmanState::extract(std::size_t n) const {
  if (changes[n] == kUnreachable) throw NumericError("segmentation did not reach the last node");
  return {path_to(*this, n), cost[n]};
}

Segmentation solve_unpruned(const ConstraintProblem& problem) {
  const std::size_t n = problem.sample.size();
  const LeftIndex by_left(problem.system);
  BellmanState state(n);
  for (std::size_t i = 1; i <= n; ++i) {
    BandMeet meet;
    for (std::size_t j = i; j-- > 0;) {
      if (j >= 1) {
        for (std::size_t idx : by_left.group(j)) {
          if (problem.system[idx].k > i) break;
          meet.absorb(problem.bands[idx]);
        }
      }
      if (state.changes[j] == BellmanState::kUnreachable) continue;
      relax(state, problem, meet, j, i);
    }
  }
  return state.extract(n);
}

Segmentation solve_pruned(const ConstraintProblem& problem) {
  const std::size_t n = problem.sample.size();
  const auto& system = problem.system;
  BellmanState state(n);

  std::vector<std::size_t> level{0};  // nodes with the previous block count
  while (state.changes[n] == BellmanState::kUnreachable) {
    std::vector<BandMeet> meets(level.size());
    std::vector<std::size_t> next;
    for (std::size_t i = level.front() + 1; i <= n; ++i) {
      const auto first = system.first_ending_at(i);
      const auto group = system.ending_at(i);
      for (std::size_t g = 0; g < group.size(); ++g) {
        const auto& band = problem.bands[first + g];
        for (std::size_t a = 0; a < level.size() && level[a] <= group[g].j; ++a) {
          meets[a].absorb(band);
        }
      }
      // Constraints only accumulate as i grows, so once the block from the
      // rightmost candidate admits no constant, no later node is reachable.
      if (meets.back().admits_nothing()) break;
      if (state.changes[i] != BellmanState::kUnreachable) continue;
      for (std::size_t a = 0; a < level.size() && level[a] < i; ++a) {
        relax(state, problem, meets[a], level[a], i);
      }
      if (state.changes[i] != BellmanState::kUnreachable) next.push_back(i);
    }
    if (next.empty()) throw NumericError("pruned recursion found no reachable node");
    level = std::move(next);
  }
  return state.extract(n);
}

Segmentation solve_brute_force(const ConstraintProblem& problem) {
  const std::size_t n = problem.sample.size();
  if (n > kBruteForceMaxN) {
    throw DomainError("brute force segmentation is limited to n <= " +
                      std::to_string(kBruteForceMaxN));
  }
  // Node 1 can never end a block ((0, 1] has zero width), so candidate
  // breakpoints are 2 .. n-1.
  const std::size_t free_points = n >= 3 ? n - 2 : 0;
  std::optional<Segmentation> best;
  std::vector<std::size_t> ends;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_points); ++mask) {
    ends.clear();
    for (std::size_t b = 0; b < free_points; ++b) {
      if (mask & (std::uint64_t{1} << b)) ends.push_back(b + 2);
    }
    ends.push_back(n);
    double total = 0.0;
    bool feasible = true;
    std::size_t prev = 0;
    for (std::size_t end : ends) {
      const auto c = segment_cost(problem, prev, end);
      if (!c) {
        feasible = false;
        break;
      }
      total += *c;
      prev = end;
    }
    if (!feasible) continue;
    const bool better = !best || ends.size() < best->ends.size() ||
                        (ends.size() == best->ends.size() &&
                         (total < best->cost || (total == best->cost && ends < best->ends)));
    if (better) best = Segmentation{ends, total};
  }
  if (!best) throw NumericError("no feasible segmentation found");
  return *best;
}

HistogramModel essential_histogram_at(const SortedSample& sample, double kappa,
                                      const FitOptions& options) {
  const IntervalSystem system(sample.size(), options.scale_log);
  if (system.empty()) return single_bin_histogram(sample);
  const ConstraintProblem problem(sample, system, kappa);
  Segmentation seg;
  switch (options.solver) {
    case Solver::kPruned: seg = solve_pruned(problem); break;
    case Solver::kUnpruned: seg = solve_unpruned(problem); break;
    case Solver::kBruteForce: seg = solve_brute_force(problem); break;
  }
  if (options.self_check) {
    const auto n = sample.size();
    std::size_t prev = 0;
    for (std::size_t end : seg.ends) {
      const auto stats = block_stats(sample, prev, end);
      const double mu = static_cast<double>(stats.count) / (static_cast<double>(n) * stats.width);
      for (const auto& iv : system.within(prev, end)) {
        double stat;
        try {
          stat = local_statistic(iv, mu, sample);
        } catch (const DomainError&) {
          stat = kInf;
        }
        if (stat > kappa + 1e-6) {
          throw NumericError("self-check failed: block (" + std::to_string(prev) + ", " +
                             std::to_string(end) + "] violates interval (" +
                             std::to_string(iv.j) + ", " + std::to_string(iv.k) + "]");
        }
      }
      prev = end;
    }
  }
  return histogram_from_ends(sample, seg.ends);
}

HistogramModel essential_histogram(const SortedSample& sample, double alpha,
                                   const QuantileTable& table, const FitOptions& options) {
  if (IntervalSystem(sample.size(), options.scale_log).empty()) return single_bin_histogram(sample);
  return essential_histogram_at(sample, lookup_kappa(table, alpha, sample.size()), options);
}

HistogramModel brute_force_histogram(const SortedSample& sample, double alpha,
                                     const QuantileTable& table) {
  FitOptions options;
  options.solver = Solver::kBruteForce;
  return essential_histogram(sample, alpha, table, options);
}

}  // namespace esshist
