#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "esshist/bounds.hpp"
#include "esshist/histogram.hpp"
#include "esshist/intervals.hpp"
#include "esshist/quantiles.hpp"
#include "esshist/sample.hpp"

namespace esshist {

/// Count and length of block (j, i]. The virtual node j = 0 is the closed
/// left edge at X_(1): block (0, i] is [X_(1), X_(i)] with count i.
struct BlockStats {
  std::size_t count = 0;
  double width = 0.0;
};
BlockStats block_stats(const SortedSample& sample, std::size_t j, std::size_t i);

/// -count * log(count / (n * width)); the negative log-likelihood contribution
/// of a block fitted by its empirical average density.
double block_cost(std::size_t count, double width, std::size_t n);

/// Everything the segmentation needs about one (sample, kappa) pair.
struct ConstraintProblem {
  const SortedSample& sample;
  const IntervalSystem& system;
  std::vector<FeasibleBand> bands;  // aligned with system.intervals()

  ConstraintProblem(const SortedSample& s, const IntervalSystem& sys, double kappa)
      : sample(s), system(sys), bands(compute_bands(sys, s, kappa)) {}
};

/// Cost of block (j, i] if its average density lies in the band of every
/// contained interval, nullopt otherwise. Checks containment exhaustively.
std::optional<double> segment_cost(const ConstraintProblem& problem, std::size_t j, std::size_t i);

/// A segmentation by its block right ends t_1 < ... < t_K = n.
struct Segmentation {
  std::vector<std::size_t> ends;
  double cost = 0.0;
  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Bellman tables over nodes 0..n. `changes[i]` is the minimal number of
/// blocks on X_(1..i) minus one (changes[0] = -1; unreachable nodes hold
/// kUnreachable), `pred[i]` the left node of the last block and `cost[i]`
/// the accumulated block cost.
struct BellmanState {
  static constexpr long kUnreachable = -2;
  std::vector<long> changes;
  std::vector<std::size_t> pred;
  std::vector<double> cost;

  explicit BellmanState(std::size_t n);
  Segmentation extract(std::size_t n) const;
};

/// Pruned level-set recursion: candidates for level k are restricted to
/// nodes of level k - 1, and each level stops once no constant density is
/// admissible on a block starting at its rightmost candidate.
Segmentation solve_pruned(const ConstraintProblem& problem);
/// Full Bellman recursion over all predecessors.
Segmentation solve_unpruned(const ConstraintProblem& problem);
/// Exhaustive search over all segmentations; n <= kBruteForceMaxN.
inline constexpr std::size_t kBruteForceMaxN = 16;
Segmentation solve_brute_force(const ConstraintProblem& problem);

enum class Solver { kPruned, kUnpruned, kBruteForce };

struct FitOptions {
  Solver solver = Solver::kPruned;
  ScaleLog scale_log = ScaleLog::kNatural;
  bool self_check = true;  // re-verify the relaxed constraints on the result
};

/// Fewest-bins histogram whose blocks satisfy every contained interval
/// constraint at threshold kappa; ties go to the smallest total block cost,
/// then to the lexicographically smallest sequence of block ends.
HistogramModel essential_histogram_at(const SortedSample& sample, double kappa,
                                      const FitOptions& options = {});

/// As above with kappa = lookup_kappa(table, alpha, n). Returns a single bin
/// without consulting the table when the interval system is empty.
HistogramModel essential_histogram(const SortedSample& sample, double alpha,
                                   const QuantileTable& table, const FitOptions& options = {});

HistogramModel brute_force_histogram(const SortedSample& sample, double alpha,
                                     const QuantileTable& table);

}  // namespace esshist
