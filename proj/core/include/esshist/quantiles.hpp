#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace esshist {

/// Tables for sample sizes at or above this value are shared: requests for
/// larger n are served by the table calibrated at exactly this size.
inline constexpr std::size_t kQuantileCapN = 10000;
inline constexpr int kQuantileTableVersion = 1;
inline constexpr std::size_t kDefaultReps = 5000;

std::vector<double> default_alpha_grid();

/// Calibrated thresholds kappa_n(alpha), the (1 - alpha)-quantiles of the
/// multiscale statistic under the null, on an ascending alpha grid.
struct QuantileTable {
  std::size_t n = 0;
  std::vector<double> alphas;
  std::vector<double> kappas;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  int version = kQuantileTableVersion;

  /// Throws CalibrationError when the grid or the kappas are malformed.
  void validate() const;
  friend bool operator==(const QuantileTable&, const QuantileTable&) = default;
};

enum class NullDraw { kUniform, kExponential };

struct SimulationOptions {
  std::size_t workers = 0;  // 0: std::thread::hardware_concurrency()
  NullDraw draw = NullDraw::kUniform;
};

/// Simulates `reps` independent values of the multiscale statistic for
/// samples of size n, evaluated against the true cdf of the drawing
/// distribution. Returned ascending. Output is independent of `workers`.
std::vector<double> simulate_statistics(std::size_t n, std::size_t reps, std::uint64_t seed,
                                        const SimulationOptions& options = {});

/// Inverse-ECDF (1 - alpha)-quantile of an ascending vector: the smallest
/// value whose empirical cdf is >= 1 - alpha.
double upper_quantile(const std::vector<double>& sorted_values, double alpha);

/// Monte-Carlo calibration. Requires a non-empty interval system for n and
/// reps >= 100; throws CalibrationError otherwise.
QuantileTable simulate_quantiles(std::size_t n, const std::vector<double>& alphas,
                                 std::size_t reps, std::uint64_t seed,
                                 const SimulationOptions& options = {});

/// Threshold for level alpha and sample size n. n is capped at kQuantileCapN
/// and must match table.n; alpha is linearly interpolated on the grid and
/// never extrapolated.
double lookup_kappa(const QuantileTable& table, double alpha, std::size_t n);

std::size_t capped_size(std::size_t n);

/// Write-once on-disk store of quantile tables, one JSON document per key.
class QuantileCache {
 public:
  explicit QuantileCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// ESSHIST_CACHE_DIR, else $XDG_CACHE_HOME/esshist, else
  /// $HOME/.cache/esshist, else ./.esshist-cache.
  static std::filesystem::path default_dir();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(std::size_t n, std::size_t reps, std::uint64_t seed,
                                 const std::vector<double>& alphas) const;

  std::optional<QuantileTable> load(std::size_t n, std::size_t reps, std::uint64_t seed,
                                    const std::vector<double>& alphas) const;
  /// Returns false (and leaves the file untouched) when the key already exists.
  bool store(const QuantileTable& table) const;

  /// Load, or simulate at capped_size(n) and store. `simulated` reports a miss.
  QuantileTable get_or_simulate(std::size_t n, std::size_t reps, std::uint64_t seed,
                                const std::vector<double>& alphas, bool* simulated = nullptr,
                                const SimulationOptions& options = {}) const;

 private:
  std::filesystem::path dir_;
};

std::string quantile_table_to_json(const QuantileTable& table);
QuantileTable quantile_table_from_json(const std::string& text);

}  // namespace esshist
