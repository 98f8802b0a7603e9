#include "esshist/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "esshist/errors.hpp"
#include "esshist/intervals.hpp"
#include "esshist/multiscale.hpp"
#include "esshist/rng.hpp"

namespace esshist {
namespace {

// Sorted uniforms via normalized exponential spacings, so no sort is needed.
void draw_uniform_order_stats(std::mt19937_64& eng, std::vector<double>& out) {
  const std::size_t n = out.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += standard_exponential(eng);
    out[i] = total;
  }
  total += standard_exponential(eng);
  for (auto& u : out) u /= total;
}

void draw_exponential_cdf(std::mt19937_64& eng, std::vector<double>& x, std::vector<double>& out) {
  for (auto& v : x) v = standard_exponential(eng);
  std::sort(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = -std::expm1(-x[i]);
}

std::uint64_t grid_hash(const std::vector<double>& alphas) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double a : alphas) {
    std::ostringstream os;
    os.precision(17);
    os << a << ';';
    for (char c : os.str()) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace

std::vector<double> default_alpha_grid() { return {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}; }

void QuantileTable::validate() const {
  if (reps < 1) throw CalibrationError("quantile table: reps must be >= 1");
  if (alphas.empty() || alphas.size() != kappas.size()) {
    throw CalibrationError("quantile table: alphas and kappas must be non-empty and equally long");
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) {
      throw CalibrationError("quantile table: alpha outside (0,1)");
    }
    if (!std::isfinite(kappas[i])) throw CalibrationError("quantile table: non-finite kappa");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw CalibrationError("quantile table: alphas must be strictly increasing");
    }
    if (i > 0 && kappas[i] > kappas[i - 1]) {
      throw CalibrationError("quantile table: kappas must be nonincreasing in alpha");
    }
  }
}

std::vector<double> simulate_statistics(std::size_t n, std::size_t reps, std::uint64_t seed,
                                        const SimulationOptions& options) {
  const IntervalSystem system(n);
  if (system.empty()) {
    throw CalibrationError("no multiscale intervals for n = " + std::to_string(n) +
                           ": sample too small for calibration");
  }
  const PenaltyTable penalties(n);
  std::vector<double> stats(reps);

  std::size_t workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(reps, 1));

  auto run = [&](std::size_t worker) {
    std::vector<double> cdf(n), scratch(n);
    for (std::size_t rep = worker; rep < reps; rep += workers) {
      auto eng = stream_engine(seed, rep);
      if (options.draw == NullDraw::kUniform) {
        draw_uniform_order_stats(eng, cdf);
      } else {
        draw_exponential_cdf(eng, scratch, cdf);
      }
      stats[rep] = multiscale_statistic(system, penalties, cdf);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  std::sort(stats.begin(), stats.end());
  return stats;
}

double upper_quantile(const std::vector<double>& sorted_values, double alpha) {
  if (sorted_values.empty()) throw CalibrationError("upper_quantile: no values");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("upper_quantile: alpha outside (0,1)");
  const double reps = static_cast<double>(sorted_values.size());
  // Guard against 0.9 * 1000 = 900.0000000000001 style rounding.
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * reps - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted_values.size());
  return sorted_values[rank - 1];
}

QuantileTable simulate_quantiles(std::size_t n, const std::vector<double>& alphas,
                                 std::size_t reps, std::uint64_t seed,
                                 const SimulationOptions& options) {
  if (reps < 100) throw CalibrationError("simulate_quantiles: reps must be >= 100");
  QuantileTable table;
  table.n = n;
  table.alphas = alphas;
  table.reps = reps;
  table.seed = seed;
  table.kappas.resize(alphas.size());
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) {
      throw CalibrationError("simulate_quantiles: alphas must be strictly increasing");
    }
  }
  const auto stats = simulate_statistics(n, reps, seed, options);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    table.kappas[i] = upper_quantile(stats, alphas[i]);
  }
  table.validate();
  return table;
}

std::size_t capped_size(std::size_t n) { return std::min(n, kQuantileCapN); }

double lookup_kappa(const QuantileTable& table, double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lookup_kappa: alpha outside (0,1)");
  const std::size_t want = capped_size(n);
  if (table.n != want) {
    throw CalibrationError("quantile table calibrated for n = " + std::to_string(table.n) +
                           ", requested n = " + std::to_string(want));
  }
  const auto& a = table.alphas;
  if (a.empty() || alpha < a.front() || alpha > a.back()) {
    throw CalibrationError("alpha outside the calibrated grid; extrapolation is not supported");
  }
  const auto hi = static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), alpha) - a.begin());
  if (a[hi] == alpha) return table.kappas[hi];
  const std::size_t lo = hi - 1;
  const double t = (alpha - a[lo]) / (a[hi] - a[lo]);
  return table.kappas[lo] + t * (table.kappas[hi] - table.kappas[lo]);
}

std::filesystem::path QuantileCache::default_dir() {
  if (const char* env = std::getenv("ESSHIST_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "esshist";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "esshist";
  }
  return ".esshist-cache";
}

std::filesystem::path QuantileCache::path_for(std::size_t n, std::size_t reps, std::uint64_t seed,
                                              const std::vector<double>& alphas) const {
  std::ostringstream name;
  name << "kappa-n" << capped_size(n) << "-r" << reps << "-s" << seed << "-v"
       << kQuantileTableVersion;
  if (alphas != default_alpha_grid()) name << "-g" << std::hex << grid_hash(alphas);
  name << ".json";
  return dir_ / name.str();
}

std::optional<QuantileTable> QuantileCache::load(std::size_t n, std::size_t reps,
                                                 std::uint64_t seed,
                                                 const std::vector<double>& alphas) const {
  const auto path = path_for(n, reps, seed, alphas);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  auto table = quantile_table_from_json(buf.str());
  if (table.n != capped_size(n) || table.reps != reps || table.seed != seed ||
      table.alphas != alphas) {
    throw CalibrationError("cache file " + path.string() + " does not match its key");
  }
  return table;
}

bool QuantileCache::store(const QuantileTable& table) const {
  const auto path = path_for(table.n, table.reps, table.seed, table.alphas);
  if (std::filesystem::exists(path)) return false;
  std::filesystem::create_directories(dir_);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(mix_seed(reinterpret_cast<std::uintptr_t>(&table)));
  {
    std::ofstream out(tmp);
    if (!out) throw CalibrationError("cannot write quantile cache file " + tmp.string());
    out << quantile_table_to_json(table) << '\n';
  }
  std::filesystem::rename(tmp, path);
  return true;
}

QuantileTable QuantileCache::get_or_simulate(std::size_t n, std::size_t reps, std::uint64_t seed,
                                             const std::vector<double>& alphas, bool* simulated,
                                             const SimulationOptions& options) const {
  if (auto hit = load(n, reps, seed, alphas)) {
    if (simulated) *simulated = false;
    return *hit;
  }
  auto table = simulate_quantiles(capped_size(n), alphas, reps, seed, options);
  store(table);
  if (simulated) *simulated = true;
  return table;
}

std::string quantile_table_to_json(const QuantileTable& table) {
  nlohmann::ordered_json doc;
  doc["format"] = "esshist-quantiles";
  doc["version"] = table.version;
  doc["n"] = table.n;
  doc["reps"] = table.reps;
  doc["seed"] = table.seed;
  doc["alphas"] = table.alphas;
  doc["kappas"] = table.kappas;
  return doc.dump(2);
}

QuantileTable quantile_table_from_json(const std::string& text) {
  QuantileTable table;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != "esshist-quantiles") {
      throw DataError("not a quantile table document");
    }
    table.version = doc.at("version").get<int>();
    if (table.version != kQuantileTableVersion) {
      throw CalibrationError("unsupported quantile table version " + std::to_string(table.version));
    }
    table.n = doc.at("n").get<std::size_t>();
    table.reps = doc.at("reps").get<std::size_t>();
    table.seed = doc.at("seed").get<std::uint64_t>();
    table.alphas = doc.at("alphas").get<std::vector<double>>();
    table.kappas = doc.at("kappas").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed quantile table: ") + e.what());
  }
  table.validate();
  return table;
}

}  // namespace esshist
