#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "esshist/sample.hpp"

namespace esshist {

struct Component {
  enum class Kind { kUniform, kNormal, kExponential, kCauchy };
  Kind kind;
  double a;  // uniform: left; normal/cauchy: location; exponential: rate
  double b;  // uniform: right; normal/cauchy: scale; exponential: unused

  double pdf(double x) const;
  double cdf(double x) const;
  double draw(std::mt19937_64& eng) const;
};

/// Finite mixture used as ground truth in simulations.
class ReferenceDensity {
 public:
  ReferenceDensity(std::string name, std::vector<double> weights, std::vector<Component> parts,
                   int true_modes);

  const std::string& name() const { return name_; }
  int true_modes() const { return true_modes_; }
  /// Modes plus troughs of the truth.
  int true_extrema() const { return 2 * true_modes_ - 1; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Component>& components() const { return parts_; }

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  /// Skewness, or nullopt when the third moment does not exist.
  std::optional<double> skewness() const;
  /// Integral of pdf^2 over the real line.
  double squared_norm() const;

  /// n draws from replication stream `rep` of `seed`.
  SortedSample sample(std::uint64_t seed, std::size_t n, std::uint64_t rep = 0) const;
  std::vector<double> draw(std::uint64_t seed, std::size_t n, std::uint64_t rep = 0) const;

 private:
  std::string name_;
  std::vector<double> weights_;
  std::vector<Component> parts_;
  int true_modes_;
};

/// uniform, exponential, mix_uniform, claw, harp, cauchy, bimodal, step.
std::vector<ReferenceDensity> catalog();
/// Throws DataError for an unknown name.
ReferenceDensity density_by_name(const std::string& name);

}  // namespace esshist
