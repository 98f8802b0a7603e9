#include "esshist/densities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "esshist/errors.hpp"
#include "esshist/rng.hpp"
#include "esshist/roots.hpp"

namespace esshist {
namespace {

using Kind = Component::Kind;
constexpr double kPi = std::numbers::pi;

Component uniform(double a, double b) { return {Kind::kUniform, a, b}; }
Component normal(double m, double s) { return {Kind::kNormal, m, s}; }

double normal_overlap(const Component& x, const Component& y) {
  const double var = x.b * x.b + y.b * y.b;
  const double d = x.a - y.a;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * kPi * var);
}

// Integral of x.pdf * y.pdf over the line.
double product_integral(const Component& x, const Component& y) {
  if (x.kind == Kind::kNormal && y.kind == Kind::kNormal) return normal_overlap(x, y);
  if (x.kind == Kind::kUniform && y.kind == Kind::kUniform) {
    const double overlap = std::max(0.0, std::min(x.b, y.b) - std::max(x.a, y.a));
    return overlap / ((x.b - x.a) * (y.b - y.a));
  }
  if (x.kind == Kind::kExponential && y.kind == Kind::kExponential) {
    return x.a * y.a / (x.a + y.a);
  }
  if (x.kind == Kind::kCauchy && y.kind == Kind::kCauchy) {
    // Convolution of Cauchy laws is Cauchy with summed scales, evaluated at the location gap.
    const double s = x.b + y.b, d = x.a - y.a;
    return s / (kPi * (s * s + d * d));
  }
  if (y.kind == Kind::kUniform) return product_integral(y, x);
  if (x.kind == Kind::kUniform) {
    auto f = [&](double t) { return y.pdf(t); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, x.a, x.b, 15, 1e-12) /
           (x.b - x.a);
  }
  throw DomainError("product integral not available for this component pair");
}

// Raw moments E X, E X^2, E X^3; nullopt when undefined.
std::optional<std::array<double, 3>> raw_moments(const Component& c) {
  switch (c.kind) {
    case Kind::kUniform: {
      std::array<double, 3> m{};
      for (int r = 1; r <= 3; ++r) {
        m[r - 1] = (std::pow(c.b, r + 1) - std::pow(c.a, r + 1)) / ((r + 1) * (c.b - c.a));
      }
      return m;
    }
    case Kind::kNormal: {
      const double mu = c.a, s2 = c.b * c.b;
      return std::array<double, 3>{mu, mu * mu + s2, mu * mu * mu + 3.0 * mu * s2};
    }
    case Kind::kExponential: {
      const double r = c.a;
      return std::array<double, 3>{1.0 / r, 2.0 / (r * r), 6.0 / (r * r * r)};
    }
    case Kind::kCauchy:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

double Component::pdf(double x) const {
  switch (kind) {
    case Kind::kUniform: return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
    case Kind::kNormal: {
      const double z = (x - a) / b;
      return std::exp(-0.5 * z * z) / (b * std::sqrt(2.0 * kPi));
    }
    case Kind::kExponential: return x < 0.0 ? 0.0 : a * std::exp(-a * x);
    case Kind::kCauchy: {
      const double z = (x - a) / b;
      return 1.0 / (kPi * b * (1.0 + z * z));
    }
  }
  return 0.0;
}

double Component::cdf(double x) const {
  switch (kind) {
    case Kind::kUniform: return x <= a ? 0.0 : x >= b ? 1.0 : (x - a) / (b - a);
    case Kind::kNormal: return 0.5 * std::erfc(-(x - a) / (b * std::numbers::sqrt2));
    case Kind::kExponential: return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
    case Kind::kCauchy: return 0.5 + std::atan((x - a) / b) / kPi;
  }
  return 0.0;
}

double Component::draw(std::mt19937_64& eng) const {
  switch (kind) {
    case Kind::kUniform: return a + (b - a) * uniform_open(eng);
    case Kind::kNormal: return std::normal_distribution<double>(a, b)(eng);
    case Kind::kExponential: return standard_exponential(eng) / a;
    case Kind::kCauchy: return a + b * std::tan(kPi * (uniform_open(eng) - 0.5));
  }
  return 0.0;
}

ReferenceDensity::ReferenceDensity(std::string name, std::vector<double> weights,
                                   std::vector<Component> parts, int true_modes)
    : name_(std::move(name)),
      weights_(std::move(weights)),
      parts_(std::move(parts)),
      true_modes_(true_modes) {}

double ReferenceDensity::pdf(double x) const {
  double v = 0.0;
  for (std::size_t c = 0; c < parts_.size(); ++c) v += weights_[c] * parts_[c].pdf(x);
  return v;
}

double ReferenceDensity::cdf(double x) const {
  double v = 0.0;
  for (std::size_t c = 0; c < parts_.size(); ++c) v += weights_[c] * parts_[c].cdf(x);
  return std::clamp(v, 0.0, 1.0);
}

double ReferenceDensity::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p outside (0,1)");
  double lo = -1.0, hi = 1.0;
  while (cdf(lo) > p) lo *= 2.0;
  while (cdf(hi) < p) hi *= 2.0;
  auto g = [&](double x) { return cdf(x) - p; };
  return bracketed_root(g, lo, hi, g(lo), g(hi), 1e-13 * std::max(1.0, std::abs(hi - lo)), 400);
}

std::optional<double> ReferenceDensity::skewness() const {
  std::array<double, 3> m{};
  for (std::size_t c = 0; c < parts_.size(); ++c) {
    const auto mc = raw_moments(parts_[c]);
    if (!mc) return std::nullopt;
    for (int r = 0; r < 3; ++r) m[r] += weights_[c] * (*mc)[r];
  }
  const double mean = m[0];
  const double var = m[1] - mean * mean;
  const double third = m[2] - 3.0 * mean * m[1] + 2.0 * mean * mean * mean;
  return third / std::pow(var, 1.5);
}

double ReferenceDensity::squared_norm() const {
  double total = 0.0;
  for (std::size_t x = 0; x < parts_.size(); ++x) {
    for (std::size_t y = 0; y < parts_.size(); ++y) {
      total += weights_[x] * weights_[y] * product_integral(parts_[x], parts_[y]);
    }
  }
  return total;
}

std::vector<double> ReferenceDensity::draw(std::uint64_t seed, std::size_t n,
                                           std::uint64_t rep) const {
  auto eng = stream_engine(seed, rep);
  std::vector<double> cumulative(weights_.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < weights_.size(); ++c) cumulative[c] = (acc += weights_[c]);
  std::vector<double> out(n);
  for (auto& x : out) {
    std::size_t c = 0;
    if (parts_.size() > 1) {
      const double u = uniform_open(eng) * acc;
      c = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                   cumulative.begin());
      c = std::min(c, parts_.size() - 1);
    }
    x = parts_[c].draw(eng);
  }
  return out;
}

SortedSample ReferenceDensity::sample(std::uint64_t seed, std::size_t n, std::uint64_t rep) const {
  return SortedSample(draw(seed, n, rep), TiePolicy::kJitter, mix_seed(seed) ^ rep);
}

std::vector<ReferenceDensity> catalog() {
  std::vector<ReferenceDensity> out;
  out.emplace_back("uniform", std::vector<double>{1.0}, std::vector<Component>{uniform(0.0, 1.0)},
                   1);
  out.emplace_back("exponential", std::vector<double>{1.0},
                   std::vector<Component>{{Kind::kExponential, 1.0, 0.0}}, 1);
  out.emplace_back("mix_uniform", std::vector<double>{0.25, 0.125, 0.125, 0.5},
                   std::vector<Component>{uniform(0.0, 2.0), uniform(0.75, 1.25),
                                          uniform(2.975, 3.025), uniform(4.0, 6.0)},
                   3);
  {
    std::vector<double> w{0.5};
    std::vector<Component> p{normal(0.0, 1.0)};
    for (int l = 0; l <= 4; ++l) {
      w.push_back(0.1);
      p.push_back(normal(l / 2.0 - 1.0, 0.1));
    }
    out.emplace_back("claw", std::move(w), std::move(p), 5);
  }
  out.emplace_back("harp", std::vector<double>(5, 0.2),
                   std::vector<Component>{normal(0.0, 0.5), normal(5.0, 1.0), normal(15.0, 2.0),
                                          normal(30.0, 4.0), normal(60.0, 8.0)},
                   5);
  out.emplace_back("cauchy", std::vector<double>{1.0},
                   std::vector<Component>{{Kind::kCauchy, 0.0, 1.0}}, 1);
  out.emplace_back("bimodal", std::vector<double>{0.5, 0.5},
                   std::vector<Component>{normal(-3.0, 1.0), normal(3.0, 1.0)}, 2);
  // 3/2 on [0, 1/2), 1/2 on [1/2, 1].
  out.emplace_back("step", std::vector<double>{0.75, 0.25},
                   std::vector<Component>{uniform(0.0, 0.5), uniform(0.5, 1.0)}, 1);
  return out;
}

ReferenceDensity density_by_name(const std::string& name) {
  for (auto& d : catalog()) {
    if (d.name() == name) return d;
  }
  throw DataError("unknown density '" + name + "'");
}

}  // namespace esshist
