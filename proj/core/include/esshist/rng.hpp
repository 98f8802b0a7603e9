#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace esshist {

// splitmix64 finalizer; used to derive independent per-replication seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Engine for replication `stream` of a run seeded with `seed`. Streams are
/// independent of execution order, so parallel and serial runs agree.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x51ed2701ULL)));
}

/// Uniform double in the open interval (0, 1).
inline double uniform_open(std::mt19937_64& eng) {
  // 53 random bits, shifted by half an ulp so 0 is never produced.
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double standard_exponential(std::mt19937_64& eng) {
  return -std::log(uniform_open(eng));
}

}  // namespace esshist
