#pragma once

#include <cstdint>
#include <random>

namespace qrl {

using Rng = std::mt19937_64;

// splitmix64 mixer, used to derive independent stream seeds from one master
// seed so that e.g. environment resets and action sampling never share draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream) {
  return Rng(splitmix64(master_seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
}

// Uniform double in [0, 1) from 53 engine bits. std::uniform_real_distribution
// is implementation-defined, so it cannot back reproducible trajectories.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace qrl
