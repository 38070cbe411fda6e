#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "tvpolar/grid_calculus.hpp"

namespace tvpolar {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a seed and stream indices.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Field whose pixels are uniform on the closed unit disk.
VectorField random_disk_field(std::size_t n, Rng& rng);

/// Field whose pixels have uniform random angle and the given magnitude.
VectorField random_circle_field(std::size_t n, double magnitude, Rng& rng);

}  // namespace tvpolar
