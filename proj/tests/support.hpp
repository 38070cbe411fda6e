#pragma once

#include <cmath>
#include <string>

#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/linalg.hpp"
#include "tvpolar/random.hpp"

namespace tvtest {

inline std::string fixture(const std::string& name) { return std::string(TVPOLAR_FIXTURE_DIR) + "/" + name; }

inline double uniform(tvpolar::Rng& rng, double lo, double hi) { return lo + (hi - lo) * tvpolar::uniform01(rng); }

inline tvpolar::GridImage random_image(std::size_t n, tvpolar::Rng& rng, double scale = 1.0) {
  tvpolar::GridImage u(n);
  for (double& x : u.values()) x = uniform(rng, -scale, scale);
  return u;
}

inline tvpolar::VectorField random_field(std::size_t n, tvpolar::Rng& rng, double scale = 1.0) {
  return {random_image(n, rng, scale), random_image(n, rng, scale)};
}

inline tvpolar::Vec random_vec(std::size_t dim, tvpolar::Rng& rng, double scale = 1.0) {
  tvpolar::Vec v(dim);
  for (double& x : v) x = uniform(rng, -scale, scale);
  return v;
}

// Image with entries k / 2^m, so sums and means of up to 2^(52-m) terms are exact.
inline tvpolar::GridImage dyadic_image(std::size_t n, tvpolar::Rng& rng) {
  tvpolar::GridImage u(n);
  for (double& x : u.values()) x = std::floor(uniform(rng, -64.0, 64.0)) / 8.0;
  return u;
}

}  // namespace tvtest
