#include "tvpolar/random.hpp"

#include <cmath>
#include <numbers>

namespace tvpolar {

VectorField random_disk_field(std::size_t n, Rng& rng) {
  VectorField f(n);
  auto a = f.comp1.values();
  auto b = f.comp2.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double radius = std::sqrt(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    a[k] = radius * std::cos(angle);
    b[k] = radius * std::sin(angle);
  }
  return f;
}

VectorField random_circle_field(std::size_t n, double magnitude, Rng& rng) {
  VectorField f(n);
  auto a = f.comp1.values();
  auto b = f.comp2.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    a[k] = magnitude * std::cos(angle);
    b[k] = magnitude * std::sin(angle);
  }
  return f;
}

}  // namespace tvpolar
