#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tvpolar {

/// Point or direction in a small Euclidean space.
using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
  return r;
}

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = s * a[k];
  return r;
}

inline Vec operator-(const Vec& a) { return -1.0 * a; }

inline double distance(const Vec& a, const Vec& b) { return norm2(a - b); }

/// Solves the dense square system A x = b (A row-major, dim x dim) by Gaussian
/// elimination with partial pivoting. Returns nullopt when a pivot falls below
/// rel_eps times the largest entry of A.
std::optional<Vec> solve_linear(std::vector<double> a, Vec b, double rel_eps = 1e-12);

/// Numerical rank of a set of row vectors.
std::size_t matrix_rank(std::span<const Vec> rows, double rel_eps = 1e-10);

}  // namespace tvpolar
