#include "tvpolar/linalg.hpp"

#include <algorithm>
#include <utility>

namespace tvpolar {

std::optional<Vec> solve_linear(std::vector<double> a, Vec b, double rel_eps) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (std::abs(a[piv * n + col]) <= rel_eps * scale) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r] + 0.0;  // +0.0 turns -0 into 0
  }
  return x;
}

std::size_t matrix_rank(std::span<const Vec> rows, double rel_eps) {
  if (rows.empty()) return 0;
  std::vector<Vec> m(rows.begin(), rows.end());
  const std::size_t cols = m.front().size();
  double scale = 0.0;
  for (const Vec& r : m)
    for (double x : r) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) <= rel_eps * scale) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      const double f = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace tvpolar
