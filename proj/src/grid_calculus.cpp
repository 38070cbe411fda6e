#include "tvpolar/grid_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tvpolar {

GridImage::GridImage(std::size_t n, double fill) : n_(n), data_(n * n, fill) {}

GridImage::GridImage(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n) {
    throw std::invalid_argument("GridImage: expected " + std::to_string(n * n) + " entries, got " +
                                std::to_string(data_.size()));
  }
  for (double x : data_) {
    if (!std::isfinite(x)) throw std::invalid_argument("GridImage: non-finite entry");
  }
}

static void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

GridImage& GridImage::operator+=(const GridImage& other) {
  require_same_size(n_, other.n_, "GridImage +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

GridImage& GridImage::operator-=(const GridImage& other) {
  require_same_size(n_, other.n_, "GridImage -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

GridImage& GridImage::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

VectorField::VectorField(GridImage c1, GridImage c2) : comp1(std::move(c1)), comp2(std::move(c2)) {
  require_same_size(comp1.n(), comp2.n(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& other) {
  comp1 += other.comp1;
  comp2 += other.comp2;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  comp1 -= other.comp1;
  comp2 -= other.comp2;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  comp1 *= s;
  comp2 *= s;
  return *this;
}

namespace detail {

double pairwise_sum(std::span<const double> values) {
  const std::size_t len = values.size();
  if (len == 0) return 0.0;
  if (len == 1) return values[0];
  if (len == 2) return values[0] + values[1];
  const std::size_t half = len / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void gradient_into(const GridImage& u, VectorField& out) {
  const std::size_t n = u.n();
  if (out.n() != n) out = VectorField(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.comp1(i, j) = i + 1 < n ? u(i + 1, j) - u(i, j) : 0.0;
      out.comp2(i, j) = j + 1 < n ? u(i, j + 1) - u(i, j) : 0.0;
    }
  }
}

// Case formulas: first index p(1), interior p(i) - p(i-1), last index -p(N-1).
void divergence_into(const VectorField& p, GridImage& out) {
  const std::size_t n = p.n();
  if (out.n() != n) out = GridImage(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double d1 = 0.0;
      if (i + 1 < n) d1 += p.comp1(i, j);
      if (i > 0) d1 -= p.comp1(i - 1, j);
      double d2 = 0.0;
      if (j + 1 < n) d2 += p.comp2(i, j);
      if (j > 0) d2 -= p.comp2(i, j - 1);
      out(i, j) = d1 + d2;
    }
  }
}

}  // namespace detail

VectorField gradient(const GridImage& u) {
  VectorField g(u.n());
  detail::gradient_into(u, g);
  return g;
}

GridImage divergence(const VectorField& p) {
  GridImage d(p.n());
  detail::divergence_into(p, d);
  return d;
}

double tv(const GridImage& u) {
  const VectorField g = gradient(u);
  std::vector<double> mags(u.size());
  for (std::size_t k = 0; k < mags.size(); ++k) {
    mags[k] = std::hypot(g.comp1.values()[k], g.comp2.values()[k]);
  }
  return detail::pairwise_sum(mags);
}

double field_sup_norm(const VectorField& g) {
  double best = 0.0;
  const auto a = g.comp1.values();
  const auto b = g.comp2.values();
  for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::hypot(a[k], b[k]));
  return best;
}

double inner(const GridImage& a, const GridImage& b) {
  require_same_size(a.n(), b.n(), "inner");
  std::vector<double> prod(a.size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = a.values()[k] * b.values()[k];
  return detail::pairwise_sum(prod);
}

double inner(const VectorField& a, const VectorField& b) {
  return inner(a.comp1, b.comp1) + inner(a.comp2, b.comp2);
}

double norm(const GridImage& u) { return std::sqrt(inner(u, u)); }
double norm(const VectorField& g) { return std::sqrt(inner(g, g)); }

MeanZeroSplit mean_zero_split(const GridImage& f) {
  const std::size_t n = f.n();
  if (n == 0) return {GridImage(0), GridImage(0)};
  const double mean = detail::pairwise_sum(f.values()) / static_cast<double>(n * n);
  GridImage fhat = GridImage::constant(n, mean);
  GridImage f0 = f - fhat;
  return {std::move(fhat), std::move(f0)};
}

bool has_zero_mean(const GridImage& v) {
  double scale = 1.0;
  for (double x : v.values()) scale = std::max(scale, std::abs(x));
  const double n2 = static_cast<double>(v.size());
  return std::abs(detail::pairwise_sum(v.values())) <= 1e-9 * n2 * scale;
}

namespace {

// Orthonormal DCT-II matrix, row k = k-th cosine mode.
std::vector<double> dct_matrix(std::size_t n) {
  std::vector<double> c(n * n);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
    for (std::size_t i = 0; i < n; ++i) {
      c[k * n + i] = s * std::cos(std::numbers::pi * static_cast<double>(k) *
                                  (static_cast<double>(i) + 0.5) / nn);
    }
  }
  return c;
}

// out = A * B * A^T (transpose = false) or A^T * B * A (transpose = true).
std::vector<double> sandwich(const std::vector<double>& a, std::span<const double> b, std::size_t n,
                             bool transpose) {
  auto at = [&](std::size_t r, std::size_t c) { return transpose ? a[c * n + r] : a[r * n + c]; };
  std::vector<double> tmp(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const double ark = at(r, k);
      for (std::size_t c = 0; c < n; ++c) tmp[r * n + c] += ark * b[k * n + c];
    }
  std::vector<double> out(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += tmp[r * n + k] * at(c, k);
      out[r * n + c] = s;
    }
  return out;
}

struct PoissonSolver {
  std::size_t n;
  std::vector<double> dct;
  std::vector<double> eig;

  explicit PoissonSolver(std::size_t size) : n(size), dct(dct_matrix(size)), eig(size) {
    for (std::size_t k = 0; k < n; ++k) {
      eig[k] = 2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }
  }

  GridImage solve(const GridImage& rhs) const {
    std::vector<double> hat = sandwich(dct, rhs.values(), n, false);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const double lam = eig[k] + eig[l];
        hat[k * n + l] = (k == 0 && l == 0) ? 0.0 : hat[k * n + l] / lam;
      }
    return GridImage(n, sandwich(dct, hat, n, true));
  }
};

// Euclidean projection of pixel magnitudes onto {sum |q_ij| <= radius}; returns
// the clip level theta such that sum max(m - theta, 0) = radius (0 if inside).
double l1_clip_level(std::span<const double> mags, double radius) {
  double total = 0.0;
  for (double m : mags) total += m;
  if (total <= radius) return -1.0;
  std::vector<double> sorted(mags.begin(), mags.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double t = (cumsum - radius) / static_cast<double>(k + 1);
    if (t < sorted[k]) theta = t;
  }
  return std::max(theta, 0.0);
}

}  // namespace

GridImage solve_neumann_poisson(const GridImage& rhs) {
  if (rhs.n() == 0) return GridImage(0);
  return PoissonSolver(rhs.n()).solve(rhs);
}

std::vector<std::vector<double>> mean_zero_basis(std::size_t n) {
  const std::vector<double> c = dct_matrix(n);
  std::vector<std::vector<double>> basis;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      if (k == 0 && l == 0) continue;
      std::vector<double> b(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i * n + j] = c[k * n + i] * c[l * n + j];
      basis.push_back(std::move(b));
    }
  return basis;
}

DualNormResult tv_dual_norm(const GridImage& v, const DualNormOptions& opts) {
  if (!has_zero_mean(v)) throw std::invalid_argument("tv_dual_norm: image must have zero mean");
  const std::size_t n = v.n();
  DualNormResult result;
  if (std::all_of(v.values().begin(), v.values().end(), [](double x) { return x == 0.0; })) {
    result.converged = true;
    return result;
  }

  const PoissonSolver poisson(n);
  GridImage div_buf(n);
  VectorField grad_buf(n);

  // Projection onto the affine set {p : div p = v}.
  auto project_affine = [&](VectorField& z) {
    detail::divergence_into(z, div_buf);
    div_buf -= v;
    detail::gradient_into(poisson.solve(div_buf), grad_buf);
    z += grad_buf;
  };

  auto lower_bound_from = [&](const VectorField& y) {
    detail::divergence_into(y, div_buf);
    GridImage x = poisson.solve(-1.0 * div_buf);
    const double t = tv(x);
    return t > 0.0 ? std::abs(inner(x, v)) / t : 0.0;
  };

  VectorField p(n);
  project_affine(p);
  double upper = field_sup_norm(p);
  double lower = 0.0;
  const double tau = upper;

  VectorField q = p;
  VectorField u(n);
  VectorField z(n);
  std::vector<double> mags(n * n);

  std::size_t it = 0;
  for (; it < opts.max_iters; ++it) {
    z = q;
    z -= u;
    project_affine(z);
    p = z;
    z += u;

    const auto z1 = z.comp1.values();
    const auto z2 = z.comp2.values();
    for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::hypot(z1[k], z2[k]);
    const double theta = l1_clip_level(mags, tau);
    auto q1 = q.comp1.values();
    auto q2 = q.comp2.values();
    for (std::size_t k = 0; k < mags.size(); ++k) {
      const double scale = theta < 0.0 ? 0.0 : (mags[k] > theta ? theta / mags[k] : 1.0);
      q1[k] = z1[k] * scale;
      q2[k] = z2[k] * scale;
    }
    u = z;
    u -= q;

    if ((it + 1) % opts.check_every == 0) {
      upper = std::min(upper, field_sup_norm(p));
      lower = std::max(lower, lower_bound_from(u));
      if (upper - lower <= opts.rel_tol * upper) {
        ++it;
        result.converged = true;
        break;
      }
    }
  }
  result.value = upper;
  result.lower_bound = std::min(lower, upper);
  result.iterations = it;
  return result;
}

}  // namespace tvpolar
