#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tvpolar {

/// Square N x N image, the space X. Entries are addressed 0-based as
/// (row, column); documentation uses the 1-based (i, j) convention.
class GridImage {
 public:
  GridImage() = default;
  explicit GridImage(std::size_t n, double fill = 0.0);
  /// Takes row-major data. Throws std::invalid_argument if data.size() != n*n
  /// or any entry is not finite.
  GridImage(std::size_t n, std::vector<double> data);

  static GridImage constant(std::size_t n, double c) { return GridImage(n, c); }

  std::size_t n() const { return n_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  GridImage& operator+=(const GridImage& other);
  GridImage& operator-=(const GridImage& other);
  GridImage& operator*=(double s);

  friend GridImage operator+(GridImage a, const GridImage& b) { return a += b; }
  friend GridImage operator-(GridImage a, const GridImage& b) { return a -= b; }
  friend GridImage operator*(double s, GridImage a) { return a *= s; }
  friend bool operator==(const GridImage&, const GridImage&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Pair of images, the space Y = X x X.
struct VectorField {
  GridImage comp1;
  GridImage comp2;

  VectorField() = default;
  explicit VectorField(std::size_t n) : comp1(n), comp2(n) {}
  VectorField(GridImage c1, GridImage c2);

  std::size_t n() const { return comp1.n(); }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Forward differences; the last row of comp1 and last column of comp2 are 0.
VectorField gradient(const GridImage& u);

/// Negative adjoint of gradient: <-div p, u> = <p, grad u> for all u, p.
GridImage divergence(const VectorField& p);

/// Isotropic discrete total variation, sum of pixelwise Euclidean gradient norms.
double tv(const GridImage& u);

/// Max over pixels of the pointwise Euclidean magnitude.
double field_sup_norm(const VectorField& g);

double inner(const GridImage& a, const GridImage& b);
double inner(const VectorField& a, const VectorField& b);
double norm(const GridImage& u);
double norm(const VectorField& g);

struct MeanZeroSplit {
  GridImage fhat;  ///< constant image holding the mean of f
  GridImage f0;    ///< f - fhat, orthogonal to constants
};

MeanZeroSplit mean_zero_split(const GridImage& f);

/// Returns w with zero mean solving -div(grad w) = rhs. The right-hand side
/// must have zero mean (its mean component is discarded). Uses the cosine
/// basis that diagonalizes the Neumann Laplacian; O(n^3).
GridImage solve_neumann_poisson(const GridImage& rhs);

struct DualNormOptions {
  double rel_tol = 1e-6;       ///< stop when (upper - lower) <= rel_tol * upper
  std::size_t max_iters = 200000;
  std::size_t check_every = 10;
};

/// Certified bracket for the dual norm of TV restricted to mean-zero images.
struct DualNormResult {
  double value = 0.0;        ///< upper bound, attained by a feasible field
  double lower_bound = 0.0;  ///< from a mean-zero test image
  std::size_t iterations = 0;
  bool converged = false;

  double relative_gap() const {
    return value > 0.0 ? (value - lower_bound) / value : 0.0;
  }
};

/// Dual norm of TV on the mean-zero subspace:
///   max <x, v>  subject to  tv(x) <= 1, sum(x) = 0,
/// which equals min ||p||_inf over fields with div p = v. Solved by ADMM on the
/// field side; every iterate yields a feasible p (upper bound) and a test image
/// x (lower bound |<x, v>| / tv(x)). Throws std::invalid_argument if v does not
/// have zero mean.
DualNormResult tv_dual_norm(const GridImage& v, const DualNormOptions& opts = {});

/// Tolerance used to decide that an image has zero mean.
bool has_zero_mean(const GridImage& v);

/// Row-major matrix whose row k is an orthonormal basis vector of the
/// mean-zero subspace (n*n - 1 rows, each of length n*n).
std::vector<std::vector<double>> mean_zero_basis(std::size_t n);

namespace detail {

/// Pairwise (cascade) summation. Summing 2^k equal values is exact.
double pairwise_sum(std::span<const double> values);

void gradient_into(const GridImage& u, VectorField& out);
void divergence_into(const VectorField& p, GridImage& out);

}  // namespace detail

}  // namespace tvpolar
