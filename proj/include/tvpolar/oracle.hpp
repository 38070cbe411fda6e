#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/linalg.hpp"
#include "tvpolar/polytope_norms.hpp"

namespace tvpolar {

/// Brute-force grid search settings. The first round covers the box
/// [-box_halfwidth, box_halfwidth]^dim; every refinement round zooms 4x into
/// the bounding box of the near-optimal set.
struct GridSearchSpec {
  double box_halfwidth = 3.0;
  std::size_t points_per_axis = 201;
  std::size_t refine_rounds = 3;
  std::size_t max_points_per_round = 2'000'000;
};

struct OracleResult {
  double value = 0.0;
  std::vector<Vec> argmin_samples;  ///< feasible grid points within `tolerance` of value
  double grid_step = 0.0;           ///< step of the finest round
  double tolerance = 0.0;           ///< grid_step * lipschitz
};

/// Minimizes `objective` over grid points accepted by `feasible`. Feasibility
/// is only tested for points whose objective could matter, in increasing
/// objective order. Throws std::invalid_argument if points_per_axis < 3 and
/// std::runtime_error if no grid point is feasible.
OracleResult grid_minimize(std::size_t dim, const std::function<double(std::span<const double>)>& objective,
                           const std::function<bool(std::span<const double>)>& feasible, double lipschitz,
                           const GridSearchSpec& spec);

/// Brute-force min { gauge(x0 - x) : dual_norm(x) <= 1 } (dim == 2).
OracleResult oracle_project(const PolytopeNorm& p, std::span<const double> x0, const GridSearchSpec& spec);

/// Brute-force min { |f - u|_1 : |u|_inf <= 1 } in any small dimension.
OracleResult oracle_clamp(std::span<const double> f, const GridSearchSpec& spec);

/// Sampled support directions of the TV unit ball on the mean-zero subspace,
/// in the coordinates of mean_zero_basis(n): each row z has tv(B^T z) = 1.
/// Dual norm estimates are max_k <z_k, c>, a lower bound on the true value.
class TvBallSamples {
 public:
  /// Fibonacci-sphere directions when the subspace has dimension 3, Gaussian
  /// directions otherwise. n must be 2 or 3.
  TvBallSamples(std::size_t n, std::size_t directions, std::uint64_t seed = 1);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::vector<double>>& basis() const { return basis_; }

  std::size_t size() const { return samples_.size() / basis_.size(); }
  std::vector<double> sample(std::size_t k) const {
    return {samples_.begin() + static_cast<std::ptrdiff_t>(k * dim()),
            samples_.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim())};
  }

  std::vector<double> coordinates(const GridImage& v) const;
  GridImage image(std::span<const double> coords) const;

  /// max_k <z_k, c>
  double dual_norm_estimate(std::span<const double> coords) const;
  /// Same, with early exit once a sample exceeds `bound`.
  bool dual_norm_at_most(std::span<const double> coords, double bound) const;

 private:
  std::size_t n_;
  std::vector<std::vector<double>> basis_;
  std::vector<double> samples_;  // row-major, dim() columns
};

/// Dual norm of TV on mean-zero images by maximizing <x, v> / tv(x) over
/// sampled directions followed by a shrinking pattern search (n <= 3).
double oracle_tv_dual_norm(const GridImage& v, std::size_t directions = 20000, std::size_t refine_steps = 60);

struct TvOracleResult {
  double value = 0.0;
  std::vector<GridImage> argmin_samples;
  double tolerance = 0.0;
};

/// Brute-force min { tv(f0 - v) : v mean-zero, dual norm of v <= 1 } over a grid
/// of the mean-zero subspace, membership by sampled dual-norm evaluation.
/// Throws std::invalid_argument if n > 3 or f0 does not have zero mean.
TvOracleResult oracle_tv_min(const GridImage& f0, const GridSearchSpec& spec, std::size_t directions = 4000);

/// Same problem without the mean-zero reduction: minimizes
/// tv(f - x) + J*(x) over a grid of all of X, where J*(x) is +infinity unless x
/// has zero mean and dual norm at most 1. Uses an odd number of points on the
/// constant axis so the mean-zero slice is sampled exactly.
TvOracleResult oracle_tv_min_unreduced(const GridImage& f, const GridSearchSpec& spec,
                                       std::size_t directions = 4000);

}  // namespace tvpolar
