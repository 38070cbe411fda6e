#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/linalg.hpp"
#include "tvpolar/polytope_norms.hpp"

namespace tvpolar {

/// Componentwise clamp to [-1, 1]: the unique l1-nearest point of the
/// l-infinity unit ball.
Vec clamp_project(std::span<const double> f);

/// Exact solution set of min { gauge(x0 - x) : dual_norm(x) <= 1 }.
struct ArgminFace {
  double optimal_value = 0.0;
  std::vector<Vec> face_vertices;  ///< extreme points, sorted lexicographically
  bool is_unique = true;
};

/// Solves the projection onto the dual unit ball as the linear program
///   min t  s.t.  a_i . (x0 - x) <= t  (unit-ball halfspaces),
///                v_j . x <= 1         (unit-ball vertices = dual-ball halfspaces),
/// by enumerating every basis of three active constraints. The argmin face is
/// the hull of the feasible basic solutions whose t lies within face_tol of the
/// optimum. dim == 2 only.
ArgminFace project_onto_polar(const PolytopeNorm& p, std::span<const double> x0, double face_tol = 1e-9);

/// Point with two distinct nearest points in the dual ball, built from a
/// W-triple. Satisfies w1 - w2 = r (u1 - u2) with r > 0, x0 = w1 - r u1, the
/// dual ball lies in {x : a . x >= a . w1} and the unit ball in
/// {x : a . x <= a . u1}.
struct NonUniqueInstance {
  Vec x0;
  Vec w1;
  Vec w2;
  Vec u1;
  Vec u2;
  double r = 0.0;
  Vec a;
};

/// Throws std::invalid_argument if the triple does not belong to p's W-set or
/// dim != 2, and std::runtime_error if no parallel unit-ball edge exists.
NonUniqueInstance witness_from_triple(const PolytopeNorm& p, const WTriple& w);

struct SubgradientConfig {
  std::size_t max_iters = 20000;
  double step_scale = 1.0;     ///< c in step_k = c * n^2 / k^exponent
  double step_exponent = 1.0;
  std::uint64_t seed = 0;      ///< used only when the initial field is drawn
  double tolerance = 1e-12;    ///< minimum best-value decrease per window; <= 0 disables the check
  std::size_t window = 1000;
};

struct SubgradientResult {
  VectorField h;              ///< best iterate
  double value = 0.0;         ///< tv(div(h - g0))
  std::vector<double> trace;  ///< best value after iteration k (trace[0] = initial)
  std::size_t iterations = 0;
};

/// Projected subgradient method for
///   min { tv(div(h - g0)) : field_sup_norm(h) <= 1 }.
/// Uses the subgradient s = grad(div q), q the pixelwise normalized gradient of
/// div(h - g0) (zero where it vanishes), moves h by step_k along s / |s| and
/// projects each pixel radially onto the unit disk. Stops after max_iters or when the best value improves by
/// less than tolerance over a window of iterations. Throws
/// std::invalid_argument on size mismatch, infeasible h_init or bad config.
SubgradientResult tv_projected_subgradient(const VectorField& g0, const SubgradientConfig& cfg,
                                           const VectorField& h_init);

/// Same, with h_init drawn pixelwise uniformly from the unit disk using cfg.seed.
SubgradientResult tv_projected_subgradient(const VectorField& g0, const SubgradientConfig& cfg);

/// Field g0 with div g0 = f0 (f0 must have zero mean), of minimal norm.
VectorField field_with_divergence(const GridImage& f0);

}  // namespace tvpolar
