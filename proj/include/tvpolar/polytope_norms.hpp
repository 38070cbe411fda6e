#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tvpolar/linalg.hpp"

namespace tvpolar {

/// Closed halfspace {x : normal . x <= offset}.
struct Halfspace {
  Vec normal;
  double offset = 1.0;
};

/// Gauge norm whose closed unit ball is a centrally symmetric polytope.
///
/// Canonical form: vertices are exactly the extreme points of the ball. In 2D
/// they are listed counter-clockwise starting from the smallest polar angle in
/// [0, 2pi), and halfspace k is the supporting line of the edge
/// (vertex k, vertex k+1). In dimensions 1, 3 and 4 both lists are sorted
/// lexicographically. Every halfspace has offset 1.
class PolytopeNorm {
 public:
  /// Canonicalizes a point cloud: symmetrizes it (adds -p for every p), drops
  /// duplicates and non-extreme points, and derives the halfspace form.
  /// Throws std::invalid_argument for empty input, mixed dimensions,
  /// non-finite coordinates, dim > 4, or a hull that is not full-dimensional
  /// (the origin would not be interior and the gauge would not be a norm).
  static PolytopeNorm from_vertices(std::span<const Vec> points);

  std::size_t dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  /// Indices of halfspaces with normal . x >= 1 - tol.
  std::vector<std::size_t> active_halfspaces(std::span<const double> x, double tol = 1e-9) const;

  friend PolytopeNorm polar(const PolytopeNorm& p);

 private:
  PolytopeNorm(std::size_t dim, std::vector<Vec> vertices, std::vector<Halfspace> halfspaces);

  std::size_t dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> halfspaces_;
};

/// Minkowski functional inf{t > 0 : x / t in ball} = max(0, max_k a_k . x).
double gauge(const PolytopeNorm& p, std::span<const double> x);

/// Support function of the unit ball, max over vertices of v . y.
double dual_norm(const PolytopeNorm& p, std::span<const double> y);

/// Polar body: its vertices are the halfspace normals of p and its halfspace
/// normals are the vertices of p. polar(polar(p)) reproduces p exactly.
PolytopeNorm polar(const PolytopeNorm& p);

using Edge = std::pair<Vec, Vec>;

/// Consecutive vertex pairs in counter-clockwise order (dim == 2 only).
std::vector<Edge> edges(const PolytopeNorm& p);

/// Vertex x1 together with a boundary segment [x2, x3] that is orthogonal to it.
struct WTriple {
  Vec x1;
  Vec x2;
  Vec x3;
};

/// All triples (x1, [x2, x3]) with x1 a vertex, [x2, x3] a segment of the
/// unit sphere between two distinct vertices, and
/// |x1 . (x2 - x3)| <= tol * |x2 - x3|.
///
/// In 2D the segments are the edges, oriented counter-clockwise, and an empty
/// result certifies that projection onto the dual ball is unique for every
/// point. In higher dimensions every vertex pair on a common facet is tested;
/// the result is a probe only (see w_set_certified).
std::vector<WTriple> w_set(const PolytopeNorm& p, double tol = 1e-9);

/// True when emptiness of w_set is a proven uniqueness certificate (dim == 2).
inline bool w_set_certified(const PolytopeNorm& p) { return p.dim() == 2; }

}  // namespace tvpolar
