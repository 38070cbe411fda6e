#include "tvpolar/polytope_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tvpolar {

namespace {

constexpr double kDedupTol = 1e-12;
constexpr double kFacetTol = 1e-9;
constexpr std::size_t kMaxDim = 4;

double polar_angle(const Vec& v) {
  double a = std::atan2(v[1], v[0]);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Vec> dedup(std::vector<Vec> pts, double tol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vec> out;
  for (Vec& p : pts) {
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Vec& q) { return norm_inf(p - q) <= tol; });
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

// Counter-clockwise strictly convex hull (collinear points dropped).
std::vector<Vec> hull_2d(std::vector<Vec> pts, double scale) {
  std::sort(pts.begin(), pts.end(), lex_less);
  const double eps = kDedupTol * scale * scale;
  std::vector<Vec> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= eps) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  return h;
}

void rotate_to_min_angle(std::vector<Vec>& ccw) {
  const auto first = std::min_element(ccw.begin(), ccw.end(), [](const Vec& a, const Vec& b) {
    return polar_angle(a) < polar_angle(b);
  });
  std::rotate(ccw.begin(), first, ccw.end());
}

Vec normal_through(const Vec& a, const Vec& b) {
  auto sol = solve_linear({a[0], a[1], b[0], b[1]}, {1.0, 1.0});
  if (!sol) throw std::invalid_argument("PolytopeNorm: edge passes through the origin");
  return *sol;
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  const auto& visit) {
  if (cur.size() == k) {
    visit(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, visit);
    cur.pop_back();
  }
}

// Facet normals (offset 1) of the hull of a full-dimensional symmetric set.
std::vector<Vec> enumerate_facets(const std::vector<Vec>& pts, std::size_t dim) {
  std::vector<Vec> normals;
  std::vector<std::size_t> cur;
  combinations(pts.size(), dim, 0, cur, [&](const std::vector<std::size_t>& idx) {
    std::vector<double> a;
    for (std::size_t i : idx) a.insert(a.end(), pts[i].begin(), pts[i].end());
    auto sol = solve_linear(std::move(a), Vec(dim, 1.0));
    if (!sol) return;
    for (const Vec& w : pts) {
      if (dot(*sol, w) > 1.0 + kFacetTol) return;
    }
    const bool dup = std::any_of(normals.begin(), normals.end(), [&](const Vec& m) {
      return norm_inf(m - *sol) <= kFacetTol * std::max(1.0, norm_inf(m));
    });
    if (!dup) normals.push_back(std::move(*sol));
  });
  std::sort(normals.begin(), normals.end(), lex_less);
  return normals;
}

}  // namespace

PolytopeNorm::PolytopeNorm(std::size_t dim, std::vector<Vec> vertices, std::vector<Halfspace> halfspaces)
    : dim_(dim), vertices_(std::move(vertices)), halfspaces_(std::move(halfspaces)) {}

PolytopeNorm PolytopeNorm::from_vertices(std::span<const Vec> points) {
  if (points.empty()) throw std::invalid_argument("PolytopeNorm: no points given");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw std::invalid_argument("PolytopeNorm: zero-dimensional points");
  if (dim > kMaxDim) {
    throw std::invalid_argument("PolytopeNorm: dimension " + std::to_string(dim) +
                                " exceeds the supported maximum of 4");
  }
  double scale = 0.0;
  std::vector<Vec> sym;
  for (const Vec& p : points) {
    if (p.size() != dim) throw std::invalid_argument("PolytopeNorm: mixed point dimensions");
    for (double x : p) {
      if (!std::isfinite(x)) throw std::invalid_argument("PolytopeNorm: non-finite coordinate");
    }
    scale = std::max(scale, norm_inf(p));
    Vec pos = p;
    Vec neg = -p;
    for (std::size_t i = 0; i < dim; ++i) {
      pos[i] += 0.0;
      neg[i] += 0.0;
    }
    sym.push_back(std::move(pos));
    sym.push_back(std::move(neg));
  }
  if (scale == 0.0) throw std::invalid_argument("PolytopeNorm: origin is not interior to the hull");
  sym = dedup(std::move(sym), kDedupTol * std::max(1.0, scale));
  if (matrix_rank(sym) < dim) {
    throw std::invalid_argument("PolytopeNorm: hull is not full-dimensional, origin is not interior");
  }

  if (dim == 2) {
    std::vector<Vec> verts = hull_2d(std::move(sym), scale);
    if (verts.size() < 4) throw std::invalid_argument("PolytopeNorm: degenerate polygon");
    rotate_to_min_angle(verts);
    std::vector<Halfspace> hs;
    for (std::size_t k = 0; k < verts.size(); ++k) {
      hs.push_back({normal_through(verts[k], verts[(k + 1) % verts.size()]), 1.0});
    }
    return PolytopeNorm(dim, std::move(verts), std::move(hs));
  }

  std::vector<Vec> normals = enumerate_facets(sym, dim);
  std::vector<Vec> verts;
  for (const Vec& p : sym) {
    std::vector<Vec> active;
    for (const Vec& a : normals) {
      if (dot(a, p) >= 1.0 - kFacetTol) active.push_back(a);
    }
    if (matrix_rank(active) == dim) verts.push_back(p);
  }
  std::vector<Halfspace> hs;
  for (Vec& a : normals) hs.push_back({std::move(a), 1.0});
  return PolytopeNorm(dim, std::move(verts), std::move(hs));
}

std::vector<std::size_t> PolytopeNorm::active_halfspaces(std::span<const double> x, double tol) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) {
    if (dot(halfspaces_[k].normal, x) >= halfspaces_[k].offset - tol) out.push_back(k);
  }
  return out;
}

double gauge(const PolytopeNorm& p, std::span<const double> x) {
  double best = 0.0;
  for (const Halfspace& h : p.halfspaces()) best = std::max(best, dot(h.normal, x));
  return best;
}

double dual_norm(const PolytopeNorm& p, std::span<const double> y) {
  double best = 0.0;
  for (const Vec& v : p.vertices()) best = std::max(best, dot(v, y));
  return best;
}

PolytopeNorm polar(const PolytopeNorm& p) {
  const auto& verts = p.vertices();
  const auto& hs = p.halfspaces();
  const std::size_t k = verts.size();
  if (p.dim() == 2) {
    // Edge j of p is (v_j, v_j+1); consecutive polar vertices a_j, a_j+1 share v_j+1.
    std::size_t start = 0;
    for (std::size_t j = 1; j < hs.size(); ++j) {
      if (polar_angle(hs[j].normal) < polar_angle(hs[start].normal)) start = j;
    }
    std::vector<Vec> pv;
    std::vector<Halfspace> ph;
    for (std::size_t j = 0; j < hs.size(); ++j) {
      pv.push_back(hs[(j + start) % hs.size()].normal);
      ph.push_back({verts[(j + start + 1) % k], 1.0});
    }
    return PolytopeNorm(2, std::move(pv), std::move(ph));
  }
  std::vector<Vec> pv;
  for (const Halfspace& h : hs) pv.push_back(h.normal);
  std::sort(pv.begin(), pv.end(), lex_less);
  std::vector<Vec> sorted_verts = verts;
  std::sort(sorted_verts.begin(), sorted_verts.end(), lex_less);
  std::vector<Halfspace> ph;
  for (Vec& v : sorted_verts) ph.push_back({std::move(v), 1.0});
  return PolytopeNorm(p.dim(), std::move(pv), std::move(ph));
}

std::vector<Edge> edges(const PolytopeNorm& p) {
  if (p.dim() != 2) throw std::invalid_argument("edges: only defined for dim == 2");
  const auto& v = p.vertices();
  std::vector<Edge> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.emplace_back(v[k], v[(k + 1) % v.size()]);
  return out;
}

std::vector<WTriple> w_set(const PolytopeNorm& p, double tol) {
  std::vector<Edge> segments;
  if (p.dim() == 2) {
    segments = edges(p);
  } else {
    const auto& v = p.vertices();
    std::vector<std::vector<std::size_t>> active(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) active[i] = p.active_halfspaces(v[i]);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        const bool share = std::any_of(active[i].begin(), active[i].end(), [&](std::size_t h) {
          return std::find(active[j].begin(), active[j].end(), h) != active[j].end();
        });
        if (share) segments.emplace_back(v[i], v[j]);
      }
  }
  std::vector<WTriple> out;
  for (const Vec& x1 : p.vertices()) {
    for (const auto& [x2, x3] : segments) {
      const Vec d = x2 - x3;
      if (std::abs(dot(x1, d)) <= tol * norm2(d)) out.push_back({x1, x2, x3});
    }
  }
  return out;
}

}  // namespace tvpolar
