#include "tvpolar/projection_solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvpolar/random.hpp"

namespace tvpolar {

Vec clamp_project(std::span<const double> f) {
  Vec out(f.begin(), f.end());
  for (double& x : out) x = std::clamp(x, -1.0, 1.0);
  return out;
}

namespace {

// Row of the projection LP in the variables (x_1, x_2, t): coef . z <= rhs.
struct LpRow {
  std::array<double, 3> coef;
  double rhs;
};

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Extreme points of a set of (nearly) collinear planar points.
std::vector<Vec> segment_endpoints(std::vector<Vec> pts, double tol) {
  std::vector<Vec> uniq;
  for (Vec& p : pts) {
    const bool dup = std::any_of(uniq.begin(), uniq.end(), [&](const Vec& q) { return distance(p, q) <= tol; });
    if (!dup) uniq.push_back(std::move(p));
  }
  if (uniq.size() <= 1) return uniq;
  auto farthest_from = [&](const Vec& o) {
    return *std::max_element(uniq.begin(), uniq.end(),
                             [&](const Vec& a, const Vec& b) { return distance(a, o) < distance(b, o); });
  };
  Vec e1 = farthest_from(uniq.front());
  Vec e2 = farthest_from(e1);
  std::vector<Vec> out{e1, e2};
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ArgminFace project_onto_polar(const PolytopeNorm& p, std::span<const double> x0, double face_tol) {
  if (p.dim() != 2 || x0.size() != 2) throw std::invalid_argument("project_onto_polar: dim must be 2");
  const Vec x0v(x0.begin(), x0.end());
  if (dual_norm(p, x0) <= 1.0) return {0.0, {x0v}, true};

  std::vector<LpRow> rows;
  for (const Halfspace& h : p.halfspaces()) {
    rows.push_back({{-h.normal[0], -h.normal[1], -1.0}, -dot(h.normal, x0)});
  }
  const std::size_t first_dual = rows.size();
  for (const Vec& v : p.vertices()) rows.push_back({{v[0], v[1], 0.0}, 1.0});

  double scale = std::max(1.0, norm_inf(x0));
  for (const LpRow& r : rows) scale = std::max(scale, std::abs(r.rhs));
  const double feas_tol = 1e-9 * scale;

  struct Basic {
    Vec x;
    double t;
  };
  std::vector<Basic> feasible;
  const std::size_t m = rows.size();
  auto row_norm = [](const LpRow& r) { return std::hypot(r.coef[0], r.coef[1], r.coef[2]); };
  // Bases made of three dual-ball rows leave t undetermined, so i ranges over objective rows.
  for (std::size_t i = 0; i < first_dual; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        const std::array<std::array<double, 3>, 3> a{rows[i].coef, rows[j].coef, rows[k].coef};
        const double det = det3(a);
        if (std::abs(det) <= 1e-12 * row_norm(rows[i]) * row_norm(rows[j]) * row_norm(rows[k])) continue;
        const std::array<double, 3> b{rows[i].rhs, rows[j].rhs, rows[k].rhs};
        std::array<double, 3> z{};
        for (std::size_t c = 0; c < 3; ++c) {
          auto ac = a;
          for (std::size_t r = 0; r < 3; ++r) ac[r][c] = b[r];
          z[c] = det3(ac) / det;
        }
        bool ok = true;
        for (const LpRow& r : rows) {
          if (r.coef[0] * z[0] + r.coef[1] * z[1] + r.coef[2] * z[2] > r.rhs + feas_tol) {
            ok = false;
            break;
          }
        }
        if (ok) feasible.push_back({{z[0] + 0.0, z[1] + 0.0}, z[2]});
      }
  if (feasible.empty()) throw std::runtime_error("project_onto_polar: no feasible basic solution");

  double best = std::numeric_limits<double>::infinity();
  for (const Basic& b : feasible) best = std::min(best, b.t);
  std::vector<Vec> face;
  for (Basic& b : feasible) {
    if (b.t <= best + face_tol) face.push_back(std::move(b.x));
  }
  ArgminFace out;
  out.face_vertices = segment_endpoints(std::move(face), 1e-9 * scale);
  out.optimal_value = std::numeric_limits<double>::infinity();
  for (const Vec& x : out.face_vertices) out.optimal_value = std::min(out.optimal_value, gauge(p, x0v - x));
  out.is_unique = out.face_vertices.size() == 1;
  return out;
}

NonUniqueInstance witness_from_triple(const PolytopeNorm& p, const WTriple& w) {
  if (p.dim() != 2) throw std::invalid_argument("witness_from_triple: dim must be 2");
  const auto triples = w_set(p);
  const bool member = std::any_of(triples.begin(), triples.end(), [&](const WTriple& t) {
    return norm_inf(t.x1 - w.x1) <= 1e-12 && norm_inf(t.x2 - w.x2) <= 1e-12 && norm_inf(t.x3 - w.x3) <= 1e-12;
  });
  if (!member) throw std::invalid_argument("witness_from_triple: triple is not in the W-set");

  // Face of the dual ball exposed by x1: dual vertices y with x1 . y = 1.
  std::vector<Vec> face;
  for (const Halfspace& h : p.halfspaces()) {
    if (dot(w.x1, h.normal) >= 1.0 - 1e-9) face.push_back(h.normal);
  }
  if (face.size() != 2) {
    throw std::runtime_error("witness_from_triple: vertex does not expose an edge of the dual ball");
  }
  std::sort(face.begin(), face.end());

  // The copy of [x2, x3] whose outward normal points along -x1.
  const double sign = dot(w.x1, w.x2) < 0.0 ? 1.0 : -1.0;
  Vec ua = sign * w.x2;
  Vec ub = sign * w.x3;
  Vec normal;
  for (const Halfspace& h : p.halfspaces()) {
    if (dot(h.normal, ua) >= 1.0 - 1e-9 && dot(h.normal, ub) >= 1.0 - 1e-9) normal = h.normal;
  }
  const Vec dw = face[0] - face[1];
  Vec du = ua - ub;
  const double crs = dw[0] * du[1] - dw[1] * du[0];
  if (normal.empty() || std::abs(crs) > 1e-9 * norm2(dw) * norm2(du)) {
    throw std::runtime_error("witness_from_triple: no unit-ball edge parallel to the exposed dual face");
  }
  if (dot(dw, du) < 0.0) std::swap(ua, ub);

  NonUniqueInstance inst;
  inst.w1 = face[0];
  inst.w2 = face[1];
  inst.u1 = std::move(ua);
  inst.u2 = std::move(ub);
  inst.r = norm2(dw) / norm2(inst.u1 - inst.u2);
  inst.x0 = inst.w1 - inst.r * inst.u1;
  inst.a = std::move(normal);
  return inst;
}

namespace {

// Objective tv(div(h - g0)) and the normalized gradient field q of div(h - g0).
class TvComposite {
 public:
  explicit TvComposite(const VectorField& g0)
      : g0_(g0), diff_(g0.n()), w_(g0.n()), grad_(g0.n()), q_(g0.n()), mags_(g0.n() * g0.n()) {}

  double evaluate(const VectorField& h) {
    diff_ = h;
    diff_ -= g0_;
    detail::divergence_into(diff_, w_);
    detail::gradient_into(w_, grad_);
    const auto g1 = grad_.comp1.values();
    const auto g2 = grad_.comp2.values();
    auto q1 = q_.comp1.values();
    auto q2 = q_.comp2.values();
    for (std::size_t k = 0; k < mags_.size(); ++k) {
      const double m = std::hypot(g1[k], g2[k]);
      mags_[k] = m;
      q1[k] = m > 0.0 ? g1[k] / m : 0.0;
      q2[k] = m > 0.0 ? g2[k] / m : 0.0;
    }
    return detail::pairwise_sum(mags_);
  }

  // grad(div q), the subgradient of h -> tv(div(h - g0)) at the last evaluated h.
  void subgradient(VectorField& out) {
    detail::divergence_into(q_, w_);
    detail::gradient_into(w_, out);
  }

 private:
  const VectorField& g0_;
  VectorField diff_;
  GridImage w_;
  VectorField grad_;
  VectorField q_;
  std::vector<double> mags_;
};

void project_unit_disk(VectorField& h) {
  auto a = h.comp1.values();
  auto b = h.comp2.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double m = std::hypot(a[k], b[k]);
    if (m > 1.0) {
      a[k] /= m;
      b[k] /= m;
    }
  }
}

}  // namespace

SubgradientResult tv_projected_subgradient(const VectorField& g0, const SubgradientConfig& cfg,
                                           const VectorField& h_init) {
  if (g0.n() != h_init.n()) throw std::invalid_argument("tv_projected_subgradient: field sizes differ");
  if (field_sup_norm(h_init) > 1.0 + 1e-12) {
    throw std::invalid_argument("tv_projected_subgradient: initial field violates |h|_inf <= 1");
  }
  if (!(cfg.step_scale > 0.0) || !(cfg.step_exponent >= 0.0) || cfg.max_iters < 1 || cfg.window < 1) {
    throw std::invalid_argument("tv_projected_subgradient: invalid configuration");
  }

  const std::size_t n = g0.n();
  const double pixel_count = static_cast<double>(n * n);
  TvComposite objective(g0);
  VectorField h = h_init;
  VectorField step_dir(n);

  SubgradientResult res;
  res.trace.reserve(cfg.max_iters + 1);
  double value = objective.evaluate(h);
  res.h = h;
  res.value = value;
  res.trace.push_back(value);
  double window_start = value;

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    if (res.value == 0.0) break;
    objective.subgradient(step_dir);
    const double s_norm = norm(step_dir);
    if (s_norm == 0.0) break;
    res.iterations = k;
    step_dir *= pixel_count * cfg.step_scale / (std::pow(static_cast<double>(k), cfg.step_exponent) * s_norm);
    h -= step_dir;
    project_unit_disk(h);
    value = objective.evaluate(h);
    if (value < res.value) {
      res.value = value;
      res.h = h;
    }
    res.trace.push_back(res.value);
    if (cfg.tolerance > 0.0 && k % cfg.window == 0) {
      if (window_start - res.value < cfg.tolerance) break;
      window_start = res.value;
    }
  }
  return res;
}

SubgradientResult tv_projected_subgradient(const VectorField& g0, const SubgradientConfig& cfg) {
  Rng rng(cfg.seed);
  return tv_projected_subgradient(g0, cfg, random_disk_field(g0.n(), rng));
}

VectorField field_with_divergence(const GridImage& f0) {
  if (!has_zero_mean(f0)) throw std::invalid_argument("field_with_divergence: image must have zero mean");
  return gradient(solve_neumann_poisson(-1.0 * f0));
}

}  // namespace tvpolar
