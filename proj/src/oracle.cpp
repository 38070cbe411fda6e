#include "tvpolar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "tvpolar/random.hpp"

namespace tvpolar {

namespace {

struct Axis {
  double center;
  std::size_t count;  // always odd, so the center is a grid point
};

struct RoundResult {
  double min_value = std::numeric_limits<double>::infinity();
  std::vector<Vec> kept;
};

Vec decode(std::size_t index, const std::vector<Axis>& axes, double step) {
  Vec x(axes.size());
  for (std::size_t d = axes.size(); d-- > 0;) {
    const std::size_t i = index % axes[d].count;
    index /= axes[d].count;
    x[d] = axes[d].center +
           step * (static_cast<double>(i) - static_cast<double>(axes[d].count - 1) / 2.0);
  }
  return x;
}

RoundResult run_round(const std::vector<Axis>& axes, double step, double lipschitz, double reference,
                      const std::function<double(std::span<const double>)>& objective,
                      const std::function<bool(std::span<const double>)>& feasible) {
  std::size_t total = 1;
  for (const Axis& a : axes) total *= a.count;
  std::vector<double> values(total);
  for (std::size_t k = 0; k < total; ++k) values[k] = objective(decode(k, axes, step));
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });

  RoundResult res;
  const double band = 2.0 * step * lipschitz;
  for (std::size_t k : order) {
    const double limit = std::min(res.min_value, reference) + band;
    if (values[k] > limit) break;
    Vec x = decode(k, axes, step);
    if (!feasible(x)) continue;
    res.min_value = std::min(res.min_value, values[k]);
    res.kept.push_back(std::move(x));
  }
  return res;
}

}  // namespace

OracleResult grid_minimize(std::size_t dim, const std::function<double(std::span<const double>)>& objective,
                           const std::function<bool(std::span<const double>)>& feasible, double lipschitz,
                           const GridSearchSpec& spec) {
  if (spec.points_per_axis < 3) throw std::invalid_argument("GridSearchSpec: points_per_axis must be >= 3");
  if (!(spec.box_halfwidth > 0.0)) throw std::invalid_argument("GridSearchSpec: box_halfwidth must be > 0");

  const std::size_t m = spec.points_per_axis | 1;
  double step = 2.0 * spec.box_halfwidth / static_cast<double>(m - 1);
  std::vector<Axis> axes(dim, Axis{0.0, m});

  RoundResult round = run_round(axes, step, lipschitz, std::numeric_limits<double>::infinity(), objective, feasible);
  if (round.kept.empty()) throw std::runtime_error("grid_minimize: no feasible grid point");
  double best = round.min_value;

  for (std::size_t r = 0; r < spec.refine_rounds; ++r) {
    Vec lo = round.kept.front();
    Vec hi = round.kept.front();
    for (const Vec& x : round.kept)
      for (std::size_t d = 0; d < dim; ++d) {
        lo[d] = std::min(lo[d], x[d]);
        hi[d] = std::max(hi[d], x[d]);
      }
    const double old_step = step;
    double new_step = step / 4.0;
    std::vector<Axis> next(dim);
    for (;;) {
      double total = 1.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double half = (hi[d] - lo[d]) / 2.0 + 2.0 * old_step;
        const auto per_side = static_cast<std::size_t>(std::ceil(half / new_step - 1e-9));
        next[d] = Axis{(lo[d] + hi[d]) / 2.0, 2 * per_side + 1};
        total *= static_cast<double>(next[d].count);
      }
      if (total <= static_cast<double>(spec.max_points_per_round)) break;
      new_step *= 1.25;
    }
    if (new_step >= old_step) break;
    RoundResult refined = run_round(next, new_step, lipschitz, best, objective, feasible);
    if (refined.kept.empty()) break;
    step = new_step;
    best = std::min(best, refined.min_value);
    round = std::move(refined);
  }

  OracleResult out;
  out.value = best;
  out.grid_step = step;
  out.tolerance = step * lipschitz;
  out.argmin_samples = std::move(round.kept);
  return out;
}

OracleResult oracle_project(const PolytopeNorm& p, std::span<const double> x0, const GridSearchSpec& spec) {
  if (p.dim() != 2 || x0.size() != 2) throw std::invalid_argument("oracle_project: dim must be 2");
  const Vec target(x0.begin(), x0.end());
  double lip = 0.0;
  for (const Halfspace& h : p.halfspaces()) lip = std::max(lip, norm2(h.normal));
  return grid_minimize(
      2, [&](std::span<const double> x) { return gauge(p, Vec{target[0] - x[0], target[1] - x[1]}); },
      [&](std::span<const double> x) { return dual_norm(p, x) <= 1.0; }, lip, spec);
}

OracleResult oracle_clamp(std::span<const double> f, const GridSearchSpec& spec) {
  const Vec target(f.begin(), f.end());
  const std::size_t dim = target.size();
  return grid_minimize(
      dim,
      [&](std::span<const double> u) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += std::abs(target[k] - u[k]);
        return s;
      },
      [](std::span<const double> u) { return norm_inf(u) <= 1.0; }, std::sqrt(static_cast<double>(dim)), spec);
}

namespace {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Lipschitz constant of tv with respect to the Euclidean norm: at most n^2 - 1
// pixels carry a gradient and |grad|^2 <= 4 (1 - cos(pi (n-1) / n)) * 2.
double tv_lipschitz(std::size_t n) {
  const double nn = static_cast<double>(n);
  const double lam = 2.0 * (2.0 - 2.0 * std::cos(std::numbers::pi * (nn - 1.0) / nn));
  return std::sqrt(nn * nn - 1.0) * std::sqrt(lam);
}

}  // namespace

TvBallSamples::TvBallSamples(std::size_t n, std::size_t directions, std::uint64_t seed)
    : n_(n), basis_(mean_zero_basis(n)) {
  if (n < 2 || n > 3) throw std::invalid_argument("TvBallSamples: n must be 2 or 3");
  const std::size_t d = basis_.size();
  Rng rng(seed);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<double> c(d);
  for (std::size_t k = 0; k < directions; ++k) {
    if (d == 3) {
      const double y = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(directions);
      const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
      const double phi = golden * static_cast<double>(k);
      c = {r * std::cos(phi), y, r * std::sin(phi)};
    } else {
      for (double& x : c) x = gaussian(rng);
    }
    const double t = tv(image(c));
    if (t <= 0.0) continue;
    for (double x : c) samples_.push_back(x / t);
  }
}

std::vector<double> TvBallSamples::coordinates(const GridImage& v) const {
  std::vector<double> c(basis_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = dot(basis_[k], v.values());
  return c;
}

GridImage TvBallSamples::image(std::span<const double> coords) const {
  GridImage x(n_);
  auto vals = x.values();
  for (std::size_t k = 0; k < basis_.size(); ++k)
    for (std::size_t e = 0; e < vals.size(); ++e) vals[e] += coords[k] * basis_[k][e];
  return x;
}

double TvBallSamples::dual_norm_estimate(std::span<const double> coords) const {
  const std::size_t d = basis_.size();
  double best = 0.0;
  for (std::size_t off = 0; off < samples_.size(); off += d) {
    best = std::max(best, dot(std::span<const double>(samples_).subspan(off, d), coords));
  }
  return best;
}

bool TvBallSamples::dual_norm_at_most(std::span<const double> coords, double bound) const {
  const std::size_t d = basis_.size();
  for (std::size_t off = 0; off < samples_.size(); off += d) {
    if (dot(std::span<const double>(samples_).subspan(off, d), coords) > bound) return false;
  }
  return true;
}

double oracle_tv_dual_norm(const GridImage& v, std::size_t directions, std::size_t refine_steps) {
  if (v.n() <= 1) return 0.0;
  if (!has_zero_mean(v)) throw std::invalid_argument("oracle_tv_dual_norm: image must have zero mean");
  const TvBallSamples balls(v.n(), directions);
  const std::vector<double> cv = balls.coordinates(v);
  const std::size_t d = cv.size();
  auto ratio = [&](const std::vector<double>& c) {
    const double t = tv(balls.image(c));
    return t > 0.0 ? dot(c, cv) / t : 0.0;
  };

  // Best sampled direction, then a compass search.
  std::vector<double> best_c(d, 0.0);
  double best = 0.0;
  for (std::size_t k = 0; k < balls.size(); ++k) {
    std::vector<double> c = balls.sample(k);
    const double r = dot(c, cv);
    if (r > best) {
      best = r;
      best_c = std::move(c);
    }
  }
  if (best == 0.0) return 0.0;
  double radius = norm2(best_c) / std::sqrt(static_cast<double>(balls.size()));
  for (std::size_t step = 0; step < refine_steps; ++step) {
    bool improved = false;
    for (std::size_t j = 0; j < d; ++j)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> trial = best_c;
        trial[j] += sgn * radius;
        const double r = ratio(trial);
        if (r > best) {
          best = r;
          best_c = std::move(trial);
          improved = true;
        }
      }
    if (!improved) radius /= 2.0;
  }
  return best;
}

TvOracleResult oracle_tv_min(const GridImage& f0, const GridSearchSpec& spec, std::size_t directions) {
  const std::size_t n = f0.n();
  if (n > 3) throw std::invalid_argument("oracle_tv_min: n must be at most 3");
  if (!has_zero_mean(f0)) throw std::invalid_argument("oracle_tv_min: f0 must have zero mean");
  if (n <= 1) return {0.0, {GridImage(n)}, 0.0};

  const TvBallSamples balls(n, directions);
  const OracleResult r = grid_minimize(
      balls.dim(), [&](std::span<const double> c) { return tv(f0 - balls.image(c)); },
      [&](std::span<const double> c) { return balls.dual_norm_at_most(c, 1.0); }, tv_lipschitz(n), spec);
  TvOracleResult out{r.value, {}, r.tolerance};
  for (const Vec& c : r.argmin_samples) out.argmin_samples.push_back(balls.image(c));
  return out;
}

TvOracleResult oracle_tv_min_unreduced(const GridImage& f, const GridSearchSpec& spec, std::size_t directions) {
  const std::size_t n = f.n();
  if (n > 3) throw std::invalid_argument("oracle_tv_min_unreduced: n must be at most 3");
  if (n <= 1) return {0.0, {GridImage(n)}, 0.0};

  const TvBallSamples balls(n, directions);
  std::vector<std::vector<double>> basis = mean_zero_basis(n);
  basis.emplace_back(n * n, 1.0 / static_cast<double>(n));
  auto image = [&](std::span<const double> c) {
    GridImage x(n);
    auto vals = x.values();
    for (std::size_t k = 0; k < basis.size(); ++k)
      for (std::size_t e = 0; e < vals.size(); ++e) vals[e] += c[k] * basis[k][e];
    return x;
  };
  // Legendre transform of tv: zero on the mean-zero dual ball, +infinity elsewhere.
  auto conjugate_is_finite = [&](std::span<const double> c) {
    const GridImage x = image(c);
    double scale = 1.0;
    for (double e : x.values()) scale = std::max(scale, std::abs(e));
    if (std::abs(detail::pairwise_sum(x.values())) > 1e-12 * static_cast<double>(n * n) * scale) return false;
    return balls.dual_norm_at_most(balls.coordinates(x), 1.0);
  };
  const OracleResult r = grid_minimize(
      basis.size(), [&](std::span<const double> c) { return tv(f - image(c)); }, conjugate_is_finite,
      tv_lipschitz(n), spec);
  TvOracleResult out{r.value, {}, r.tolerance};
  for (const Vec& c : r.argmin_samples) out.argmin_samples.push_back(image(c));
  return out;
}

}  // namespace tvpolar
