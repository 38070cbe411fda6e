// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 1 if any
// selected criterion fails. `--only <name>` runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "polygons.hpp"
#include "support.hpp"
#include "tvpolar/experiments.hpp"
#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/oracle.hpp"
#include "tvpolar/polytope_norms.hpp"
#include "tvpolar/projection_solvers.hpp"

using namespace tvpolar;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double l1_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

PolytopeNorm hexagon() {
  const std::vector<Vec> v{{0, 1}, {0.5, 0.5}, {0.5, -0.5}, {0, -1}, {-0.5, -0.5}, {-0.5, 0.5}};
  return PolytopeNorm::from_vertices(v);
}

Outcome adjointness() {
  Rng rng(101);
  double worst = 0.0;
  for (std::size_t n : {2, 4, 8, 16})
    for (int k = 0; k < 100; ++k) {
      const GridImage u = tvtest::random_image(n, rng, 3.0);
      const VectorField p = tvtest::random_field(n, rng, 2.0);
      const double gap = std::abs(-inner(divergence(p), u) - inner(p, gradient(u)));
      worst = std::max(worst, gap / (1.0 + norm(u) * norm(p)));
    }
  return {worst <= 1e-12, "worst scaled gap " + fmt("%.3g", worst)};
}

Outcome tv_formula() {
  Rng rng(102);
  int bad = 0;
  for (std::size_t n : {2, 8, 16})
    for (int k = 0; k < 20; ++k) {
      const double a = tvtest::uniform(rng, -5, 5);
      const double b = tvtest::uniform(rng, -5, 5);
      GridImage m(n, b);
      for (std::size_t j = 0; j < n; ++j) m(0, j) = a;
      if (tv(m) != static_cast<double>(n) * std::abs(b - a)) ++bad;
    }
  return {bad == 0, std::to_string(bad) + " of 60 step images differ from N|b-a|"};
}

Outcome hexagon_reproduction() {
  const PolytopeNorm p = hexagon();
  Rng rng(103);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Vec x = tvtest::random_vec(2, rng, 5.0);
    const double ax = std::abs(x[0]), ay = std::abs(x[1]);
    worst = std::max(worst, std::abs(gauge(p, x) - (ax + std::max(ax, ay))));
    worst = std::max(worst, std::abs(dual_norm(p, x) - (0.5 * ay + 0.5 * std::max(ax, ay))));
  }
  std::vector<Vec> got = polar(p).vertices();
  std::vector<Vec> want{{1, 1}, {2, 0}, {1, -1}, {-1, -1}, {-2, 0}, {-1, 1}};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  const bool polar_ok = got == want;

  const ArgminFace f = project_onto_polar(p, Vec{2, 2});
  const bool face_ok = std::abs(f.optimal_value - 2.0) <= 1e-9 && f.face_vertices.size() == 2 &&
                       norm_inf(f.face_vertices[0] - Vec{1, 1}) <= 1e-9 &&
                       norm_inf(f.face_vertices[1] - Vec{2, 0}) <= 1e-9 && !f.is_unique;

  bool witness_ok = false;
  for (const WTriple& t : w_set(p))
    if (norm_inf(t.x1 - Vec{0.5, 0.5}) == 0.0 && norm_inf(t.x2 - Vec{0.5, 0.5}) == 0.0 &&
        norm_inf(t.x3 - Vec{0, 1}) == 0.0)
      witness_ok = norm_inf(witness_from_triple(p, t).x0 - Vec{2, 2}) <= 1e-9;

  std::ostringstream d;
  d << "closed-form gap " << fmt("%.3g", worst) << ", polar " << (polar_ok ? "ok" : "wrong") << ", face "
    << (face_ok ? "ok" : "wrong") << ", witness " << (witness_ok ? "x0=(2,2)" : "wrong");
  return {worst <= 1e-12 && polar_ok && face_ok && witness_ok, d.str()};
}

Outcome clamp_law() {
  Rng rng(104);
  GridSearchSpec s;
  s.box_halfwidth = 1.0;
  s.points_per_axis = 41;
  s.refine_rounds = 4;
  int bad = 0;
  double coarsest = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = 1 + static_cast<std::size_t>(k % 3);
    const Vec f = tvtest::random_vec(dim, rng, 3.0);
    const Vec c = clamp_project(f);
    const OracleResult r = oracle_clamp(f, s);
    coarsest = std::max(coarsest, r.grid_step);
    const double exact = l1_dist(f, c);
    bool ok = r.grid_step <= 1e-3 && r.value >= exact && r.value - exact <= r.tolerance;
    // |f - q|_1 - |f - c|_1 = |q - c|_1 on the box, so every near-optimal sample is near c.
    for (const Vec& q : r.argmin_samples) ok = ok && l1_dist(q, c) <= r.value - exact + 2.0 * r.tolerance + 1e-12;
    if (!ok) ++bad;
  }
  int beaten = 0;
  const Vec f = tvtest::random_vec(3, rng, 3.0);
  const Vec c = clamp_project(f);
  for (int k = 0; k < 10000; ++k) {
    const Vec u = tvtest::random_vec(3, rng, 1.0);
    if (u != c && !(l1_dist(f, c) < l1_dist(f, u))) ++beaten;
  }
  return {bad == 0 && beaten == 0, std::to_string(bad) + " oracle mismatches (step <= " + fmt("%.2g", coarsest) +
                                       "), " + std::to_string(beaten) + " of 10000 competitors not dominated"};
}

struct Sweep {
  int polygons = 0;
  int disagreements = 0;
  int nonempty = 0;
  int triples = 0;
  int unsound = 0;
};

const Sweep& uniqueness_sweep() {
  static const Sweep s = [] {
    Sweep r;
    Rng rng(derive_seed(2024, {5}));
    for (int i = 0; i < 50; ++i) {
      const PolytopeNorm p = tvtest::random_symmetric_polygon(rng, i % 2 == 0);
      ++r.polygons;
      const std::vector<WTriple> w = w_set(p, 1e-9);
      bool all_unique = true;
      for (int a = 0; a < 41 && all_unique; ++a)
        for (int b = 0; b < 41 && all_unique; ++b)
          all_unique = project_onto_polar(p, Vec{-3 + 0.15 * a, -3 + 0.15 * b}, 1e-9).is_unique;
      if (w.empty() != all_unique) ++r.disagreements;
      if (!w.empty()) ++r.nonempty;
      for (const WTriple& t : w) {
        ++r.triples;
        const NonUniqueInstance inst = witness_from_triple(p, t);
        const ArgminFace f = project_onto_polar(p, inst.x0, 1e-9);
        const double g1 = gauge(p, inst.x0 - inst.w1);
        const double g2 = gauge(p, inst.x0 - inst.w2);
        const bool ok = f.face_vertices.size() >= 2 && std::abs(g1 - g2) <= 1e-9 &&
                        std::abs(g1 - f.optimal_value) <= 1e-9;
        if (!ok) ++r.unsound;
      }
    }
    return r;
  }();
  return s;
}

Outcome w_set_uniqueness() {
  const Sweep& s = uniqueness_sweep();
  return {s.disagreements == 0 && s.nonempty > 0,
          std::to_string(s.disagreements) + " disagreements over " + std::to_string(s.polygons) + " polygons (" +
              std::to_string(s.nonempty) + " with nonempty W)"};
}

Outcome witness_soundness() {
  const Sweep& s = uniqueness_sweep();
  return {s.unsound == 0 && s.triples > 0,
          std::to_string(s.unsound) + " unsound of " + std::to_string(s.triples) + " witnesses"};
}

Outcome experiment() {
  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  ExperimentConfig c8;
  c8.n = 8;
  c8.num_starts = 50;
  c8.iters = 20000;
  c8.margin = 0.1;
  c8.experiment_count = 5;
  c8.threads = threads;
  const ExperimentReport r8 = run_experiment(c8);
  double max8 = 0.0;
  bool monotone = true;
  for (const ExperimentRow& r : r8.rows) {
    max8 = std::max(max8, r.diameter);
    monotone = monotone && r.traces_nonincreasing;
  }

  ExperimentConfig c16 = c8;
  c16.n = 16;
  c16.iters = 50000;
  const ExperimentReport r16 = run_experiment(c16);
  double max16 = 0.0;
  std::string list;
  for (const ExperimentRow& r : r16.rows) {
    max16 = std::max(max16, r.diameter);
    monotone = monotone && r.traces_nonincreasing;
    list += (list.empty() ? "" : " ") + fmt("%.4g", r.diameter);
  }
  return {max8 <= 0.05 && max16 <= 0.02 && monotone,
          "n=8 max diameter " + fmt("%.4g", max8) + " (<= 0.05), n=16 diameters " + list +
              " (<= 0.02), traces " + (monotone ? "nonincreasing" : "NOT monotone")};
}

Outcome mean_zero_reduction() {
  Rng rng(105);
  int exact_bad = 0;
  double ulp_worst = 0.0;
  for (std::size_t n : {2, 3}) {
    for (int k = 0; k < 50; ++k) {
      // Dyadic entries with the sum a multiple of n^2 / 8: the mean and the
      // subtraction are exact.
      GridImage f = tvtest::dyadic_image(n, rng);
      const double eighths = std::round(8.0 * detail::pairwise_sum(f.values()));
      const double nn = static_cast<double>(n * n);
      f(0, 0) -= std::fmod(eighths, nn) / 8.0;
      if (tv(mean_zero_split(f).f0) != tv(f)) ++exact_bad;
      const GridImage g = tvtest::random_image(n, rng, 5.0);
      const double t = tv(g);
      ulp_worst = std::max(ulp_worst, std::abs(tv(mean_zero_split(g).f0) - t) / (t * 0x1.0p-52));
    }
  }
  GridSearchSpec s;
  s.points_per_axis = 41;
  int oracle_bad = 0;
  double worst_gap = 0.0;
  for (int k = 0; k < 5; ++k) {
    const GridImage f = tvtest::random_image(2, rng, 3.0);
    const TvOracleResult reduced = oracle_tv_min(mean_zero_split(f).f0, s, 4000);
    const TvOracleResult full = oracle_tv_min_unreduced(f, s, 4000);
    const double gap = std::abs(reduced.value - full.value);
    worst_gap = std::max(worst_gap, gap);
    if (gap > std::max(reduced.tolerance, full.tolerance)) ++oracle_bad;
  }
  return {exact_bad == 0 && oracle_bad == 0,
          std::to_string(exact_bad) + " inexact tv(f0) on exact-mean inputs, " + fmt("%.3g", ulp_worst) +
              " ulp worst otherwise; reduced vs unreduced oracle worst gap " + fmt("%.3g", worst_gap) + " (" +
              std::to_string(oracle_bad) + " beyond tolerance)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--only") only = argv[i + 1];

  const std::vector<Criterion> criteria{
      {"adjointness", 1, adjointness},
      {"tv_formula", 1, tv_formula},
      {"hexagon", 1, hexagon_reproduction},
      {"clamp_law", 10, clamp_law},
      {"w_set_uniqueness", 60, w_set_uniqueness},
      {"witness_soundness", 60, witness_soundness},
      {"experiment", 600, experiment},
      {"mean_zero_reduction", 60, mean_zero_reduction},
  };

  int failures = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && c.name != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && s < c.budget_s;
    if (!pass) ++failures;
    std::printf("%s %s: %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), s,
                c.budget_s);
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::printf("FAIL unknown criterion '%s'\n", only.c_str());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
