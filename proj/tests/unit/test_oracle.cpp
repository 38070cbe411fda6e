#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "polygons.hpp"
#include "support.hpp"
#include "tvpolar/io.hpp"
#include "tvpolar/oracle.hpp"
#include "tvpolar/projection_solvers.hpp"

using namespace tvpolar;

namespace {

PolytopeNorm hexagon() { return PolytopeNorm::from_vertices(read_polygon_file(tvtest::fixture("hexagon.txt"))); }
PolytopeNorm l1_ball() { return PolytopeNorm::from_vertices(read_polygon_file(tvtest::fixture("l1ball.txt"))); }

double segment_distance(const Vec& q, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double t = std::clamp(dot(q - a, ab) / dot(ab, ab), 0.0, 1.0);
  return norm2(q - (a + t * ab));
}

double face_distance(const Vec& q, const ArgminFace& f) {
  if (f.face_vertices.size() == 1) return norm2(q - f.face_vertices[0]);
  return segment_distance(q, f.face_vertices.front(), f.face_vertices.back());
}

double l1_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double lipschitz(const PolytopeNorm& p) {
  double l = 0.0;
  for (const Halfspace& h : p.halfspaces()) l = std::max(l, norm2(h.normal));
  return l;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("grid search input checks") {
    GridSearchSpec s;
    s.points_per_axis = 2;
    const auto obj = [](std::span<const double> x) { return std::abs(x[0]); };
    const auto all = [](std::span<const double>) { return true; };
    CHECK_THROWS_AS(grid_minimize(1, obj, all, 1.0, s), std::invalid_argument);
    s.points_per_axis = 11;
    CHECK_THROWS_AS(grid_minimize(1, obj, [](std::span<const double>) { return false; }, 1.0, s),
                    std::runtime_error);
    const OracleResult r = grid_minimize(1, obj, all, 1.0, s);
    CHECK(r.value == 0.0);
    CHECK(r.tolerance == r.grid_step);
  }

  TEST_CASE("hexagon at (2,2) with 401 points per axis") {
    GridSearchSpec s;
    s.points_per_axis = 401;
    const OracleResult r = oracle_project(hexagon(), Vec{2, 2}, s);
    CHECK(std::abs(r.value - 2.0) <= 0.02);
    REQUIRE(!r.argmin_samples.empty());
    for (const Vec& q : r.argmin_samples) CHECK(segment_distance(q, {1, 1}, {2, 0}) <= 0.02);
    // Samples cover the whole segment, not one end of it.
    double lo = 3.0, hi = -3.0;
    for (const Vec& q : r.argmin_samples) {
      lo = std::min(lo, q[0]);
      hi = std::max(hi, q[0]);
    }
    CHECK(lo <= 1.02);
    CHECK(hi >= 1.98);
  }

  TEST_CASE("points of the dual ball") {
    const Vec x0{0.3, -0.2};
    const OracleResult r = oracle_project(hexagon(), x0, GridSearchSpec{});
    CHECK(r.value <= r.tolerance);
    // Hexagon vertices have Euclidean length at most 1, so gauge(z) >= |z|.
    for (const Vec& q : r.argmin_samples) CHECK(norm2(q - x0) <= r.value + 2.0 * r.tolerance);
  }

  TEST_CASE("cross-polytope samples cluster at the clamp") {
    const OracleResult r = oracle_project(l1_ball(), Vec{3, 0.2}, GridSearchSpec{});
    CHECK(std::abs(r.value - 2.0) <= r.tolerance);
    for (const Vec& q : r.argmin_samples) CHECK(norm2(q - Vec{1, 0.2}) <= 0.01);
  }

  TEST_CASE("clamp oracle") {
    Rng rng(31);
    GridSearchSpec s;
    s.box_halfwidth = 1.0;
    s.points_per_axis = 41;
    s.refine_rounds = 4;
    for (std::size_t dim = 1; dim <= 3; ++dim) {
      for (int k = 0; k < 10; ++k) {
        const Vec f = tvtest::random_vec(dim, rng, 3.0);
        const OracleResult r = oracle_clamp(f, s);
        const Vec c = clamp_project(f);
        const double exact = l1_dist(f, c);
        CHECK(r.grid_step <= 1e-3);
        CHECK(r.value >= exact);
        CHECK(r.value - exact <= r.tolerance);
        // |f - q|_1 - |f - c|_1 = |q - c|_1 for every q in the box.
        for (const Vec& q : r.argmin_samples) CHECK(l1_dist(q, c) <= r.value - exact + 2.0 * r.tolerance + 1e-12);
      }
    }
  }

  TEST_CASE("halving the grid step moves the value by a step-proportional amount") {
    Rng rng(32);
    for (int k = 0; k < 30; ++k) {
      const PolytopeNorm p = tvtest::random_symmetric_polygon(rng, k % 2 == 0);
      const Vec x0 = tvtest::random_vec(2, rng, 3.0);
      GridSearchSpec coarse;
      coarse.box_halfwidth = 4.0;
      coarse.points_per_axis = 101;
      coarse.refine_rounds = 0;
      GridSearchSpec fine = coarse;
      fine.points_per_axis = 201;
      const OracleResult a = oracle_project(p, x0, coarse);
      const OracleResult b = oracle_project(p, x0, fine);
      CHECK(b.grid_step == doctest::Approx(a.grid_step / 2.0));
      CHECK(std::abs(a.value - b.value) <= 2.0 * a.grid_step * lipschitz(p));
    }
  }

  TEST_CASE("oracle agrees with the exact LP") {
    Rng rng(33);
    for (int k = 0; k < 100; ++k) {
      const PolytopeNorm p = tvtest::random_symmetric_polygon(rng, k % 2 == 0);
      const Vec x0 = tvtest::random_vec(2, rng, 3.0);
      GridSearchSpec s;
      s.box_halfwidth = 4.0;
      const OracleResult r = oracle_project(p, x0, s);
      const ArgminFace f = project_onto_polar(p, x0);
      CHECK(r.value >= f.optimal_value - 1e-12);
      CHECK(std::abs(r.value - f.optimal_value) <= 2.0 * r.grid_step * lipschitz(p));
    }
  }

  TEST_CASE("deep refinement pins the LP value and face to 1e-6") {
    Rng rng(34);
    for (int k = 0; k < 40; ++k) {
      const PolytopeNorm p = tvtest::random_symmetric_polygon(rng, k % 2 == 0);
      const Vec x0 = tvtest::random_vec(2, rng, 3.0);
      GridSearchSpec s;
      s.box_halfwidth = 4.0;
      s.points_per_axis = 101;
      s.refine_rounds = 14;
      const OracleResult r = oracle_project(p, x0, s);
      const ArgminFace f = project_onto_polar(p, x0);
      CHECK(std::abs(r.value - f.optimal_value) <= 1e-6);
      // Along a segment face the zoom box cannot shrink below the segment, so
      // the point budget caps the step near 1e-6 there.
      const double bound = f.is_unique ? 1e-6 : 10.0 * r.grid_step;
      double worst = 0.0;
      for (const Vec& q : r.argmin_samples) worst = std::max(worst, face_distance(q, f));
      CHECK(worst <= bound);
    }
  }

  TEST_CASE("TV ball samples lie on the unit sphere of tv") {
    for (std::size_t n : {2, 3}) {
      const TvBallSamples b(n, 500);
      CHECK(b.dim() == n * n - 1);
      CHECK(b.size() == 500);
      for (std::size_t k = 0; k < b.size(); k += 7) {
        const std::vector<double> z = b.sample(k);
        CHECK(tv(b.image(z)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(norm_inf(b.coordinates(b.image(z)) - z) <= 1e-12);
      }
    }
    CHECK_THROWS_AS(TvBallSamples(4, 10), std::invalid_argument);
  }

  TEST_CASE("reduced TV oracle: trivial input and input checks") {
    GridSearchSpec s;
    s.points_per_axis = 11;
    s.refine_rounds = 1;
    const TvOracleResult r = oracle_tv_min(GridImage(2), s, 500);
    CHECK(r.value == 0.0);
    const bool has_zero = std::any_of(r.argmin_samples.begin(), r.argmin_samples.end(),
                                      [](const GridImage& v) { return v == GridImage(2); });
    CHECK(has_zero);
    CHECK_THROWS_AS(oracle_tv_min(GridImage(4), s), std::invalid_argument);
    CHECK_THROWS_AS(oracle_tv_min(GridImage::constant(2, 1.0), s), std::invalid_argument);
  }

  TEST_CASE("reduced TV oracle reproduces the pinned fixture") {
    std::ifstream in(tvtest::fixture("f0_2x2.oracle.txt"));
    REQUIRE(in);
    std::string key;
    double value = 0.0, tolerance = 0.0;
    std::size_t samples = 0;
    in >> key >> value;
    REQUIRE(key == "value");
    in >> key >> tolerance;
    REQUIRE(key == "tolerance");
    in >> key >> samples;
    REQUIRE(key == "samples");
    std::stringstream rest;
    rest << in.rdbuf();
    const GridImage centroid = read_matrix(rest, "f0_2x2.oracle.txt");

    const GridImage f0 = read_matrix_file(tvtest::fixture("f0_2x2.txt"));
    GridSearchSpec s;
    s.points_per_axis = 41;
    const TvOracleResult r = oracle_tv_min(f0, s, 4000);
    CHECK(r.value == value);
    CHECK(r.tolerance == tolerance);
    REQUIRE(r.argmin_samples.size() == samples);
    GridImage c(2);
    for (const GridImage& v : r.argmin_samples) c += v;
    c *= 1.0 / static_cast<double>(samples);
    CHECK(norm(c - centroid) <= 1e-12);

    // value(t f0) / t is nondecreasing in t and value(2 f0) <= tv(f0) + value(f0).
    const TvOracleResult d = oracle_tv_min(2.0 * f0, s, 4000);
    CHECK(d.value >= 2.0 * (r.value - r.tolerance));
    CHECK(d.value <= tv(f0) + r.value + d.tolerance);
  }
}
