#include "tvpolar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tvpolar/experiments.hpp"
#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/io.hpp"
#include "tvpolar/oracle.hpp"
#include "tvpolar/polytope_norms.hpp"
#include "tvpolar/projection_solvers.hpp"

namespace tvpolar {

namespace {

namespace fs = std::filesystem;

// Raised inside command handlers for bad arguments that CLI11 cannot see
// (wrong coordinate count and the like).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PolytopeNorm load_polytope(const std::string& path) {
  const auto pts = read_polygon_file(path);
  try {
    return PolytopeNorm::from_vertices(pts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string describe_triple(const WTriple& w) {
  return "x1=" + format_point(w.x1) + " [x2,x3]=[" + format_point(w.x2) + "," + format_point(w.x3) + "]";
}

std::string describe_face(const ArgminFace& f) {
  std::string s = "value " + format_short(f.optimal_value) + "; face:";
  for (const Vec& v : f.face_vertices) s += " " + format_point(v);
  s += "; unique: ";
  s += f.is_unique ? "true" : "false";
  return s;
}

struct DecomposeArgs {
  std::string input;
  std::size_t iters = 20000;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  double step_scale = 1.0;
  double step_exponent = 1.0;
  std::string u_out;
  std::string v_out;
};

int run_decompose(const DecomposeArgs& a, std::ostream& out) {
  const GridImage f = read_matrix_file(a.input);
  const MeanZeroSplit split = mean_zero_split(f);
  const VectorField g0 = field_with_divergence(split.f0);
  SubgradientConfig cfg;
  cfg.max_iters = a.iters;
  cfg.seed = a.seed;
  cfg.tolerance = a.tol;
  cfg.step_scale = a.step_scale;
  cfg.step_exponent = a.step_exponent;
  const SubgradientResult r = tv_projected_subgradient(g0, cfg);

  // div g0 = f0, so the objective is tv(f0 - div h); v = div h is the texture part.
  const GridImage v = divergence(r.h);
  const GridImage u = f - v;
  const std::string u_path = a.u_out.empty() ? a.input + ".u.txt" : a.u_out;
  const std::string v_path = a.v_out.empty() ? a.input + ".v.txt" : a.v_out;
  write_matrix_file(u_path, u);
  write_matrix_file(v_path, v);
  out << "tv(u) " << format_short(tv(u)) << "\n";
  out << "iterations " << r.iterations << "\n";
  out << "mean " << format_short(split.fhat(0, 0)) << "\n";
  out << "u written to " << u_path << "\n";
  out << "v written to " << v_path << "\n";
  return kExitOk;
}

int run_project(const std::string& path, const std::vector<double>& x0, std::ostream& out) {
  const PolytopeNorm p = load_polytope(path);
  if (p.dim() != 2) throw UsageError("project: only 2-dimensional polytopes are supported");
  if (x0.size() != p.dim()) {
    throw UsageError("project: expected " + std::to_string(p.dim()) + " coordinates for x0, got " +
                     std::to_string(x0.size()));
  }
  out << describe_face(project_onto_polar(p, x0)) << "\n";
  return kExitOk;
}

int run_check(const std::string& path, double tol, std::ostream& out) {
  const PolytopeNorm p = load_polytope(path);
  const auto triples = w_set(p, tol);
  for (const WTriple& w : triples) out << describe_triple(w) << "\n";
  if (triples.empty()) {
    out << "W-set empty: the projection onto the dual ball is unique for every x0";
  } else {
    out << "W-set has " << triples.size() << " triples: some x0 has a non-unique projection";
  }
  if (!w_set_certified(p)) out << " (characterization not certified in dimension " << p.dim() << ")";
  out << "\n";
  return triples.empty() ? kExitOk : kExitNotUnique;
}

int run_witness(const std::string& path, std::ostream& out) {
  const PolytopeNorm p = load_polytope(path);
  if (p.dim() != 2) throw UsageError("witness: only 2-dimensional polytopes are supported");
  const auto triples = w_set(p);
  if (triples.empty()) {
    out << "W-set empty: no witness exists\n";
    return kExitOk;
  }
  const NonUniqueInstance inst = witness_from_triple(p, triples.front());
  out << "triple " << describe_triple(triples.front()) << "\n";
  out << "x0 " << format_point(inst.x0) << "\n";
  out << "w1 " << format_point(inst.w1) << "\n";
  out << "w2 " << format_point(inst.w2) << "\n";
  out << "u1 " << format_point(inst.u1) << "\n";
  out << "u2 " << format_point(inst.u2) << "\n";
  out << "r " << format_short(inst.r) << "\n";
  out << "a " << format_point(inst.a) << "\n";
  out << "projection of x0: " << describe_face(project_onto_polar(p, inst.x0)) << "\n";
  return kExitOk;
}

struct ExperimentArgs {
  ExperimentConfig cfg;
  std::string out_path;
  bool no_timing = false;
};

int run_experiment_cmd(const ExperimentArgs& a, std::ostream& out, std::ostream& err,
                       const std::atomic<bool>* cancel) {
  a.cfg.validate();
  std::ofstream file;
  std::ostream* csv = &out;
  if (!a.out_path.empty()) {
    file.open(a.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + a.out_path + " for writing");
    csv = &file;
  }
  write_csv_header(*csv);
  const ExperimentReport rep =
      run_experiment(a.cfg, [&](const ExperimentRow& row) { write_csv_row(*csv, row, !a.no_timing); }, cancel);
  if (!a.out_path.empty()) {
    double worst = 0.0;
    for (const auto& row : rep.rows) worst = std::max(worst, row.diameter);
    out << "wrote " << rep.rows.size() << " rows to " << a.out_path << "; max diameter " << format_short(worst)
        << "\n";
  }
  if (rep.interrupted) {
    err << "interrupted after " << rep.rows.size() << " of " << a.cfg.experiment_count << " experiments\n";
    return kExitInterrupted;
  }
  return kExitOk;
}

struct OracleArgs {
  std::string input;
  std::vector<double> x0;
  GridSearchSpec grid;
  std::size_t directions = 4000;
  std::string dir;
};

int run_oracle_project(const OracleArgs& a, std::ostream& out) {
  const PolytopeNorm p = load_polytope(a.input);
  if (p.dim() != 2) throw UsageError("oracle project: only 2-dimensional polytopes are supported");
  if (a.x0.size() != 2) throw UsageError("oracle project: expected 2 coordinates for x0");
  const OracleResult r = oracle_project(p, a.x0, a.grid);
  Vec lo = r.argmin_samples.front();
  Vec hi = lo;
  for (const Vec& x : r.argmin_samples)
    for (std::size_t d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }
  out << "oracle value " << format_short(r.value) << " +- " << format_short(r.tolerance) << "; "
      << r.argmin_samples.size() << " samples in box " << format_point(lo) << " " << format_point(hi) << "\n";
  out << "exact " << describe_face(project_onto_polar(p, a.x0)) << "\n";
  return kExitOk;
}

int run_oracle_tv(const OracleArgs& a, std::ostream& out) {
  const GridImage f = read_matrix_file(a.input);
  if (f.n() > 3) throw UsageError("oracle tv: grids larger than 3x3 are not supported");
  const MeanZeroSplit split = mean_zero_split(f);
  const TvOracleResult r = oracle_tv_min(split.f0, a.grid, a.directions);
  out << "oracle value " << format_short(r.value) << " +- " << format_short(r.tolerance) << "; "
      << r.argmin_samples.size() << " samples\n";
  return kExitOk;
}

int run_oracle_dual_norm(const OracleArgs& a, std::ostream& out) {
  const GridImage v = read_matrix_file(a.input);
  if (!has_zero_mean(v)) throw UsageError(a.input + ": the dual norm is only finite on mean-zero images");
  const DualNormResult d = tv_dual_norm(v);
  out << "dual norm in [" << format_short(d.lower_bound) << ", " << format_short(d.value) << "]";
  if (v.n() <= 3) out << "; sampled " << format_short(oracle_tv_dual_norm(v, a.directions * 5));
  out << "\n";
  return kExitOk;
}

// Pinned regression data for the 2x2 reduced problem.
int run_oracle_fixtures(const OracleArgs& a, std::ostream& out) {
  const fs::path dir = a.dir;
  fs::create_directories(dir);
  GridImage f0(2);
  f0(0, 0) = -3.0;
  f0(0, 1) = -1.0;
  f0(1, 0) = 1.0;
  f0(1, 1) = 3.0;
  write_matrix_file(dir / "f0_2x2.txt", f0);

  const TvOracleResult r = oracle_tv_min(f0, a.grid, a.directions);
  GridImage centroid(2);
  for (const GridImage& s : r.argmin_samples) centroid += s;
  centroid *= 1.0 / static_cast<double>(r.argmin_samples.size());
  {
    std::ofstream o(dir / "f0_2x2.oracle.txt", std::ios::binary);
    o << "value " << format_exact(r.value) << "\n";
    o << "tolerance " << format_exact(r.tolerance) << "\n";
    o << "samples " << r.argmin_samples.size() << "\n";
    o << "# centroid of the near-optimal v samples\n";
    write_matrix(o, centroid);
  }
  {
    std::ofstream m(dir / "MANIFEST", std::ios::binary);
    m << "# file: generator\n";
    m << "f0_2x2.txt: fixed input [[-3,-1],[1,3]]\n";
    m << "f0_2x2.oracle.txt: tvpolar oracle fixtures --points " << a.grid.points_per_axis << " --rounds "
      << a.grid.refine_rounds << " --box " << format_short(a.grid.box_halfwidth) << " --max-points "
      << a.grid.max_points_per_round << " --directions " << a.directions << "\n";
    m << "hexagon.txt: vertices (0,1) (0.5,0.5) (0.5,-0.5) (0,-1) (-0.5,-0.5) (-0.5,0.5)\n";
    m << "l1ball.txt: vertices (+-1,0) (0,+-1)\n";
    m << "square.txt: vertices (+-1,+-1)\n";
  }
  out << "oracle value " << format_short(r.value) << " +- " << format_short(r.tolerance) << " written to "
      << dir.string() << "\n";
  return kExitOk;
}

void add_grid_options(CLI::App* cmd, GridSearchSpec& g, std::size_t default_points) {
  g.points_per_axis = default_points;
  cmd->add_option("--points", g.points_per_axis, "Grid points per axis in the first round")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20));
  cmd->add_option("--rounds", g.refine_rounds, "Refinement rounds")->capture_default_str();
  cmd->add_option("--box", g.box_halfwidth, "Half-width of the search box")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-points", g.max_points_per_round, "Cap on grid points per round")->capture_default_str();
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                 const std::atomic<bool>* cancel) {
  CLI::App app{"Discrete TV decomposition and polytope projection tools", "tvpolar"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Split an image into u + v with the projected subgradient solver");
  c_dec->add_option("matrix", dec.input, "Matrix file")->required();
  c_dec->add_option("--iters", dec.iters, "Iterations")->capture_default_str()->check(CLI::PositiveNumber);
  c_dec->add_option("--seed", dec.seed, "Seed of the random start")->capture_default_str();
  c_dec->add_option("--tol", dec.tol, "Stagnation tolerance per 1000 iterations")->capture_default_str();
  c_dec->add_option("--step-scale", dec.step_scale, "c in c n^2 / k^e")->capture_default_str();
  c_dec->add_option("--step-exponent", dec.step_exponent, "e in c n^2 / k^e")->capture_default_str();
  c_dec->add_option("--u-out", dec.u_out, "Output for u (default <matrix>.u.txt)");
  c_dec->add_option("--v-out", dec.v_out, "Output for v (default <matrix>.v.txt)");

  std::string proj_path;
  std::vector<double> proj_x0;
  auto* c_proj = app.add_subcommand("project", "Project x0 onto the dual unit ball of a polygon norm");
  c_proj->add_option("polygon", proj_path, "Polygon file")->required();
  c_proj->add_option("x0", proj_x0, "Coordinates of x0")->required();

  std::string check_path;
  double check_tol = 1e-9;
  auto* c_check = app.add_subcommand("check-uniqueness", "Print the W-set; exit 2 when it is nonempty");
  c_check->add_option("polygon", check_path, "Polygon file")->required();
  c_check->add_option("--tol", check_tol, "Relative orthogonality tolerance")->capture_default_str();

  std::string wit_path;
  auto* c_wit = app.add_subcommand("witness", "Build an x0 with a non-unique projection from the first W triple");
  c_wit->add_option("polygon", wit_path, "Polygon file")->required();

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "Multi-start uniqueness study; writes CSV");
  c_exp->add_option("--n", exp.cfg.n, "Grid side")->capture_default_str();
  c_exp->add_option("--starts", exp.cfg.num_starts, "Starts per experiment")->capture_default_str();
  c_exp->add_option("--iters", exp.cfg.iters, "Iterations per start")->capture_default_str();
  c_exp->add_option("--margin", exp.cfg.margin, "g0 magnitude minus 1")->capture_default_str();
  c_exp->add_option("--seeds", exp.cfg.master_seed, "Master seed")->capture_default_str();
  c_exp->add_option("--experiments", exp.cfg.experiment_count, "Number of experiments")->capture_default_str();
  c_exp->add_option("--step-scale", exp.cfg.step_scale, "c in c n^2 / k^e")->capture_default_str();
  c_exp->add_option("--step-exponent", exp.cfg.step_exponent, "e in c n^2 / k^e")->capture_default_str();
  c_exp->add_option("--tol", exp.cfg.tolerance, "Stagnation tolerance per 1000 iterations (0 disables)")
      ->capture_default_str();
  c_exp->add_option("--threads", exp.cfg.threads, "Worker threads")->capture_default_str();
  c_exp->add_option("--out", exp.out_path, "CSV output file (default stdout)");
  c_exp->add_flag("--no-timing", exp.no_timing, "Write wall_ms as 0 for byte-reproducible output");

  auto* c_or = app.add_subcommand("oracle", "Brute-force validation oracles");
  c_or->require_subcommand(1);
  OracleArgs orc;
  auto* o_proj = c_or->add_subcommand("project", "Grid search for the polygon projection");
  o_proj->add_option("polygon", orc.input, "Polygon file")->required();
  o_proj->add_option("x0", orc.x0, "Coordinates of x0")->required();
  add_grid_options(o_proj, orc.grid, 401);
  auto* o_tv = c_or->add_subcommand("tv", "Grid search for the reduced problem (n <= 3)");
  o_tv->add_option("matrix", orc.input, "Matrix file")->required();
  add_grid_options(o_tv, orc.grid, 41);
  o_tv->add_option("--directions", orc.directions, "Sampled TV-ball directions")->capture_default_str();
  auto* o_dn = c_or->add_subcommand("dual-norm", "Certified bracket and sampled estimate of the TV dual norm");
  o_dn->add_option("matrix", orc.input, "Matrix file")->required();
  o_dn->add_option("--directions", orc.directions, "Sampled TV-ball directions / 5")->capture_default_str();
  auto* o_fix = c_or->add_subcommand("fixtures", "Regenerate the pinned oracle fixtures");
  o_fix->add_option("dir", orc.dir, "Output directory")->required();
  add_grid_options(o_fix, orc.grid, 41);
  o_fix->add_option("--directions", orc.directions, "Sampled TV-ball directions")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.back()->help());
    return kExitBadInput;
  }

  try {
    if (*c_dec) return run_decompose(dec, out);
    if (*c_proj) return run_project(proj_path, proj_x0, out);
    if (*c_check) return run_check(check_path, check_tol, out);
    if (*c_wit) return run_witness(wit_path, out);
    if (*c_exp) return run_experiment_cmd(exp, out, err, cancel);
    if (*o_proj) return run_oracle_project(orc, out);
    if (*o_tv) return run_oracle_tv(orc, out);
    if (*o_dn) return run_oracle_dual_norm(orc, out);
    if (*o_fix) return run_oracle_fixtures(orc, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace tvpolar
