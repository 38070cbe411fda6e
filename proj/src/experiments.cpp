#include "tvpolar/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tvpolar/io.hpp"
#include "tvpolar/random.hpp"

namespace tvpolar {

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("experiment: n must be at least 1");
  if (num_starts < 2) throw std::invalid_argument("experiment: at least 2 starts are needed");
  if (iters < 1) throw std::invalid_argument("experiment: iters must be positive");
  if (!(margin > 0.0)) throw std::invalid_argument("experiment: margin must be positive");
  if (experiment_count < 1) throw std::invalid_argument("experiment: experiment count must be positive");
  if (threads < 1) throw std::invalid_argument("experiment: threads must be positive");
}

SubgradientConfig ExperimentConfig::solver_config(std::uint64_t seed) const {
  SubgradientConfig s;
  s.max_iters = iters;
  s.step_scale = step_scale;
  s.step_exponent = step_exponent;
  s.tolerance = tolerance;
  s.seed = seed;
  return s;
}

std::uint64_t experiment_seed(std::uint64_t master, std::size_t experiment) {
  return derive_seed(master, {experiment});
}

std::uint64_t start_seed(std::uint64_t master, std::size_t experiment, std::size_t start) {
  return derive_seed(master, {experiment, start});
}

VectorField draw_g0(std::size_t n, double margin, std::uint64_t seed) {
  Rng rng(seed);
  return random_circle_field(n, 1.0 + margin, rng);
}

double diameter(std::span<const GridImage> points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, norm(points[i] - points[j]));
  return d;
}

ExperimentRow run_single_experiment(const VectorField& g0, std::span<const std::uint64_t> seeds,
                                    const ExperimentConfig& cfg) {
  const std::size_t m = seeds.size();
  std::vector<GridImage> finals(m, GridImage(g0.n()));
  std::vector<double> values(m);
  std::vector<char> monotone(m, 1);

  auto solve = [&](std::size_t s) {
    const SubgradientResult r = tv_projected_subgradient(g0, cfg.solver_config(seeds[s]));
    VectorField d = r.h;
    d -= g0;
    finals[s] = divergence(d);
    values[s] = r.value;
    monotone[s] = std::is_sorted(r.trace.rbegin(), r.trace.rend()) ? 1 : 0;
  };

  const std::size_t workers = std::min(cfg.threads, m);
  if (workers <= 1) {
    for (std::size_t s = 0; s < m; ++s) solve(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < m; s = next++) {
          try {
            solve(s);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
  }

  ExperimentRow row;
  row.diameter = diameter(finals);
  row.best_value = *std::min_element(values.begin(), values.end());
  row.start_seeds.assign(seeds.begin(), seeds.end());
  row.traces_nonincreasing = std::all_of(monotone.begin(), monotone.end(), [](char c) { return c != 0; });
  return row;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::function<void(const ExperimentRow&)>& on_row,
                                const std::atomic<bool>* cancel) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  ExperimentReport report;
  report.config = cfg;
  const auto t_all = clock::now();
  for (std::size_t e = 1; e <= cfg.experiment_count; ++e) {
    if (cancel && cancel->load()) {
      report.interrupted = true;
      break;
    }
    const auto t0 = clock::now();
    const std::uint64_t g_seed = experiment_seed(cfg.master_seed, e);
    std::vector<std::uint64_t> seeds(cfg.num_starts);
    for (std::size_t s = 0; s < cfg.num_starts; ++s) seeds[s] = start_seed(cfg.master_seed, e, s);
    ExperimentRow row = run_single_experiment(draw_g0(cfg.n, cfg.margin, g_seed), seeds, cfg);
    row.experiment = e;
    row.g0_seed = g_seed;
    row.wall_ms = ms_since(t0);
    if (on_row) on_row(row);
    report.rows.push_back(std::move(row));
  }
  report.wall_ms = ms_since(t_all);
  return report;
}

void write_csv_header(std::ostream& out) { out << "experiment,diameter,best_value,wall_ms\n"; }

void write_csv_row(std::ostream& out, const ExperimentRow& row, bool timing) {
  out << row.experiment << ',' << format_exact(row.diameter) << ',' << format_exact(row.best_value) << ','
      << (timing ? format_short(row.wall_ms) : std::string("0")) << '\n';
  out.flush();
}

}  // namespace tvpolar
