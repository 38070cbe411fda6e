#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tvpolar/grid_calculus.hpp"
#include "tvpolar/projection_solvers.hpp"

namespace tvpolar {

struct ExperimentConfig {
  std::size_t n = 8;
  std::size_t num_starts = 50;
  std::size_t iters = 20000;
  double margin = 0.1;  ///< g0 pixels have magnitude 1 + margin
  std::uint64_t master_seed = 1;
  std::size_t experiment_count = 5;
  double step_scale = 1.0;
  double step_exponent = 1.0;
  double tolerance = 0.0;  ///< stagnation stop of each start; 0 runs all iterations
  std::size_t threads = 1;  ///< starts solved concurrently; results do not depend on it

  /// Throws std::invalid_argument unless n >= 1, num_starts >= 2, iters >= 1,
  /// margin > 0, experiment_count >= 1 and threads >= 1.
  void validate() const;
  SubgradientConfig solver_config(std::uint64_t seed) const;
};

struct ExperimentRow {
  std::size_t experiment = 0;  ///< 1-based
  double diameter = 0.0;
  double best_value = 0.0;
  double wall_ms = 0.0;
  std::uint64_t g0_seed = 0;
  std::vector<std::uint64_t> start_seeds;
  bool traces_nonincreasing = true;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  double wall_ms = 0.0;
  bool interrupted = false;
};

/// Seed of g0 for experiment e (1-based) and of start s (0-based) within it.
std::uint64_t experiment_seed(std::uint64_t master, std::size_t experiment);
std::uint64_t start_seed(std::uint64_t master, std::size_t experiment, std::size_t start);

/// Pixelwise uniform random angle, magnitude 1 + margin.
VectorField draw_g0(std::size_t n, double margin, std::uint64_t seed);

/// Largest pairwise X-norm distance.
double diameter(std::span<const GridImage> points);

/// Runs one start per seed from a pixelwise uniform h_init on the disk and
/// reports the diameter of the final div(h - g0) over starts. `experiment` and
/// `wall_ms` are left for the caller.
ExperimentRow run_single_experiment(const VectorField& g0, std::span<const std::uint64_t> seeds,
                                    const ExperimentConfig& cfg);

/// All experiments in order. `on_row` sees each row as soon as it is complete;
/// when `cancel` becomes true the run stops after the current experiment and
/// the report is marked interrupted.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::function<void(const ExperimentRow&)>& on_row = {},
                                const std::atomic<bool>* cancel = nullptr);

/// CSV with header "experiment,diameter,best_value,wall_ms"; reals use 17
/// significant digits. With timing off wall_ms is written as 0, which makes
/// the bytes a function of the configuration alone.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ExperimentRow& row, bool timing);

}  // namespace tvpolar
