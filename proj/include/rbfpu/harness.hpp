#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbfpu/datasets_io.hpp"
#include "rbfpu/geometry.hpp"
#include "rbfpu/kernels.hpp"
#include "rbfpu/pu.hpp"

namespace rbfpu {

/// 16 x y (1 - x)(1 - y) on the unit square.
double product_function(std::span<const double> x);

/// g^M equispaced points spanning [0,1]^M, endpoints included; axis 0 slowest.
PointSet eval_grid(std::size_t resolution, std::size_t dim);

double mae(std::span<const double> pred, std::span<const double> truth);
double rmse(std::span<const double> pred, std::span<const double> truth);

struct ErrorMetrics {
  double rmse = 0.0;
  double mae = 0.0;
};

ErrorMetrics error_metrics(std::span<const double> pred, std::span<const double> truth);

struct ExperimentConfig {
  KernelTag kernel = KernelTag::IMQ;
  bool run_variable = true;
  bool run_fixed = true;
  std::vector<std::size_t> sizes = {289, 1089, 4225};
  std::size_t n_shapes = 30;
  double shape_min = 1e-3;
  double shape_max = 10.0;
  double upper_factor = 2.0;
  std::size_t n_radii = 6;
  double fixed_shape = 0.6;
  std::size_t grid = 40;
  std::size_t min_nodes = kDefaultMinNodes;
  std::uint64_t seed = 0;
  std::size_t holdout = 90;
  std::size_t threads = 0;

  /// Throws InvalidArgument on the first violated constraint.
  void validate() const;

  VariableFitOptions variable_options() const;
  FixedFitOptions fixed_options() const;
};

/// Reads `key = value` lines ('#' comments). Keys: kernel, mode
/// (both|variable|fixed), sizes (comma list), shapes, shape_min, shape_max, h,
/// P, eps_fixed, grid, min_nodes, seed, holdout, threads.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<stream>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key`/`value` setting; shared by the config file and CLI flags.
void apply_config_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

struct BenchmarkRow {
  std::size_t n_nodes = 0;
  std::optional<ErrorMetrics> variable;
  std::optional<ErrorMetrics> fixed;
  double seconds_variable = 0.0;
  double seconds_fixed = 0.0;
  std::string error;  // empty on success
};

/// Halton nodes, product-function samples, fits in the enabled modes, and
/// metrics on the evaluation grid, one row per configured N. A failing row
/// records its error and the remaining rows still run.
std::vector<BenchmarkRow> run_benchmark(const ExperimentConfig& config);

/// Header "N,RMSE_var,MAE_var,RMSE_fixed,MAE_fixed,status". Timings are left
/// out so identical configurations produce identical files.
void write_benchmark_csv(const std::filesystem::path& path, const std::vector<BenchmarkRow>& rows);
std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows);

/// Long-form rows (one per N and mode) for write_results.
std::vector<ResultRow> benchmark_result_rows(const std::vector<BenchmarkRow>& rows);

struct HoldoutResult {
  ErrorMetrics variable;
  std::optional<ErrorMetrics> fixed;
  std::size_t n_train = 0;
  std::size_t n_holdout = 0;
  double seconds = 0.0;
};

/// Rescale to the unit cube, split off `config.holdout` points, fit the
/// variable model (and the fixed baseline when enabled), and score the
/// holdout in the original value units.
HoldoutResult run_holdout(const Dataset& raw, const ExperimentConfig& config);
HoldoutResult run_holdout(const std::filesystem::path& path, std::size_t dim,
                          const ExperimentConfig& config);

/// Smooth single-peak surface on [0,1]^2 whose values span about 800 units.
double contour_surface(std::span<const double> x);

/// `total` points on `levels` level curves of contour_surface inside the unit
/// square, chosen by a seeded shuffle of a fine angular sampling.
Dataset contour_dataset(std::size_t total, std::size_t levels, std::uint64_t seed);

}  // namespace rbfpu
