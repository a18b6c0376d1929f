#include "rbfpu/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "rbfpu/error.hpp"

namespace rbfpu {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t to_count(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size() || v < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, key + ": expected a non-negative integer, got '" + value + "'");
  }
}

double to_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, key + ": expected a number, got '" + value + "'");
  }
}

void check_lengths(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::DimensionMismatch, "prediction and truth lengths differ");
  }
  if (pred.empty()) throw Error(ErrorCode::InvalidArgument, "error metric of an empty sample");
}

std::string metric_cell(const std::optional<ErrorMetrics>& m, double ErrorMetrics::*field) {
  return m ? format_sci((*m).*field) : std::string("nan");
}

constexpr double kPeakX = 0.45;
constexpr double kPeakY = 0.55;
constexpr double kPeakHeight = 800.0;

double contour_quadratic(double c, double s) { return 8.0 * c * c + 10.0 * s * s + 4.0 * c * s; }

}  // namespace

double product_function(std::span<const double> x) {
  return 16.0 * x[0] * x[1] * (1.0 - x[0]) * (1.0 - x[1]);
}

PointSet eval_grid(std::size_t resolution, std::size_t dim) {
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "evaluation grid needs g >= 2");
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "evaluation grid needs M >= 1");
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= resolution;
  PointSet grid(dim);
  grid.reserve(total);
  std::vector<std::size_t> digit(dim, 0);
  std::vector<double> p(dim);
  const double step = 1.0 / static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < dim; ++k) p[k] = static_cast<double>(digit[k]) * step;
    grid.push_back(p);
    for (std::size_t k = dim; k-- > 0;) {
      if (++digit[k] < resolution) break;
      digit[k] = 0;
    }
  }
  return grid;
}

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth);
  double worst = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) worst = std::max(worst, std::abs(pred[i] - truth[i]));
  return worst;
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - truth[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(pred.size()));
}

ErrorMetrics error_metrics(std::span<const double> pred, std::span<const double> truth) {
  return {rmse(pred, truth), mae(pred, truth)};
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (!run_variable && !run_fixed) fail("at least one of variable/fixed mode must run");
  if (n_shapes < 1) fail("shape count Q must be at least 1");
  if (!(shape_min > 0.0) || !(shape_max > shape_min)) fail("shape range must satisfy 0 < min < max");
  if (n_radii < 2) fail("radius count P must be at least 2");
  if (!(upper_factor > 1.0)) fail("radius factor h must exceed 1");
  if (grid < 2) fail("evaluation grid g must be at least 2");
  if (run_fixed && !(fixed_shape > 0.0)) fail("fixed mode needs a positive shape parameter");
  for (auto n : sizes) {
    if (n < 1) fail("benchmark sizes must be positive");
  }
}

VariableFitOptions ExperimentConfig::variable_options() const {
  VariableFitOptions o;
  o.kernel = kernel;
  o.shapes = log_spaced_shapes(n_shapes, shape_min, shape_max);
  o.upper_factor = upper_factor;
  o.n_radii = n_radii;
  o.min_nodes = min_nodes;
  o.threads = threads;
  return o;
}

FixedFitOptions ExperimentConfig::fixed_options() const {
  FixedFitOptions o;
  o.kernel = kernel;
  o.shape = fixed_shape;
  o.min_nodes = min_nodes;
  o.threads = threads;
  return o;
}

void apply_config_setting(ExperimentConfig& config, const std::string& key,
                          const std::string& value) {
  if (key == "kernel") {
    config.kernel = parse_kernel_tag(value);
  } else if (key == "mode") {
    if (value == "both") {
      config.run_variable = config.run_fixed = true;
    } else if (value == "variable") {
      config.run_variable = true;
      config.run_fixed = false;
    } else if (value == "fixed") {
      config.run_variable = false;
      config.run_fixed = true;
    } else {
      throw Error(ErrorCode::InvalidArgument, "mode must be both, variable or fixed");
    }
  } else if (key == "sizes") {
    config.sizes.clear();
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) {
      item = trim(item);
      if (!item.empty()) config.sizes.push_back(to_count(key, item));
    }
    if (config.sizes.empty()) throw Error(ErrorCode::InvalidArgument, "sizes: empty list");
  } else if (key == "shapes" || key == "Q") {
    config.n_shapes = to_count(key, value);
  } else if (key == "shape_min") {
    config.shape_min = to_real(key, value);
  } else if (key == "shape_max") {
    config.shape_max = to_real(key, value);
  } else if (key == "h") {
    config.upper_factor = to_real(key, value);
  } else if (key == "P") {
    config.n_radii = to_count(key, value);
  } else if (key == "eps_fixed") {
    config.fixed_shape = to_real(key, value);
  } else if (key == "grid") {
    config.grid = to_count(key, value);
  } else if (key == "min_nodes") {
    config.min_nodes = to_count(key, value);
  } else if (key == "seed") {
    config.seed = static_cast<std::uint64_t>(to_count(key, value));
  } else if (key == "holdout") {
    config.holdout = to_count(key, value);
  } else if (key == "threads") {
    config.threads = to_count(key, value);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown configuration key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Parse, source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_config_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return parse_config(in, path.string());
}

std::vector<BenchmarkRow> run_benchmark(const ExperimentConfig& config) {
  config.validate();
  const PointSet grid = eval_grid(config.grid, 2);
  std::vector<double> truth(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) truth[i] = product_function(grid[i]);

  std::vector<BenchmarkRow> rows;
  for (const auto n : config.sizes) {
    BenchmarkRow row;
    row.n_nodes = n;
    try {
      PointSet nodes = halton_sequence(n, 2);
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = product_function(nodes[i]);
      const Dataset data(std::move(nodes), std::move(values));
      if (config.run_variable) {
        const auto start = Clock::now();
        const PUModel model = fit_pu_variable(data, config.variable_options());
        row.variable = error_metrics(model.evaluate(grid), truth);
        row.seconds_variable = seconds_since(start);
      }
      if (config.run_fixed) {
        const auto start = Clock::now();
        const PUModel model = fit_pu_fixed(data, config.fixed_options());
        row.fixed = error_metrics(model.evaluate(grid), truth);
        row.seconds_fixed = seconds_since(start);
      }
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_benchmark_csv(const std::filesystem::path& path, const std::vector<BenchmarkRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << "N,RMSE_var,MAE_var,RMSE_fixed,MAE_fixed,status\n";
  for (const auto& r : rows) {
    std::string status = r.error.empty() ? "ok" : "error: " + r.error;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.n_nodes << ',' << metric_cell(r.variable, &ErrorMetrics::rmse) << ','
        << metric_cell(r.variable, &ErrorMetrics::mae) << ','
        << metric_cell(r.fixed, &ErrorMetrics::rmse) << ','
        << metric_cell(r.fixed, &ErrorMetrics::mae) << ',' << status << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%8s  %12s  %12s  %12s  %12s  %9s  %9s\n", "N", "RMSE_var",
                "MAE_var", "RMSE_fixed", "MAE_fixed", "t_var[s]", "t_fix[s]");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%8zu  %12s  %12s  %12s  %12s  %9.2f  %9.2f", r.n_nodes,
                  metric_cell(r.variable, &ErrorMetrics::rmse).c_str(),
                  metric_cell(r.variable, &ErrorMetrics::mae).c_str(),
                  metric_cell(r.fixed, &ErrorMetrics::rmse).c_str(),
                  metric_cell(r.fixed, &ErrorMetrics::mae).c_str(), r.seconds_variable,
                  r.seconds_fixed);
    os << buf;
    if (!r.error.empty()) os << "  [" << r.error << "]";
    os << '\n';
  }
  return os.str();
}

std::vector<ResultRow> benchmark_result_rows(const std::vector<BenchmarkRow>& rows) {
  std::vector<ResultRow> out;
  for (const auto& r : rows) {
    const std::string n = "N=" + std::to_string(r.n_nodes);
    if (r.variable) out.push_back({n + " variable", r.variable->rmse, r.variable->mae, r.seconds_variable});
    if (r.fixed) out.push_back({n + " fixed", r.fixed->rmse, r.fixed->mae, r.seconds_fixed});
  }
  return out;
}

HoldoutResult run_holdout(const Dataset& raw, const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const auto [unit, transform] = rescale_to_unit(raw);
  const SplitResult split = validation_split(unit, {config.holdout, config.seed});
  const auto& truth = split.holdout.values();

  HoldoutResult result;
  result.n_train = split.train.size();
  result.n_holdout = split.holdout.size();
  const PUModel model = fit_pu_variable(split.train, config.variable_options());
  result.variable = error_metrics(model.evaluate(split.holdout.nodes()), truth);
  if (config.run_fixed) {
    const PUModel baseline = fit_pu_fixed(split.train, config.fixed_options());
    result.fixed = error_metrics(baseline.evaluate(split.holdout.nodes()), truth);
  }
  result.seconds = seconds_since(start);
  return result;
}

HoldoutResult run_holdout(const std::filesystem::path& path, std::size_t dim,
                          const ExperimentConfig& config) {
  return run_holdout(load_delimited(path, dim), config);
}

double contour_surface(std::span<const double> x) {
  const double dx = x[0] - kPeakX;
  const double dy = x[1] - kPeakY;
  return kPeakHeight * std::exp(-(8.0 * dx * dx + 10.0 * dy * dy + 4.0 * dx * dy));
}

Dataset contour_dataset(std::size_t total, std::size_t levels, std::uint64_t seed) {
  if (total == 0 || levels == 0) {
    throw Error(ErrorCode::InvalidArgument, "contour dataset needs points and levels");
  }
  // Level values evenly spaced strictly inside (0, peak); the contour of
  // level L is the ellipse r(theta)^2 q(theta) = ln(peak / L).
  const std::size_t per_level = 4 * ((total + levels - 1) / levels);
  PointSet candidates(2);
  std::vector<double> values;
  for (std::size_t k = 0; k < levels; ++k) {
    const double level = kPeakHeight * (static_cast<double>(k) + 0.5) / static_cast<double>(levels);
    const double log_ratio = std::log(kPeakHeight / level);
    for (std::size_t i = 0; i < per_level; ++i) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5 * static_cast<double>(k % 2)) /
                           static_cast<double>(per_level);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double r = std::sqrt(log_ratio / contour_quadratic(c, s));
      const double p[2] = {kPeakX + r * c, kPeakY + r * s};
      if (p[0] < 0.0 || p[0] > 1.0 || p[1] < 0.0 || p[1] > 1.0) continue;
      candidates.push_back(p);
      values.push_back(level);
    }
  }
  if (values.size() < total) {
    throw Error(ErrorCode::InvalidArgument, "contour sampling produced only " +
                                                std::to_string(values.size()) + " points");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(rng() % (i + 1))]);
  }
  order.resize(total);
  std::sort(order.begin(), order.end());
  std::vector<double> kept(total);
  for (std::size_t i = 0; i < total; ++i) kept[i] = values[order[i]];
  return Dataset(candidates.select(order), std::move(kept));
}

}  // namespace rbfpu
