#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "rbfpu/datasets_io.hpp"
#include "rbfpu/error.hpp"
#include "rbfpu/harness.hpp"
#include "rbfpu/model_io.hpp"

namespace rbfpu::cli {

namespace {

bool is_validation(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSplit:
    case ErrorCode::UnsupportedDimension:
      return true;
    default:
      return false;
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Experiment knobs shared by bench, fit and holdout. Unset flags leave the
/// configuration untouched so config-file values survive.
struct ExperimentFlags {
  std::optional<std::string> kernel;
  std::optional<std::string> mode;
  std::optional<std::string> sizes;
  std::optional<std::string> shapes;
  std::optional<std::string> range;
  std::optional<std::string> h;
  std::optional<std::string> radii;
  std::optional<std::string> eps_fixed;
  std::optional<std::string> grid;
  std::optional<std::string> min_nodes;
  std::optional<std::string> threads;

  void add_search_flags(CLI::App& app) {
    app.add_option("--kernel", kernel, "Local kernel: imq or matern2");
    app.add_option("--Q,--shapes", shapes, "Number of shape candidates");
    app.add_option("--range", range, "Shape search interval as min,max");
    app.add_option("--h", h, "Radius range factor (> 1)");
    app.add_option("--P", radii, "Number of radius candidates (>= 2)");
    app.add_option("--eps-fixed", eps_fixed, "Shape parameter of the fixed-parameter fit");
    app.add_option("--min-nodes", min_nodes, "Minimum nodes per subdomain");
    app.add_option("--threads", threads, "Worker threads (default: $RBFPU_NUM_THREADS or all cores)");
  }

  void apply(ExperimentConfig& config) const {
    auto set = [&](const char* key, const std::optional<std::string>& v) {
      if (v) apply_config_setting(config, key, *v);
    };
    set("kernel", kernel);
    set("mode", mode);
    set("sizes", sizes);
    set("shapes", shapes);
    set("h", h);
    set("P", radii);
    set("eps_fixed", eps_fixed);
    set("grid", grid);
    set("min_nodes", min_nodes);
    set("threads", threads);
    if (range) {
      const auto comma = range->find(',');
      if (comma == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "--range expects min,max");
      }
      apply_config_setting(config, "shape_min", range->substr(0, comma));
      apply_config_setting(config, "shape_max", range->substr(comma + 1));
    }
  }
};

int cmd_bench(const ExperimentConfig& config, const std::string& out_path,
              const std::string& results_path, std::ostream& out) {
  const auto rows = run_benchmark(config);
  out << format_benchmark_table(rows);
  if (!out_path.empty()) write_benchmark_csv(out_path, rows);
  if (!results_path.empty()) write_results(results_path, benchmark_result_rows(rows));
  for (const auto& r : rows) {
    if (!r.error.empty()) return kRuntimeError;
  }
  return kOk;
}

int cmd_fit(const std::string& data_path, std::size_t dim, const ExperimentConfig& config,
            const std::string& model_out, std::ostream& out) {
  const Dataset raw = load_delimited(data_path, dim);
  const auto [unit, transform] = rescale_to_unit(raw);
  const bool variable = config.run_variable;
  PUModel model = variable ? fit_pu_variable(unit, config.variable_options())
                           : fit_pu_fixed(unit, config.fixed_options());
  out << "fitted " << (variable ? "variable" : "fixed") << " model: " << unit.size() << " nodes, "
      << model.subdomains().size() << " subdomains, kernel " << to_string(config.kernel) << '\n';
  for (const auto& w : model.provenance().warnings) out << "warning: " << w << '\n';
  save_model(model_out, {std::move(model), transform});
  return kOk;
}

int cmd_eval(const std::string& model_path, const std::string& points_path,
             const std::string& out_path, std::ostream& out) {
  const StoredModel stored = load_model(model_path);
  const std::size_t dim = stored.model.dim();
  const PointSet raw = load_points(points_path, dim);

  std::ofstream csv(out_path);
  if (!csv) throw Error(ErrorCode::Io, "cannot open '" + out_path + "' for writing");
  for (std::size_t k = 0; k < dim; ++k) csv << 'x' << k + 1 << ',';
  csv << "value,status\n";
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto unit = stored.transform.forward(raw[i]);
    for (double c : raw[i]) csv << g17(c) << ',';
    if (!in_unit_cube(unit)) {
      csv << "nan,out_of_domain\n";
      ++flagged;
      continue;
    }
    for (auto& c : unit) c = std::clamp(c, 0.0, 1.0);
    bool uncovered = false;
    const double v = stored.model.evaluate_one(unit, &uncovered);
    csv << g17(v) << ',' << (uncovered ? "uncovered" : "ok") << '\n';
  }
  csv.flush();
  if (!csv) throw Error(ErrorCode::Io, "failed writing '" + out_path + "'");
  out << "evaluated " << raw.size() << " points (" << flagged << " out of domain)\n";
  return kOk;
}

int cmd_holdout(const std::string& data_path, std::size_t dim, const ExperimentConfig& config,
                const std::string& results_path, std::ostream& out) {
  const HoldoutResult r = run_holdout(data_path, dim, config);
  out << "rmse=" << format_sci(r.variable.rmse) << " mae=" << format_sci(r.variable.mae);
  if (r.fixed) out << " rmse_fixed=" << format_sci(r.fixed->rmse) << " mae_fixed=" << format_sci(r.fixed->mae);
  out << '\n';
  out << "# train=" << r.n_train << " holdout=" << r.n_holdout << " seed=" << config.seed
      << " split_rng=" << kSplitRngName << " kernel=" << to_string(config.kernel) << '\n';
  if (!results_path.empty()) {
    std::vector<ResultRow> rows{{"holdout variable", r.variable.rmse, r.variable.mae, r.seconds}};
    if (r.fixed) rows.push_back({"holdout fixed", r.fixed->rmse, r.fixed->mae, r.seconds});
    write_results(results_path, rows);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partition-of-unity RBF interpolation with LOOCV-selected radii and shapes", "rbfpu"};
  // "--h" is the radius factor, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "Product-function accuracy table on Halton nodes");
  bench->set_help_flag("--help", "Print this help message and exit");
  ExperimentFlags bench_flags;
  std::string bench_config;
  std::string bench_out;
  std::string bench_results;
  bench_flags.add_search_flags(*bench);
  bench->add_option("--config", bench_config, "key = value experiment file")->check(CLI::ExistingFile);
  bench->add_option("--sizes", bench_flags.sizes, "Comma-separated node counts");
  bench->add_option("--mode", bench_flags.mode, "both, variable or fixed");
  bench->add_option("--grid", bench_flags.grid, "Evaluation grid points per axis");
  bench->add_option("--out", bench_out, "CSV table output path");
  bench->add_option("--results", bench_results, "Long-form label,rmse,mae,seconds CSV");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a model to a data file");
  fit->set_help_flag("--help", "Print this help message and exit");
  ExperimentFlags fit_flags;
  std::string fit_data;
  std::size_t fit_dim = 2;
  std::string fit_mode = "variable";
  std::optional<std::string> fit_eps;
  std::string fit_model_out;
  fit_flags.add_search_flags(*fit);
  fit->add_option("--data", fit_data, "Input records: coordinates then value")
      ->required()->check(CLI::ExistingFile);
  fit->add_option("--dim", fit_dim, "Number of coordinates per record");
  fit->add_option("--mode", fit_mode, "variable or fixed")
      ->check(CLI::IsMember({"variable", "fixed"}));
  fit->add_option("--eps", fit_eps, "Shape parameter for --mode fixed");
  fit->add_option("--model-out", fit_model_out, "Model file to write")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model");
  eval->set_help_flag("--help", "Print this help message and exit");
  std::string eval_model;
  std::string eval_points;
  std::string eval_out;
  eval->add_option("--model", eval_model, "Model file from fit")->required()->check(CLI::ExistingFile);
  eval->add_option("--points", eval_points, "Query points (value column optional)")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "Predictions CSV")->required();

  // holdout
  auto* holdout = app.add_subcommand("holdout", "Random hold-out validation on a data file");
  holdout->set_help_flag("--help", "Print this help message and exit");
  ExperimentFlags holdout_flags;
  std::string holdout_data;
  std::size_t holdout_dim = 2;
  std::size_t holdout_k = 90;
  std::uint64_t holdout_seed = 0;
  bool compare_fixed = false;
  std::string holdout_results;
  holdout_flags.add_search_flags(*holdout);
  holdout->add_option("--data", holdout_data, "Input records")->required()->check(CLI::ExistingFile);
  holdout->add_option("--dim", holdout_dim, "Number of coordinates per record");
  holdout->add_option("--k", holdout_k, "Number of held-out points");
  holdout->add_option("--seed", holdout_seed, "Split seed");
  holdout->add_flag("--compare-fixed", compare_fixed, "Also score the fixed-parameter baseline");
  holdout->add_option("--results", holdout_results, "Long-form label,rmse,mae,seconds CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* active = &app;
    for (auto* sub : app.get_subcommands()) active = sub;
    err << active->help();
    return kValidationError;
  }

  try {
    if (bench->parsed()) {
      ExperimentConfig config = bench_config.empty() ? ExperimentConfig{} : load_config(bench_config);
      bench_flags.apply(config);
      config.validate();
      return cmd_bench(config, bench_out, bench_results, out);
    }
    if (fit->parsed()) {
      ExperimentConfig config;
      fit_flags.apply(config);
      apply_config_setting(config, "mode", fit_mode);
      if (fit_eps) apply_config_setting(config, "eps_fixed", *fit_eps);
      config.validate();
      if (fit_dim == 0) throw Error(ErrorCode::InvalidArgument, "--dim must be at least 1");
      return cmd_fit(fit_data, fit_dim, config, fit_model_out, out);
    }
    if (eval->parsed()) return cmd_eval(eval_model, eval_points, eval_out, out);
    if (holdout->parsed()) {
      ExperimentConfig config;
      config.kernel = KernelTag::MaternC2;
      holdout_flags.apply(config);
      config.holdout = holdout_k;
      config.seed = holdout_seed;
      config.run_fixed = compare_fixed;
      config.validate();
      if (holdout_k == 0) throw Error(ErrorCode::InvalidSplit, "--k must be at least 1");
      if (holdout_dim == 0) throw Error(ErrorCode::InvalidArgument, "--dim must be at least 1");
      return cmd_holdout(holdout_data, holdout_dim, config, holdout_results, out);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return is_validation(e.code()) ? kValidationError : kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kValidationError;
}

}  // namespace rbfpu::cli
