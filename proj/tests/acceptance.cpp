// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rbfpu/error.hpp"
#include "rbfpu/harness.hpp"
#include "rbfpu/linalg.hpp"
#include "rbfpu/pu.hpp"
#include "rbfpu/selection.hpp"
#include "test_util.hpp"

namespace {

using namespace rbfpu;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Dataset halton_product(std::size_t n) {
  PointSet nodes = halton_sequence(n, 2);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = product_function(nodes[i]);
  return Dataset(std::move(nodes), std::move(f));
}

Outcome rippa_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> count(2, 20);
  std::uniform_real_distribution<double> log_shape(std::log(0.05), std::log(20.0));
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  int checked = 0, rejected = 0;
  double worst = 0.0;
  while (checked < 250) {
    const std::size_t n = count(rng);
    const std::size_t dim = 1 + rng() % 2;
    const auto tag = rng() % 2 ? KernelTag::IMQ : KernelTag::MaternC2;
    const Kernel phi(tag, std::exp(log_shape(rng)));
    const auto pts = testing::random_points(n, dim, rng);
    const auto k = [&](double r) { return phi(r); };
    if (oracle::condition_number(oracle::kernel_matrix(pts, k)) > 1e8) {
      ++rejected;
      continue;
    }
    std::vector<double> f(n);
    for (auto& v : f) v = value(rng);
    const auto fact = factorize_spd(gram_matrix(phi, testing::to_pointset(pts)));
    const auto e = rippa_errors(fact.solve(f), fact.inverse_diagonal());
    const auto expected = oracle::leave_one_out_residuals(pts, f, k);
    const double scale = std::max(oracle::max_abs(expected), 1e-300);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(e[i] - expected[i]) / scale);
    ++checked;
  }
  return {worst <= 1e-8, fmt("%d instances (%d rejected by cond>1e8), max rel err %.2e", checked, rejected, worst)};
}

Outcome partition_of_unity() {
  double worst = 0.0;
  std::size_t uncovered_total = 0;
  for (std::size_t n : {289u, 1089u}) {
    const PUModel m = fit_pu_variable(halton_product(n));
    std::mt19937_64 rng(n);
    for (const auto& x : testing::random_points(10000, 2, rng)) {
      bool uncovered = false;
      double sum = 0.0;
      for (const auto& [j, w] : m.partition_weights(x, &uncovered)) sum += w;
      uncovered_total += uncovered;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return {worst <= 1e-12 && uncovered_total == 0,
          fmt("max |sum W - 1| = %.2e over 2x10^4 points, %zu uncovered", worst, uncovered_total)};
}

Outcome interpolation_property() {
  const Dataset d = halton_product(289);
  const PUModel m = fit_pu_variable(d);
  const auto v = m.evaluate(d.nodes());
  double res = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    res = std::max(res, std::abs(v[i] - d.values()[i]));
    fmax = std::max(fmax, std::abs(d.values()[i]));
  }
  return {res <= 1e-6 * fmax, fmt("max node residual %.2e, bound %.2e", res, 1e-6 * fmax)};
}

struct BenchData {
  std::vector<BenchmarkRow> rows;
  double seconds = 0.0;
  bool ok() const {
    for (const auto& r : rows)
      if (!r.error.empty() || !r.variable || !r.fixed) return false;
    return rows.size() == 3;
  }
};

const BenchData& benchmark() {
  static const BenchData data = [] {
    BenchData b;
    const auto t0 = std::chrono::steady_clock::now();
    b.rows = run_benchmark(ExperimentConfig{});
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return b;
  }();
  return data;
}

Outcome variable_accuracy() {
  const auto& b = benchmark();
  if (!b.ok()) return {false, "benchmark rows failed"};
  const double r289 = b.rows[0].variable->rmse, r1089 = b.rows[1].variable->rmse;
  const double secs = b.rows[0].seconds_variable + b.rows[1].seconds_variable;
  return {r289 <= 1e-4 && r1089 <= 3e-5 && secs < 120.0,
          fmt("RMSE %.3e (N=289, MAE %.3e), %.3e (N=1089); %.1f s", r289, b.rows[0].variable->mae, r1089, secs)};
}

Outcome fixed_accuracy() {
  const auto& b = benchmark();
  if (!b.ok()) return {false, "benchmark rows failed"};
  const double r = b.rows[0].fixed->rmse, ref = 3.64e-3;
  return {r >= ref / 10 && r <= ref * 10, fmt("RMSE %.3e at N=289, eps=0.6 (reference %.2e, factor %.2f)", r, ref, r / ref)};
}

Outcome dominance() {
  const auto& b = benchmark();
  if (!b.ok()) return {false, "benchmark rows failed"};
  bool pass = true;
  std::string detail;
  for (const auto& r : b.rows) {
    pass &= r.variable->rmse < r.fixed->rmse;
    detail += fmt("N=%zu %.2e<%.2e ", r.n_nodes, r.variable->rmse, r.fixed->rmse);
  }
  return {pass, detail};
}

Outcome monotone() {
  const auto& b = benchmark();
  if (!b.ok()) return {false, "benchmark rows failed"};
  const auto& r = b.rows;
  const bool pass = r[1].variable->rmse < r[0].variable->rmse && r[2].variable->rmse < r[1].variable->rmse;
  return {pass, fmt("RMSE %.3e > %.3e > %.3e (N=289,1089,4225)", r[0].variable->rmse, r[1].variable->rmse,
                    r[2].variable->rmse)};
}

Outcome contour_holdout() {
  const Dataset raw = contour_dataset(8000, 40, 1);
  const auto [lo, hi] = std::minmax_element(raw.values().begin(), raw.values().end());
  ExperimentConfig c;
  c.kernel = KernelTag::MaternC2;
  c.holdout = 90;
  c.seed = 1;
  const HoldoutResult r = run_holdout(raw, c);
  const bool finite = std::isfinite(r.variable.rmse) && std::isfinite(r.variable.mae);
  const bool pass = finite && r.fixed && r.variable.rmse <= r.fixed->rmse && r.n_holdout == 90;
  return {pass, fmt("N=%zu, values span %.0f; holdout RMSE %.3e MAE %.3e vs fixed RMSE %.3e MAE %.3e", raw.size(),
                    *hi - *lo, r.variable.rmse, r.variable.mae, r.fixed ? r.fixed->rmse : NAN,
                    r.fixed ? r.fixed->mae : NAN)};
}

Outcome determinism() {
  testing::TempDir dir("acceptance_det");
  write_benchmark_csv(dir / "a.csv", benchmark().rows);
  write_benchmark_csv(dir / "b.csv", run_benchmark(ExperimentConfig{}));
  const auto a = testing::read_text(dir / "a.csv"), b = testing::read_text(dir / "b.csv");
  return {!a.empty() && a == b, fmt("two runs, %zu-byte CSVs %s", a.size(), a == b ? "identical" : "differ")};
}

Outcome density_adaptivity() {
  // 90% of the nodes in x < 0.5, 10% in x > 0.5.
  const PointSet h = halton_sequence(4000, 2);
  PointSet pts(2);
  std::vector<double> f;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const std::vector<double> p = i % 10 == 0 ? std::vector<double>{0.5 + 0.5 * h[i][0], h[i][1]}
                                              : std::vector<double>{0.5 * h[i][0], h[i][1]};
    pts.push_back(p);
    f.push_back(product_function(p));
  }
  const Dataset d(pts, f);
  const PUModel m = fit_pu_variable(d);
  const double baseline = m.cover().baseline_radius;
  const std::size_t n = d.size();
  const double target = std::min(std::ceil(n * M_PI * baseline * baseline), double(n));
  const std::size_t required = std::max<std::size_t>(static_cast<std::size_t>(target), 3);

  std::vector<oracle::Point> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.emplace_back(pts[i].begin(), pts[i].end());
  std::size_t sparse = 0, above = 0, oracle_agrees = 0;
  double smallest = INFINITY;
  for (const auto& p : m.subdomains()) {
    if (p.center[0] <= 0.5) continue;
    ++sparse;
    above += p.radius_lower_bound > baseline;
    smallest = std::min(smallest, p.radius_lower_bound / baseline);
    oracle_agrees += oracle::linear_scan(nodes, p.center, baseline).size() < required;
  }
  return {sparse > 0 && above == sparse && oracle_agrees == sparse,
          fmt("%zu/%zu sparse-half centers with delta_lower > baseline (min ratio %.2f), oracle count < %zu for %zu",
              above, sparse, smallest, required, oracle_agrees)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 loocv identity vs explicit refits", rippa_oracle},
      {"2 partition of unity", partition_of_unity},
      {"3 interpolation at nodes", interpolation_property},
      {"4 variable-mode accuracy", variable_accuracy},
      {"5 fixed-mode accuracy", fixed_accuracy},
      {"6 variable beats fixed", dominance},
      {"7 monotone in N", monotone},
      {"8 contour holdout", contour_holdout},
      {"9 deterministic benchmark", determinism},
      {"10 density adaptivity", density_adaptivity},
  };
  const double limits[] = {10.0, 30.0, 0, 0, 0, 0, 0, 0, 0, 0};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, fn] = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limits[i] > 0 && secs >= limits[i]) {
      o.pass = false;
      o.detail += fmt(" (runtime limit %.0f s exceeded)", limits[i]);
    }
    failed += !o.pass;
    std::printf("%s  %-38s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
