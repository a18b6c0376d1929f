#include "rbfpu/pu.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbfpu/error.hpp"
#include "rbfpu/linalg.hpp"
#include "rbfpu/parallel.hpp"

namespace rbfpu {

double wendland_weight(double r, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "weight support must be positive");
  const double t = r / delta;
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  const double u2 = u * u;
  return u2 * u2 * (4.0 * t + 1.0);
}

std::vector<double> shepard_weights(std::span<const double> x,
                                    std::span<const WeightSupport> active) {
  std::vector<double> w(active.size());
  double total = 0.0;
  for (std::size_t j = 0; j < active.size(); ++j) {
    w[j] = wendland_weight(distance(x, active[j].center), active[j].radius);
    total += w[j];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::UncoveredPoint, "point lies outside every subdomain support");
  }
  for (auto& v : w) v /= total;
  return w;
}

double LocalInterpolant::operator()(const PointSet& nodes, std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    s += coefficients[k] * kernel.eval_unchecked(distance(x, nodes[members[k]]));
  }
  return s;
}

LocalInterpolant fit_local(const Dataset& dataset, std::vector<std::size_t> members,
                           const Kernel& kernel, std::span<const double> center, double radius,
                           OnNotSpd on_failure, bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  if (members.empty()) throw Error(ErrorCode::InvalidArgument, "local fit without members");
  const PointSet local = dataset.nodes().select(members);
  std::vector<double> values(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) values[i] = dataset.values()[members[i]];

  LocalInterpolant patch;
  patch.center.assign(center.begin(), center.end());
  patch.radius = radius;
  patch.kernel = kernel;
  const SymmetricMatrix gram = gram_matrix_unchecked(kernel, local);
  try {
    patch.coefficients = factorize_spd(gram).solve(values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotSpd) throw;
    if (on_failure == OnNotSpd::PivotedLU) {
      patch.coefficients = lu_solve(gram, values);
      if (used_fallback) *used_fallback = true;
      patch.members = std::move(members);
      return patch;
    }
    throw Error(ErrorCode::UnfittableSubdomain,
                "local system with " + std::to_string(members.size()) + " nodes and shape " +
                    std::to_string(kernel.shape()) + " is not numerically SPD");
  }
  patch.members = std::move(members);
  return patch;
}

std::string_view to_string(SelectionMode mode) noexcept {
  return mode == SelectionMode::Variable ? "variable" : "fixed";
}

bool in_unit_cube(std::span<const double> x) noexcept {
  return std::all_of(x.begin(), x.end(), [](double v) {
    return v >= -kDomainTolerance && v <= 1.0 + kDomainTolerance;
  });
}

namespace {

PointSet collect_centers(std::size_t dim, const std::vector<LocalInterpolant>& patches) {
  PointSet centers(dim);
  centers.reserve(patches.size());
  for (const auto& p : patches) centers.push_back(p.center);
  return centers;
}

void require_unit_cube(const PointSet& points, const char* what) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!in_unit_cube(points[i])) {
      throw Error(ErrorCode::OutOfDomain, std::string(what) + " " + std::to_string(i) +
                                              " lies outside the unit hypercube");
    }
  }
}

}  // namespace

PUModel::PUModel(PointSet nodes, PUCover cover, std::vector<LocalInterpolant> subdomains,
                 FitProvenance provenance)
    : nodes_(std::move(nodes)),
      cover_(std::move(cover)),
      subdomains_(std::move(subdomains)),
      provenance_(std::move(provenance)),
      patch_centers_(collect_centers(cover_.dim, subdomains_)),
      center_index_(patch_centers_) {
  if (subdomains_.empty()) throw Error(ErrorCode::InvalidArgument, "model without subdomains");
  for (const auto& p : subdomains_) {
    if (p.center.size() != cover_.dim) {
      throw Error(ErrorCode::DimensionMismatch, "subdomain center dimension differs from cover");
    }
    if (p.members.size() != p.coefficients.size()) {
      throw Error(ErrorCode::DimensionMismatch, "subdomain members and coefficients differ in count");
    }
    for (auto m : p.members) {
      if (m >= nodes_.size()) throw Error(ErrorCode::InvalidArgument, "subdomain member out of range");
    }
    max_radius_ = std::max(max_radius_, p.radius);
  }
}

std::vector<std::size_t> PUModel::active_subdomains(std::span<const double> x) const {
  auto candidates = center_index_.range_query(x, max_radius_);
  std::erase_if(candidates, [&](std::size_t j) {
    return wendland_weight(distance(x, subdomains_[j].center), subdomains_[j].radius) <= 0.0;
  });
  return candidates;
}

std::vector<std::pair<std::size_t, double>> PUModel::partition_weights(std::span<const double> x,
                                                                       bool* uncovered) const {
  const auto active = active_subdomains(x);
  if (uncovered) *uncovered = active.empty();
  if (active.empty()) return {{center_index_.nearest(x, 1).front(), 1.0}};

  std::vector<WeightSupport> supports;
  supports.reserve(active.size());
  for (auto j : active) supports.push_back({subdomains_[j].center, subdomains_[j].radius});
  const auto w = shepard_weights(x, supports);
  std::vector<std::pair<std::size_t, double>> out(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) out[k] = {active[k], w[k]};
  return out;
}

double PUModel::evaluate_one(std::span<const double> x, bool* uncovered) const {
  double s = 0.0;
  for (const auto& [j, w] : partition_weights(x, uncovered)) s += w * subdomains_[j](nodes_, x);
  return s;
}

EvaluationReport PUModel::evaluate_detailed(const PointSet& points) const {
  if (points.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "evaluation points have dimension " +
                                                  std::to_string(points.dim()) + ", model has " +
                                                  std::to_string(dim()));
  }
  require_unit_cube(points, "evaluation point");
  EvaluationReport report;
  report.values.resize(points.size());
  std::vector<char> flags(points.size(), 0);
  parallel_for(points.size(), 0, [&](std::size_t i) {
    bool uncovered = false;
    report.values[i] = evaluate_one(points[i], &uncovered);
    flags[i] = uncovered ? 1 : 0;
  });
  report.uncovered = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  return report;
}

std::vector<double> PUModel::evaluate(const PointSet& points) const {
  return evaluate_detailed(points).values;
}

PUModel fit_pu_variable(const Dataset& dataset, const VariableFitOptions& options) {
  if (options.shapes.empty()) throw Error(ErrorCode::InvalidArgument, "empty shape grid");
  require_unit_cube(dataset.nodes(), "node");
  const SpatialIndex index(dataset.nodes());
  PUCover cover = generate_pu_cover(dataset.size(), dataset.dim());
  const std::size_t required = required_node_count(dataset.size(), cover, options.min_nodes);

  std::vector<LocalInterpolant> patches(cover.count());
  parallel_for(cover.count(), options.threads, [&](std::size_t j) {
    const auto center = cover.centers[j];
    const RadiusRange range = radius_range_for_count(center, index, cover, options.upper_factor,
                                                     options.n_radii, required);
    const ErrorMatrix errors =
        build_error_matrix(center, dataset, index, range, options.shapes, options.kernel);
    SelectedParameters best;
    try {
      best = select_parameters(errors);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnfittableSubdomain) throw;
      throw Error(ErrorCode::UnfittableSubdomain,
                  "subdomain " + std::to_string(j) + " has no finite LOOCV score");
    }
    patches[j] = fit_local(dataset, index.range_query(center, best.delta),
                           Kernel(options.kernel, best.epsilon), center, best.delta);
    patches[j].radius_lower_bound = range.delta_min;
    patches[j].loocv_score = best.score;
  });

  FitProvenance provenance;
  provenance.mode = SelectionMode::Variable;
  provenance.kernel = options.kernel;
  provenance.shapes = options.shapes;
  provenance.upper_factor = options.upper_factor;
  provenance.n_radii = options.n_radii;
  provenance.min_nodes = options.min_nodes;
  return PUModel(dataset.nodes(), std::move(cover), std::move(patches), std::move(provenance));
}

double fixed_patch_radius(const PUCover& cover) {
  const double kappa = std::max(1.0, cover.covering_radius() / cover.baseline_radius);
  return cover.baseline_radius * kappa;
}

PUModel fit_pu_fixed(const Dataset& dataset, const FixedFitOptions& options) {
  const Kernel kernel(options.kernel, options.shape);
  require_unit_cube(dataset.nodes(), "node");
  const SpatialIndex index(dataset.nodes());
  PUCover cover = generate_pu_cover(dataset.size(), dataset.dim());
  const double radius = fixed_patch_radius(cover);

  std::vector<LocalInterpolant> patches(cover.count());
  std::vector<char> borrowed(cover.count(), 0);
  std::vector<char> pivoted(cover.count(), 0);
  parallel_for(cover.count(), options.threads, [&](std::size_t j) {
    const auto center = cover.centers[j];
    auto members = index.range_query(center, radius);
    if (members.empty()) {
      members = index.nearest(center, std::max<std::size_t>(options.min_nodes, 1));
      borrowed[j] = 1;
    }
    try {
      bool used_lu = false;
      patches[j] = fit_local(dataset, std::move(members), kernel, center, radius,
                             OnNotSpd::PivotedLU, &used_lu);
      pivoted[j] = used_lu ? 1 : 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnfittableSubdomain) throw;
      throw Error(ErrorCode::UnfittableSubdomain,
                  "subdomain " + std::to_string(j) + ": " + e.what());
    }
  });

  FitProvenance provenance;
  provenance.mode = SelectionMode::Fixed;
  provenance.kernel = options.kernel;
  provenance.shapes = {options.shape};
  provenance.fixed_shape = options.shape;
  provenance.min_nodes = options.min_nodes;
  for (std::size_t j = 0; j < borrowed.size(); ++j) {
    if (borrowed[j]) {
      provenance.warnings.push_back("subdomain " + std::to_string(j) +
                                    " was empty; fitted on its nearest nodes");
    }
    if (pivoted[j]) {
      provenance.warnings.push_back("subdomain " + std::to_string(j) +
                                    " is not numerically SPD; solved by pivoted LU");
    }
  }
  return PUModel(dataset.nodes(), std::move(cover), std::move(patches), std::move(provenance));
}

}  // namespace rbfpu
