#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbfpu/geometry.hpp"
#include "rbfpu/kernels.hpp"
#include "rbfpu/selection.hpp"

namespace rbfpu {

/// Compactly supported Wendland C2 bump (1 - r/delta)_+^4 (4 r/delta + 1).
double wendland_weight(double r, double delta);

struct WeightSupport {
  std::span<const double> center;
  double radius = 0.0;
};

/// Shepard-normalized Wendland weights of `x` over the given supports.
/// Throws UncoveredPoint if every bump vanishes at x.
std::vector<double> shepard_weights(std::span<const double> x, std::span<const WeightSupport> active);

/// One patch of the partition: the RBF interpolant R_j restricted to the
/// nodes inside the ball (center, radius).
struct LocalInterpolant {
  std::vector<double> center;
  double radius = 0.0;
  Kernel kernel{KernelTag::IMQ, 1.0};
  std::vector<std::size_t> members;
  std::vector<double> coefficients;

  // Selection record; zero / +inf for fixed-parameter fits.
  double radius_lower_bound = 0.0;
  double loocv_score = kInvalidScore;

  /// R_j(x) with member coordinates taken from `nodes`.
  double operator()(const PointSet& nodes, std::span<const double> x) const;
};

/// What fit_local does when Cholesky rejects the local system.
enum class OnNotSpd {
  Throw,       ///< raise UnfittableSubdomain
  PivotedLU,   ///< solve by partial-pivoting elimination instead
};

/// Throws UnfittableSubdomain if the local system is not numerically SPD
/// (under OnNotSpd::Throw) and InvalidArgument for an empty member set.
/// `used_fallback`, if given, reports whether the LU path was taken.
LocalInterpolant fit_local(const Dataset& dataset, std::vector<std::size_t> members,
                           const Kernel& kernel, std::span<const double> center, double radius,
                           OnNotSpd on_failure = OnNotSpd::Throw, bool* used_fallback = nullptr);

enum class SelectionMode { Variable, Fixed };

std::string_view to_string(SelectionMode mode) noexcept;

/// What produced a model: the parameter grids and selection mode.
struct FitProvenance {
  SelectionMode mode = SelectionMode::Variable;
  KernelTag kernel = KernelTag::IMQ;
  std::vector<double> shapes;
  double upper_factor = 0.0;
  std::size_t n_radii = 0;
  std::size_t min_nodes = kDefaultMinNodes;
  double fixed_shape = 0.0;
  std::string weight_function = "wendland-c2-shepard";
  std::vector<std::string> warnings;
};

struct EvaluationReport {
  std::vector<double> values;
  /// Points that fell outside every support and used the nearest patch.
  std::size_t uncovered = 0;
};

/// Fitted partition-of-unity interpolant over the unit hypercube.
class PUModel {
 public:
  PUModel(PointSet nodes, PUCover cover, std::vector<LocalInterpolant> subdomains,
          FitProvenance provenance);

  std::size_t dim() const noexcept { return cover_.dim; }
  const PointSet& nodes() const noexcept { return nodes_; }
  const PUCover& cover() const noexcept { return cover_; }
  const std::vector<LocalInterpolant>& subdomains() const noexcept { return subdomains_; }
  const FitProvenance& provenance() const noexcept { return provenance_; }

  /// Indices of patches whose bump is positive at x, ascending.
  std::vector<std::size_t> active_subdomains(std::span<const double> x) const;

  /// (patch index, weight) pairs of the partition of unity at x; falls back
  /// to the nearest patch with weight 1 when x is uncovered.
  std::vector<std::pair<std::size_t, double>> partition_weights(std::span<const double> x,
                                                                bool* uncovered = nullptr) const;

  double evaluate_one(std::span<const double> x, bool* uncovered = nullptr) const;

  /// Throws OutOfDomain if a point lies outside [0,1]^M.
  EvaluationReport evaluate_detailed(const PointSet& points) const;
  std::vector<double> evaluate(const PointSet& points) const;

 private:
  PointSet nodes_;
  PUCover cover_;
  std::vector<LocalInterpolant> subdomains_;
  FitProvenance provenance_;
  PointSet patch_centers_;
  SpatialIndex center_index_;
  double max_radius_ = 0.0;
};

inline std::vector<double> evaluate(const PUModel& model, const PointSet& points) {
  return model.evaluate(points);
}

/// Tolerance on the unit-cube bounds for accepting evaluation points.
inline constexpr double kDomainTolerance = 1e-12;

bool in_unit_cube(std::span<const double> x) noexcept;

struct VariableFitOptions {
  KernelTag kernel = KernelTag::IMQ;
  std::vector<double> shapes = log_spaced_shapes(30, 1e-3, 10.0);
  double upper_factor = 2.0;
  std::size_t n_radii = 6;
  std::size_t min_nodes = kDefaultMinNodes;
  std::size_t threads = 0;
};

/// Per patch: radius range, LOOCV error matrix, best (radius, shape) pair,
/// then a fresh local fit on the full member set of the winning radius.
/// Throws UnfittableSubdomain naming the first patch without a finite score.
PUModel fit_pu_variable(const Dataset& dataset, const VariableFitOptions& options = {});

struct FixedFitOptions {
  KernelTag kernel = KernelTag::IMQ;
  double shape = 0.6;
  std::size_t min_nodes = kDefaultMinNodes;
  std::size_t threads = 0;
};

/// Radius of every patch in the fixed-parameter fit: the baseline radius,
/// widened only if it would not reach the covering radius.
double fixed_patch_radius(const PUCover& cover);

/// One radius and one shape for all patches. Empty patches borrow their
/// nearest `min_nodes` nodes, and local systems Cholesky rejects are solved by
/// pivoted LU; both record a warning.
PUModel fit_pu_fixed(const Dataset& dataset, const FixedFitOptions& options = {});

}  // namespace rbfpu
