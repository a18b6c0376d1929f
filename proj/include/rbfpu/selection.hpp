#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rbfpu/geometry.hpp"
#include "rbfpu/kernels.hpp"

namespace rbfpu {

inline constexpr double kInvalidScore = std::numeric_limits<double>::infinity();

/// Closed-form leave-one-out residuals e_i = c_i / (A^{-1})_{ii}.
std::vector<double> rippa_errors(std::span<const double> coefficients,
                                 std::span<const double> inverse_diagonal);

/// Max-norm of the leave-one-out residuals of the interpolant through
/// (points, values). Returns kInvalidScore when the Gram matrix is not
/// numerically SPD. Throws InsufficientData for fewer than two points.
double loocv_score(const PointSet& points, std::span<const double> values, const Kernel& kernel);

/// Log-spaced shape grid: geometric midpoints of `count` equal log-width bins
/// of (lo, hi), so every value lies strictly inside the open interval.
std::vector<double> log_spaced_shapes(std::size_t count, double lo, double hi);

/// LOOCV scores over the (radius, shape) candidate grid of one subdomain.
struct ErrorMatrix {
  std::vector<double> radii;
  std::vector<double> shapes;
  std::vector<double> scores;  // radii.size() x shapes.size(), row-major

  std::size_t rows() const noexcept { return radii.size(); }
  std::size_t cols() const noexcept { return shapes.size(); }
  double operator()(std::size_t p, std::size_t q) const noexcept { return scores[p * cols() + q]; }
  double& operator()(std::size_t p, std::size_t q) noexcept { return scores[p * cols() + q]; }
};

/// Balls holding fewer than two nodes and failed factorizations score
/// kInvalidScore. Nested radii with identical member sets share a row.
ErrorMatrix build_error_matrix(std::span<const double> center, const Dataset& dataset,
                               const SpatialIndex& index, const RadiusRange& range,
                               std::span<const double> shapes, KernelTag kernel);

struct SelectedParameters {
  double delta = 0.0;
  double epsilon = 0.0;
  double score = kInvalidScore;
  std::size_t p_index = 0;
  std::size_t q_index = 0;
};

/// Minimizing entry; ties go to the smaller radius, then the smaller shape
/// index. Throws UnfittableSubdomain if no entry is finite.
SelectedParameters select_parameters(const ErrorMatrix& errors);

}  // namespace rbfpu
