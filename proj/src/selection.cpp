#include "rbfpu/selection.hpp"

#include <cmath>
#include <string>

#include "rbfpu/error.hpp"
#include "rbfpu/linalg.hpp"

namespace rbfpu {

std::vector<double> rippa_errors(std::span<const double> coefficients,
                                 std::span<const double> inverse_diagonal) {
  if (coefficients.size() != inverse_diagonal.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(coefficients.size()) + " coefficients but " +
                    std::to_string(inverse_diagonal.size()) + " inverse-diagonal entries");
  }
  std::vector<double> e(coefficients.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = coefficients[i] / inverse_diagonal[i];
  return e;
}

namespace {

double score_system(const SymmetricMatrix& gram, std::span<const double> values) {
  CholeskyFactor factor;
  try {
    factor = factorize_spd(gram);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSpd) return kInvalidScore;
    throw;
  }
  const auto coefficients = factor.solve(values);
  const auto inv_diag = factor.inverse_diagonal();
  double worst = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double e = std::abs(coefficients[i] / inv_diag[i]);
    if (!std::isfinite(e)) return kInvalidScore;
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace

double loocv_score(const PointSet& points, std::span<const double> values, const Kernel& kernel) {
  if (points.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "leave-one-out needs at least 2 points");
  }
  if (values.size() != points.size()) {
    throw Error(ErrorCode::DimensionMismatch, "values do not match points");
  }
  return score_system(gram_matrix_unchecked(kernel, points), values);
}

std::vector<double> log_spaced_shapes(std::size_t count, double lo, double hi) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "shape grid needs at least one value");
  if (!(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::InvalidArgument, "shape range must satisfy 0 < lo < hi");
  }
  const double a = std::log(lo);
  const double width = (std::log(hi) - a) / static_cast<double>(count);
  std::vector<double> shapes(count);
  for (std::size_t q = 0; q < count; ++q) {
    shapes[q] = std::exp(a + (static_cast<double>(q) + 0.5) * width);
  }
  return shapes;
}

ErrorMatrix build_error_matrix(std::span<const double> center, const Dataset& dataset,
                               const SpatialIndex& index, const RadiusRange& range,
                               std::span<const double> shapes, KernelTag kernel) {
  if (shapes.empty()) throw Error(ErrorCode::InvalidArgument, "empty shape grid");
  ErrorMatrix errors;
  errors.radii = range.candidates;
  errors.shapes.assign(shapes.begin(), shapes.end());
  errors.scores.assign(errors.rows() * errors.cols(), kInvalidScore);

  std::vector<std::size_t> previous;
  for (std::size_t p = 0; p < errors.rows(); ++p) {
    auto members = index.range_query(center, errors.radii[p]);
    if (p > 0 && members == previous) {
      for (std::size_t q = 0; q < errors.cols(); ++q) errors(p, q) = errors(p - 1, q);
      continue;
    }
    if (members.size() >= 2) {
      const PointSet local = dataset.nodes().select(members);
      std::vector<double> values(members.size());
      for (std::size_t i = 0; i < members.size(); ++i) values[i] = dataset.values()[members[i]];
      const std::size_t n = members.size();
      std::vector<double> dist(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) dist[i * n + k] = distance(local[i], local[k]);
      }
      SymmetricMatrix gram{n, std::vector<double>(n * n)};
      for (std::size_t q = 0; q < errors.cols(); ++q) {
        const Kernel phi(kernel, errors.shapes[q]);
        for (std::size_t i = 0; i < n; ++i) {
          gram(i, i) = 1.0;
          for (std::size_t k = i + 1; k < n; ++k) {
            const double v = phi.eval_unchecked(dist[i * n + k]);
            gram(i, k) = v;
            gram(k, i) = v;
          }
        }
        errors(p, q) = score_system(gram, values);
      }
    }
    previous = std::move(members);
  }
  return errors;
}

SelectedParameters select_parameters(const ErrorMatrix& errors) {
  SelectedParameters best;
  bool found = false;
  for (std::size_t p = 0; p < errors.rows(); ++p) {
    for (std::size_t q = 0; q < errors.cols(); ++q) {
      const double s = errors(p, q);
      if (!std::isfinite(s)) continue;
      if (!found || s < best.score) {
        best = {errors.radii[p], errors.shapes[q], s, p, q};
        found = true;
      }
    }
  }
  if (!found) {
    throw Error(ErrorCode::UnfittableSubdomain, "every (radius, shape) candidate failed");
  }
  return best;
}

}  // namespace rbfpu
