#pragma once

#include <string_view>
#include <vector>

#include "rbfpu/points.hpp"

namespace rbfpu {

enum class KernelTag { MaternC2, IMQ };

/// Radial kernel with a positive shape parameter; value 1 at r = 0.
class Kernel {
 public:
  /// Throws InvalidArgument unless shape > 0 and finite.
  Kernel(KernelTag tag, double shape);

  KernelTag tag() const noexcept { return tag_; }
  double shape() const noexcept { return shape_; }

  /// Throws InvalidArgument for negative r.
  double operator()(double r) const;

  /// No domain check; r must be non-negative.
  double eval_unchecked(double r) const noexcept;

 private:
  KernelTag tag_;
  double shape_;
};

std::string_view to_string(KernelTag tag) noexcept;

/// Accepts "imq", "matern2", "maternc2", "matern" (case-insensitive).
KernelTag parse_kernel_tag(std::string_view name);

double kernel_eval(const Kernel& kernel, double r);

/// Dense symmetric matrix, row-major.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t k) const noexcept { return data[i * n + k]; }
  double& operator()(std::size_t i, std::size_t k) noexcept { return data[i * n + k]; }
};

/// Interpolation matrix of the kernel over `points`. The upper triangle is
/// assembled and mirrored so the result is exactly symmetric.
/// Throws DuplicateNode if two points coincide.
SymmetricMatrix gram_matrix(const Kernel& kernel, const PointSet& points);

/// Same, without the distinctness check (callers already hold a Dataset).
SymmetricMatrix gram_matrix_unchecked(const Kernel& kernel, const PointSet& points);

}  // namespace rbfpu
