#include "rbfpu/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "rbfpu/error.hpp"
#include "rbfpu/geometry.hpp"

namespace rbfpu {

Kernel::Kernel(KernelTag tag, double shape) : tag_(tag), shape_(shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(ErrorCode::InvalidArgument,
                "shape parameter must be positive and finite, got " + std::to_string(shape));
  }
}

double Kernel::eval_unchecked(double r) const noexcept {
  const double t = shape_ * r;
  switch (tag_) {
    case KernelTag::MaternC2: return std::exp(-t) * (1.0 + t);
    case KernelTag::IMQ: return 1.0 / std::sqrt(1.0 + t * t);
  }
  return 0.0;
}

double Kernel::operator()(double r) const {
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel evaluated at negative radius");
  return eval_unchecked(r);
}

double kernel_eval(const Kernel& kernel, double r) { return kernel(r); }

std::string_view to_string(KernelTag tag) noexcept {
  switch (tag) {
    case KernelTag::MaternC2: return "matern2";
    case KernelTag::IMQ: return "imq";
  }
  return "unknown";
}

KernelTag parse_kernel_tag(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "imq") return KernelTag::IMQ;
  if (lower == "matern2" || lower == "maternc2" || lower == "matern") return KernelTag::MaternC2;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(name) +
                                              "' (expected imq or matern2)");
}

SymmetricMatrix gram_matrix_unchecked(const Kernel& kernel, const PointSet& points) {
  const std::size_t n = points.size();
  SymmetricMatrix a{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (std::size_t k = i + 1; k < n; ++k) {
      const double v = kernel.eval_unchecked(distance(points[i], points[k]));
      a(i, k) = v;
      a(k, i) = v;
    }
  }
  return a;
}

SymmetricMatrix gram_matrix(const Kernel& kernel, const PointSet& points) {
  const auto [i, k] = find_duplicate(points);
  if (i != points.size()) {
    throw Error(ErrorCode::DuplicateNode, "gram matrix over coincident points " +
                                              std::to_string(i) + " and " + std::to_string(k));
  }
  return gram_matrix_unchecked(kernel, points);
}

}  // namespace rbfpu
