#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbfpu {

/// Row-major storage for a set of points of a common dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) noexcept {
    return {coords_.data() + i * dim_, dim_};
  }

  void push_back(std::span<const double> p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  const std::vector<double>& coords() const noexcept { return coords_; }

  /// Subset in the order given by `indices`.
  PointSet select(std::span<const std::size_t> indices) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
double distance(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace rbfpu
