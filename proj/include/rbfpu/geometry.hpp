#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rbfpu/points.hpp"

namespace rbfpu {

/// Scattered samples: N distinct nodes in M dimensions plus one value each.
class Dataset {
 public:
  Dataset() = default;

  /// Throws DuplicateNode if two nodes coincide, InvalidArgument on size
  /// mismatch or an empty node set.
  Dataset(PointSet nodes, std::vector<double> values);

  const PointSet& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t dim() const noexcept { return nodes_.dim(); }

  Dataset subset(std::span<const std::size_t> indices) const;

 private:
  PointSet nodes_;
  std::vector<double> values_;
};

/// Index of the first pair of coinciding points, if any, as {i, k} with i < k.
/// Returns {n, n} when all points are distinct.
std::pair<std::size_t, std::size_t> find_duplicate(const PointSet& points);

/// Points skip+1 .. skip+n of the Halton sequence, bases 2, 3, 5, ... per axis.
PointSet halton_sequence(std::size_t n, std::size_t dims, std::size_t skip = 0);

/// Largest dimension halton_sequence supports.
std::size_t halton_max_dim() noexcept;

/// Bucketed k-d tree answering inclusive ball queries exactly.
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointSet& points);

  /// Convenience: validates distinctness through the Dataset invariant.
  static SpatialIndex build(const Dataset& dataset) { return SpatialIndex(dataset.nodes()); }

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t dim() const noexcept { return points_.dim(); }
  const PointSet& points() const noexcept { return points_; }

  /// Indices i with |x_i - center| <= radius, ascending.
  std::vector<std::size_t> range_query(std::span<const double> center, double radius) const;

  /// Number of points with |x_i - center| <= radius.
  std::size_t count_within(std::span<const double> center, double radius) const;

  /// The k nearest points (ties broken by index), ascending by index.
  std::vector<std::size_t> nearest(std::span<const double> center, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::int64_t left = -1;
    std::int64_t right = -1;
  };

  std::int64_t build_node(std::size_t begin, std::size_t end);
  double box_distance2(std::size_t node, std::span<const double> c) const noexcept;

  template <typename Visit>
  void visit_ball(std::span<const double> center, double radius, Visit&& visit) const;

  PointSet points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  // Per node: dim lower bounds followed by dim upper bounds.
  std::vector<double> boxes_;
};

/// Uniform grid of subdomain centers over the unit hypercube.
struct PUCover {
  std::size_t dim = 0;
  std::size_t per_axis = 0;
  double spacing = 0.0;
  double baseline_radius = 0.0;
  PointSet centers;

  std::size_t count() const noexcept { return centers.size(); }
  /// Distance from any point of the cube to its nearest center is at most this.
  double covering_radius() const noexcept;
};

/// Per-axis count is the smallest n with 4 n^M >= N.
PUCover generate_pu_cover(std::size_t n_nodes, std::size_t dim);

/// Cover with an explicit per-axis center count.
PUCover make_pu_cover(std::size_t per_axis, std::size_t dim);

/// Volume of the M-ball of the given radius.
double ball_volume(double radius, std::size_t dim);

struct RadiusRange {
  double delta_min = 0.0;
  double delta_max = 0.0;
  double upper_factor = 0.0;
  std::vector<double> candidates;
};

/// Growth ratio of the geometric search for the smallest admissible radius.
inline constexpr double kRadiusSearchGrowth = 1.2;
inline constexpr std::size_t kDefaultMinNodes = 3;

/// Node count a subdomain must reach: the uniform-density expectation of the
/// baseline ball (capped at N), but never below `min_nodes`.
std::size_t required_node_count(std::size_t n_nodes, const PUCover& cover, std::size_t min_nodes);

/// Smallest radius delta0 * 1.2^k (delta0 = max(baseline, covering radius))
/// whose ball around `center` holds at least `required` nodes, and P radii
/// linearly spaced over [delta_min, h * delta_min].
RadiusRange radius_range_for_count(std::span<const double> center, const SpatialIndex& index,
                                   const PUCover& cover, double upper_factor,
                                   std::size_t n_candidates, std::size_t required);

RadiusRange radius_range(std::span<const double> center, const SpatialIndex& index,
                         const PUCover& cover, double upper_factor, std::size_t n_candidates,
                         std::size_t min_nodes = kDefaultMinNodes);

}  // namespace rbfpu
