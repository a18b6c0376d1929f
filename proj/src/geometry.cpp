#include "rbfpu/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "rbfpu/error.hpp"

namespace rbfpu {

namespace {

constexpr std::array<unsigned, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,  29,  31,
                                              37, 41, 43, 47, 53, 59, 61, 67, 71,  73,  79,
                                              83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

constexpr std::size_t kLeafSize = 16;

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return result;
}

}  // namespace

std::pair<std::size_t, std::size_t> find_duplicate(const PointSet& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = points[a];
    const auto pb = points[b];
    if (std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end())) return true;
    if (std::equal(pa.begin(), pa.end(), pb.begin())) return a < b;
    return false;
  });
  for (std::size_t k = 1; k < n; ++k) {
    const auto pa = points[order[k - 1]];
    const auto pb = points[order[k]];
    if (std::equal(pa.begin(), pa.end(), pb.begin())) {
      return {std::min(order[k - 1], order[k]), std::max(order[k - 1], order[k])};
    }
  }
  return {n, n};
}

Dataset::Dataset(PointSet nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.empty()) throw Error(ErrorCode::InvalidArgument, "dataset has no nodes");
  if (nodes_.size() != values_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(nodes_.size()) + " nodes but " + std::to_string(values_.size()) +
                    " values");
  }
  const auto [i, k] = find_duplicate(nodes_);
  if (i != nodes_.size()) {
    throw Error(ErrorCode::DuplicateNode, "nodes " + std::to_string(i) + " and " +
                                              std::to_string(k) + " coincide");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> vals;
  vals.reserve(indices.size());
  for (auto i : indices) vals.push_back(values_[i]);
  return Dataset(nodes_.select(indices), std::move(vals));
}

std::size_t halton_max_dim() noexcept { return kPrimes.size(); }

PointSet halton_sequence(std::size_t n, std::size_t dims, std::size_t skip) {
  if (dims == 0) throw Error(ErrorCode::InvalidArgument, "Halton dimension must be at least 1");
  if (dims > kPrimes.size()) {
    throw Error(ErrorCode::UnsupportedDimension,
                "Halton sequence supports at most " + std::to_string(kPrimes.size()) +
                    " dimensions, got " + std::to_string(dims));
  }
  std::vector<double> coords;
  coords.reserve(n * dims);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 0; k < dims; ++k) coords.push_back(radical_inverse(skip + i, kPrimes[k]));
  }
  return PointSet(dims, std::move(coords));
}

// ---------------------------------------------------------------------------
// k-d tree

SpatialIndex::SpatialIndex(const PointSet& points) : points_(points) {
  if (points_.dim() == 0) throw Error(ErrorCode::InvalidArgument, "index over dimensionless points");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!order_.empty()) build_node(0, order_.size());
}

std::int64_t SpatialIndex::build_node(std::size_t begin, std::size_t end) {
  const std::size_t dim = points_.dim();
  const auto id = static_cast<std::int64_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1});
  const std::size_t box = boxes_.size();
  boxes_.resize(box + 2 * dim);
  for (std::size_t k = 0; k < dim; ++k) {
    boxes_[box + k] = std::numeric_limits<double>::infinity();
    boxes_[box + dim + k] = -std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = begin; i < end; ++i) {
    const auto p = points_[order_[i]];
    for (std::size_t k = 0; k < dim; ++k) {
      boxes_[box + k] = std::min(boxes_[box + k], p[k]);
      boxes_[box + dim + k] = std::max(boxes_[box + dim + k], p[k]);
    }
  }
  if (end - begin <= kLeafSize) return id;

  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double w = boxes_[box + dim + k] - boxes_[box + k];
    if (w > widest) {
      widest = w;
      axis = k;
    }
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double pa = points_[a][axis];
                     const double pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const auto left = build_node(begin, mid);
  const auto right = build_node(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double SpatialIndex::box_distance2(std::size_t node, std::span<const double> c) const noexcept {
  const std::size_t dim = points_.dim();
  const double* lo = boxes_.data() + node * 2 * dim;
  const double* hi = lo + dim;
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double t = 0.0;
    if (c[k] < lo[k]) t = lo[k] - c[k];
    else if (c[k] > hi[k]) t = c[k] - hi[k];
    s += t * t;
  }
  return s;
}

template <typename Visit>
void SpatialIndex::visit_ball(std::span<const double> center, double radius, Visit&& visit) const {
  if (nodes_.empty()) return;
  if (center.size() != points_.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query point dimension does not match index");
  }
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "query radius must be non-negative");
  const double r2 = radius * radius;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (box_distance2(id, center) > r2) continue;
    const Node& node = nodes_[id];
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        if (squared_distance(points_[idx], center) <= r2) visit(idx);
      }
    } else {
      stack.push_back(static_cast<std::size_t>(node.right));
      stack.push_back(static_cast<std::size_t>(node.left));
    }
  }
}

std::vector<std::size_t> SpatialIndex::range_query(std::span<const double> center,
                                                   double radius) const {
  std::vector<std::size_t> out;
  visit_ball(center, radius, [&](std::size_t i) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SpatialIndex::count_within(std::span<const double> center, double radius) const {
  std::size_t n = 0;
  visit_ball(center, radius, [&](std::size_t) { ++n; });
  return n;
}

std::vector<std::size_t> SpatialIndex::nearest(std::span<const double> center,
                                               std::size_t k) const {
  const std::size_t n = points_.size();
  k = std::min(k, n);
  std::vector<std::pair<double, std::size_t>> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = {squared_distance(points_[i], center), i};
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// cover

double PUCover::covering_radius() const noexcept {
  return spacing * std::sqrt(static_cast<double>(dim)) / 2.0;
}

PUCover make_pu_cover(std::size_t per_axis, std::size_t dim) {
  if (per_axis == 0 || dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "cover needs at least one center per axis");
  }
  PUCover cover;
  cover.dim = dim;
  cover.per_axis = per_axis;
  cover.spacing = 1.0 / static_cast<double>(per_axis);
  std::size_t d = 1;
  for (std::size_t k = 0; k < dim; ++k) d *= per_axis;
  // 1/d^{1/M} equals the spacing; computed that way to keep it exact.
  cover.baseline_radius = cover.spacing;
  cover.centers = PointSet(dim);
  cover.centers.reserve(d);
  std::vector<std::size_t> digit(dim, 0);
  std::vector<double> p(dim);
  for (std::size_t j = 0; j < d; ++j) {
    // Axis 0 varies slowest.
    for (std::size_t k = 0; k < dim; ++k) p[k] = (static_cast<double>(digit[k]) + 0.5) * cover.spacing;
    cover.centers.push_back(p);
    for (std::size_t k = dim; k-- > 0;) {
      if (++digit[k] < per_axis) break;
      digit[k] = 0;
    }
  }
  return cover;
}

PUCover generate_pu_cover(std::size_t n_nodes, std::size_t dim) {
  if (n_nodes == 0 || dim == 0) throw Error(ErrorCode::InvalidArgument, "cover needs N >= 1 and M >= 1");
  auto fits = [&](std::size_t n) {
    double v = 4.0;
    for (std::size_t k = 0; k < dim; ++k) v *= static_cast<double>(n);
    return v >= static_cast<double>(n_nodes);
  };
  const double guess = std::pow(static_cast<double>(n_nodes) / 4.0, 1.0 / static_cast<double>(dim));
  auto n = static_cast<std::size_t>(std::max(1.0, std::floor(guess) - 1.0));
  while (!fits(n)) ++n;
  while (n > 1 && fits(n - 1)) --n;
  return make_pu_cover(n, dim);
}

double ball_volume(double radius, std::size_t dim) {
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be non-negative");
  const double m = static_cast<double>(dim);
  const double unit = std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
  return unit * std::pow(radius, m);
}

std::size_t required_node_count(std::size_t n_nodes, const PUCover& cover, std::size_t min_nodes) {
  const double expected =
      std::ceil(static_cast<double>(n_nodes) * ball_volume(cover.baseline_radius, cover.dim));
  const auto density = static_cast<std::size_t>(std::min(expected, static_cast<double>(n_nodes)));
  return std::max(density, min_nodes);
}

RadiusRange radius_range_for_count(std::span<const double> center, const SpatialIndex& index,
                                   const PUCover& cover, double upper_factor,
                                   std::size_t n_candidates, std::size_t required) {
  if (!(upper_factor > 1.0)) throw Error(ErrorCode::InvalidArgument, "radius factor h must exceed 1");
  if (n_candidates < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 radius candidates");

  const double diameter = std::sqrt(static_cast<double>(cover.dim));
  const double start = std::max(cover.baseline_radius, cover.covering_radius());
  double delta = start;
  bool found = false;
  while (delta <= diameter) {
    if (index.count_within(center, delta) >= required) {
      found = true;
      break;
    }
    delta *= kRadiusSearchGrowth;
  }
  if (!found && index.count_within(center, diameter) >= required) {
    delta = diameter;
    found = true;
  }
  if (!found) {
    throw Error(ErrorCode::DegenerateCover,
                "no radius up to the domain diameter encloses " + std::to_string(required) +
                    " nodes");
  }

  RadiusRange range;
  range.delta_min = delta;
  range.delta_max = upper_factor * delta;
  range.upper_factor = upper_factor;
  range.candidates.resize(n_candidates);
  const double step = (range.delta_max - delta) / static_cast<double>(n_candidates - 1);
  for (std::size_t p = 0; p < n_candidates; ++p) range.candidates[p] = delta + step * static_cast<double>(p);
  range.candidates.back() = range.delta_max;
  return range;
}

RadiusRange radius_range(std::span<const double> center, const SpatialIndex& index,
                         const PUCover& cover, double upper_factor, std::size_t n_candidates,
                         std::size_t min_nodes) {
  return radius_range_for_count(center, index, cover, upper_factor, n_candidates,
                                required_node_count(index.size(), cover, min_nodes));
}

}  // namespace rbfpu
