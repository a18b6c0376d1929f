#include "rbfpu/points.hpp"

#include <cmath>
#include <string>

#include "rbfpu/error.hpp"

namespace rbfpu {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "point dimension must be at least 1");
  if (coords_.size() % dim_ != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "coordinate count " + std::to_string(coords_.size()) +
                    " is not a multiple of dimension " + std::to_string(dim_));
  }
}

void PointSet::push_back(std::span<const double> p) {
  if (p.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "point of dimension " + std::to_string(p.size()) +
                                                  " pushed into set of dimension " +
                                                  std::to_string(dim_));
  }
  coords_.insert(coords_.end(), p.begin(), p.end());
}

PointSet PointSet::select(std::span<const std::size_t> indices) const {
  PointSet out(dim_);
  out.reserve(indices.size());
  for (auto i : indices) out.push_back((*this)[i]);
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::DuplicateNode: return "duplicate-node";
    case ErrorCode::DegenerateCover: return "degenerate-cover";
    case ErrorCode::NotSpd: return "not-spd";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::UnfittableSubdomain: return "unfittable-subdomain";
    case ErrorCode::UncoveredPoint: return "uncovered-point";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::DegenerateDomain: return "degenerate-domain";
    case ErrorCode::InvalidSplit: return "invalid-split";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::SchemaVersion: return "schema-version";
  }
  return "unknown";
}

}  // namespace rbfpu
