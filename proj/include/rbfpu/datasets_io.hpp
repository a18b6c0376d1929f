#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rbfpu/geometry.hpp"

namespace rbfpu {

/// Parses one record per line: `dim` coordinates then the value, separated by
/// commas and/or whitespace. Blank lines and lines starting with '#' are
/// skipped. Parse and duplicate-node errors name the offending line(s).
Dataset load_delimited(const std::filesystem::path& path, std::size_t dim);
Dataset parse_delimited(std::istream& in, std::size_t dim, const std::string& source = "<stream>");

/// Points only; lines may carry `dim` or `dim + 1` fields (a trailing value
/// column is ignored), so a training file doubles as a query file.
PointSet load_points(const std::filesystem::path& path, std::size_t dim);
PointSet parse_points(std::istream& in, std::size_t dim, const std::string& source = "<stream>");

/// Writes coordinates and values with 17 significant digits.
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Affine per-axis map of a bounding box onto the unit hypercube:
/// unit = (raw - offset) * scale.
struct DomainTransform {
  std::vector<double> offset;
  std::vector<double> scale;

  std::size_t dim() const noexcept { return offset.size(); }
  std::vector<double> forward(std::span<const double> raw) const;
  std::vector<double> inverse(std::span<const double> unit) const;
  PointSet forward(const PointSet& raw) const;

  static DomainTransform identity(std::size_t dim);
};

/// Maps the node bounding box onto [0,1]^M. Values are left untouched.
/// Throws DegenerateDomain if an axis has zero extent.
std::pair<Dataset, DomainTransform> rescale_to_unit(const Dataset& raw);

struct SplitSpec {
  std::size_t holdout = 0;
  std::uint64_t seed = 0;
};

/// Name of the generator behind validation_split, for provenance records.
inline constexpr const char* kSplitRngName = "mt19937_64+fisher-yates";

struct SplitResult {
  Dataset train;
  Dataset holdout;
  std::vector<std::size_t> train_indices;    // ascending
  std::vector<std::size_t> holdout_indices;  // ascending
};

/// Seeded Fisher-Yates shuffle; the first k shuffled indices are held out.
/// The result depends only on (seed, N, k). Throws InvalidSplit unless 0 < k < N.
SplitResult validation_split(const Dataset& dataset, const SplitSpec& spec);

struct ResultRow {
  std::string label;
  double rmse = 0.0;
  double mae = 0.0;
  double seconds = 0.0;
};

/// CSV with header "label,rmse,mae,seconds"; numbers in %.5e.
void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

/// Scientific notation with 6 significant digits.
std::string format_sci(double v);

}  // namespace rbfpu
