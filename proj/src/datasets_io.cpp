#include "rbfpu/datasets_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "rbfpu/error.hpp"

namespace rbfpu {

namespace {

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == ';'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_separator(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool skippable(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

double parse_number(std::string_view field, const std::string& where) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, where + ": cannot parse number '" + std::string(field) + "'");
  }
  return v;
}

std::string location(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Unbiased draw from [0, bound) by rejection.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

Dataset parse_delimited(std::istream& in, std::size_t dim, const std::string& source) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  std::vector<double> coords;
  std::vector<double> values;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    const std::string where = location(source, lineno);
    if (fields.size() != dim + 1) {
      throw Error(ErrorCode::Parse, where + ": expected " + std::to_string(dim + 1) +
                                        " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(parse_number(fields[k], where));
    values.push_back(parse_number(fields[dim], where));
    line_of.push_back(lineno);
  }
  if (values.empty()) throw Error(ErrorCode::Parse, source + ": no data records");
  PointSet nodes(dim, std::move(coords));
  const auto [i, k] = find_duplicate(nodes);
  if (i != nodes.size()) {
    throw Error(ErrorCode::DuplicateNode, source + ": duplicate node on lines " +
                                              std::to_string(line_of[i]) + " and " +
                                              std::to_string(line_of[k]));
  }
  return Dataset(std::move(nodes), std::move(values));
}

Dataset load_delimited(const std::filesystem::path& path, std::size_t dim) {
  auto in = open_input(path);
  return parse_delimited(in, dim, path.string());
}

PointSet parse_points(std::istream& in, std::size_t dim, const std::string& source) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
  std::vector<double> coords;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    const std::string where = location(source, lineno);
    if (fields.size() != dim && fields.size() != dim + 1) {
      throw Error(ErrorCode::Parse, where + ": expected " + std::to_string(dim) + " or " +
                                        std::to_string(dim + 1) + " fields, found " +
                                        std::to_string(fields.size()));
    }
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(parse_number(fields[k], where));
  }
  return PointSet(dim, std::move(coords));
}

PointSet load_points(const std::filesystem::path& path, std::size_t dim) {
  auto in = open_input(path);
  return parse_points(in, dim, path.string());
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (double c : dataset.nodes()[i]) out << format_g17(c) << ' ';
    out << format_g17(dataset.values()[i]) << '\n';
  }
  finish_output(out, path);
}

std::vector<double> DomainTransform::forward(std::span<const double> raw) const {
  std::vector<double> out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) out[k] = (raw[k] - offset[k]) * scale[k];
  return out;
}

std::vector<double> DomainTransform::inverse(std::span<const double> unit) const {
  std::vector<double> out(unit.size());
  for (std::size_t k = 0; k < unit.size(); ++k) out[k] = unit[k] / scale[k] + offset[k];
  return out;
}

PointSet DomainTransform::forward(const PointSet& raw) const {
  if (raw.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "transform dimension mismatch");
  PointSet out(raw.dim());
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.push_back(forward(raw[i]));
  return out;
}

DomainTransform DomainTransform::identity(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

std::pair<Dataset, DomainTransform> rescale_to_unit(const Dataset& raw) {
  const std::size_t dim = raw.dim();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto p = raw.nodes()[i];
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  DomainTransform t;
  t.offset = lo;
  t.scale.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double extent = hi[k] - lo[k];
    if (!(extent > 0.0)) {
      throw Error(ErrorCode::DegenerateDomain, "axis " + std::to_string(k) + " has zero extent");
    }
    t.scale[k] = 1.0 / extent;
  }
  PointSet unit = t.forward(raw.nodes());
  // Clamp roundoff so the bounding box maps into [0,1] exactly.
  std::vector<double> coords = unit.coords();
  for (auto& c : coords) c = std::clamp(c, 0.0, 1.0);
  return {Dataset(PointSet(dim, std::move(coords)), raw.values()), std::move(t)};
}

SplitResult validation_split(const Dataset& dataset, const SplitSpec& spec) {
  const std::size_t n = dataset.size();
  if (spec.holdout == 0 || spec.holdout >= n) {
    throw Error(ErrorCode::InvalidSplit, "holdout count " + std::to_string(spec.holdout) +
                                             " must lie in [1, " + std::to_string(n - 1) + "]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(bounded_draw(rng, i + 1));
    std::swap(order[i], order[j]);
  }
  const auto cut = order.begin() + static_cast<std::ptrdiff_t>(spec.holdout);
  std::vector<std::size_t> holdout(order.begin(), cut);
  std::vector<std::size_t> train(cut, order.end());
  std::sort(holdout.begin(), holdout.end());
  std::sort(train.begin(), train.end());
  return {dataset.subset(train), dataset.subset(holdout), std::move(train), std::move(holdout)};
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  auto out = open_output(path);
  out << "label,rmse,mae,seconds\n";
  for (const auto& r : rows) {
    out << r.label << ',' << format_sci(r.rmse) << ',' << format_sci(r.mae) << ','
        << format_sci(r.seconds) << '\n';
  }
  finish_output(out, path);
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line != "label,rmse,mae,seconds") {
    throw Error(ErrorCode::Parse, path.string() + ": missing results header");
  }
  std::vector<ResultRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = location(path.string(), lineno);
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw Error(ErrorCode::Parse, where + ": expected 4 columns");
    rows.push_back({cells[0], parse_number(cells[1], where), parse_number(cells[2], where),
                    parse_number(cells[3], where)});
  }
  return rows;
}

}  // namespace rbfpu
