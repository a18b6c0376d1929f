#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rbfpu/datasets_io.hpp"
#include "rbfpu/error.hpp"
#include "test_util.hpp"

namespace rbfpu {
namespace {

using testing::TempDir;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

Dataset random_dataset(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 100.0);
  PointSet pts(dim);
  std::vector<double> f;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    for (auto& c : p) c = g(rng);
    pts.push_back(p);
    f.push_back(g(rng));
  }
  return Dataset(std::move(pts), std::move(f));
}

TEST(LoadDelimited, WhitespaceRecords) {
  TempDir dir("load_ws");
  testing::write_text(dir / "a.txt", "0 0 1\n1 1 2\n");
  const Dataset d = load_delimited(dir / "a.txt", 2);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.values(), (std::vector<double>{1, 2}));
  EXPECT_EQ(d.nodes()[1][0], 1.0);
}

TEST(LoadDelimited, CommasCommentsAndBlankLines) {
  std::istringstream in("# x,y,z\n\n0.5, 0.25, -3e2\n  # indented comment\n1,2,3\r\n");
  const Dataset d = parse_delimited(in, 2);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.values()[0], -300.0);
  EXPECT_EQ(d.nodes()[0][1], 0.25);
}

TEST(LoadDelimited, ShortLineNamesTheLine) {
  std::istringstream in("0 0 1\n1 1\n");
  try {
    parse_delimited(in, 2, "data.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("data.txt:2"), std::string::npos) << e.what();
  }
}

TEST(LoadDelimited, NonNumericField) {
  std::istringstream in("0 0 1\n\n1 x 2\n");
  try {
    parse_delimited(in, 2, "f");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("f:3"), std::string::npos) << e.what();
  }
}

TEST(LoadDelimited, DuplicateNodeReportsBothLines) {
  std::istringstream in("0 0 1\n0.5 0.5 2\n0 0 3\n");
  try {
    parse_delimited(in, 2, "f");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateNode);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("3"), std::string::npos) << msg;
  }
}

TEST(LoadDelimited, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { load_delimited("/nonexistent/rbfpu.txt", 2); }), ErrorCode::Io);
}

TEST(LoadDelimited, GlacierSizedFile) {
  TempDir dir("load_big");
  const Dataset d = random_dataset(8345, 2, 4);
  write_dataset(dir / "g.txt", d);
  EXPECT_EQ(load_delimited(dir / "g.txt", 2).size(), 8345u);
}

TEST(LoadPoints, AcceptsOptionalValueColumn) {
  std::istringstream in("0.1 0.2\n0.3 0.4 9\n");
  const PointSet p = parse_points(in, 2);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1][1], 0.4);
  std::istringstream bad("0.1\n");
  EXPECT_EQ(code_of([&] { parse_points(bad, 2); }), ErrorCode::Parse);
}

TEST(WriteDataset, LosslessRoundtrip) {
  TempDir dir("write_ds");
  const Dataset d = random_dataset(500, 3, 8);
  write_dataset(dir / "d.txt", d);
  const Dataset r = load_delimited(dir / "d.txt", 3);
  EXPECT_EQ(r.nodes().coords(), d.nodes().coords());
  EXPECT_EQ(r.values(), d.values());
}

TEST(Rescale, TwoPointExample) {
  const Dataset raw(PointSet(2, {0, 0, 2, 4}), {5, 6});
  const auto [unit, t] = rescale_to_unit(raw);
  EXPECT_EQ(unit.nodes().coords(), (std::vector<double>{0, 0, 1, 1}));
  EXPECT_EQ(t.scale, (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(unit.values(), raw.values());
}

TEST(Rescale, UnitDataGivesIdentity) {
  const Dataset raw(PointSet(2, {0, 0, 1, 1, 0.3, 0.6}), {1, 2, 3});
  const auto [unit, t] = rescale_to_unit(raw);
  EXPECT_EQ(t.offset, (std::vector<double>{0, 0}));
  EXPECT_EQ(t.scale, (std::vector<double>{1, 1}));
  EXPECT_EQ(unit.nodes().coords(), raw.nodes().coords());
}

TEST(Rescale, ZeroExtentAxis) {
  const Dataset raw(PointSet(2, {0, 1, 2, 1}), {1, 2});
  EXPECT_EQ(code_of([&] { rescale_to_unit(raw); }), ErrorCode::DegenerateDomain);
}

TEST(Rescale, ForwardInverseRoundtrip) {
  const Dataset raw = random_dataset(100, 2, 21);
  const auto [unit, t] = rescale_to_unit(raw);
  double worst = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto back = t.inverse(unit.nodes()[i]);
    for (std::size_t a = 0; a < 2; ++a) worst = std::max(worst, std::abs(back[a] - raw.nodes()[i][a]));
    const auto fwd = t.forward(back);
    for (std::size_t a = 0; a < 2; ++a) worst = std::max(worst, std::abs(fwd[a] - unit.nodes()[i][a]));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Rescale, PerAxisSeparationScales) {
  const Dataset raw = random_dataset(50, 3, 5);
  const auto [unit, t] = rescale_to_unit(raw);
  for (std::size_t i = 1; i < raw.size(); ++i) {
    for (std::size_t a = 0; a < 3; ++a) {
      const double rs = (raw.nodes()[i][a] - raw.nodes()[0][a]) * t.scale[a];
      const double us = unit.nodes()[i][a] - unit.nodes()[0][a];
      EXPECT_NEAR(us, rs, 1e-12);
    }
  }
  for (double c : unit.nodes().coords()) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(Split, DeterministicForSeed) {
  const Dataset d = random_dataset(10, 2, 1);
  const auto a = validation_split(d, {3, 42});
  const auto b = validation_split(d, {3, 42});
  EXPECT_EQ(a.holdout_indices, b.holdout_indices);
  EXPECT_EQ(a.holdout_indices.size(), 3u);
  const auto c = validation_split(random_dataset(10, 2, 99), {3, 42});
  EXPECT_EQ(a.holdout_indices, c.holdout_indices);
}

TEST(Split, SeedChangesSelection) {
  const Dataset d = random_dataset(200, 2, 1);
  EXPECT_NE(validation_split(d, {20, 1}).holdout_indices, validation_split(d, {20, 2}).holdout_indices);
}

TEST(Split, KeepsOneTrainingNode) {
  const Dataset d = random_dataset(10, 2, 1);
  const auto s = validation_split(d, {9, 0});
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_EQ(s.holdout.size(), 9u);
}

TEST(Split, GlacierProtocolSizesAndPartition) {
  const Dataset d = random_dataset(8345, 2, 2);
  const auto s = validation_split(d, {90, 7});
  EXPECT_EQ(s.train.size(), 8255u);
  EXPECT_EQ(s.holdout.size(), 90u);
  std::vector<std::size_t> all = s.train_indices;
  all.insert(all.end(), s.holdout_indices.begin(), s.holdout_indices.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
  for (std::size_t j = 0; j < s.holdout.size(); ++j) {
    const auto i = s.holdout_indices[j];
    EXPECT_EQ(s.holdout.values()[j], d.values()[i]);
    EXPECT_EQ(s.holdout.nodes()[j][0], d.nodes()[i][0]);
  }
}

TEST(Split, InvalidCounts) {
  const Dataset d = random_dataset(10, 2, 1);
  EXPECT_EQ(code_of([&] { validation_split(d, {0, 0}); }), ErrorCode::InvalidSplit);
  EXPECT_EQ(code_of([&] { validation_split(d, {10, 0}); }), ErrorCode::InvalidSplit);
  EXPECT_EQ(code_of([&] { validation_split(d, {11, 0}); }), ErrorCode::InvalidSplit);
}

TEST(WriteResults, SingleRow) {
  TempDir dir("results_one");
  write_results(dir / "r.csv", {{"N=289", 1.03e-5, 2.36e-4, 0.8}});
  EXPECT_EQ(testing::read_text(dir / "r.csv"),
            "label,rmse,mae,seconds\nN=289,1.03000e-05,2.36000e-04,8.00000e-01\n");
}

TEST(WriteResults, EmptyIsHeaderOnly) {
  TempDir dir("results_empty");
  write_results(dir / "r.csv", {});
  EXPECT_EQ(testing::read_text(dir / "r.csv"), "label,rmse,mae,seconds\n");
  EXPECT_TRUE(read_results(dir / "r.csv").empty());
}

TEST(WriteResults, RereadMatchesAtSixDigits) {
  TempDir dir("results_reread");
  std::vector<ResultRow> rows{{"a", 1.234567891e-3, 9.87654321, 12.5}, {"b", 0.0, 1e300, 3e-7}};
  write_results(dir / "r.csv", rows);
  const auto back = read_results(dir / "r.csv");
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].label, rows[i].label);
    EXPECT_EQ(back[i].rmse, std::stod(format_sci(rows[i].rmse)));
    EXPECT_EQ(back[i].mae, std::stod(format_sci(rows[i].mae)));
    EXPECT_NEAR(back[i].seconds, rows[i].seconds, 5e-6 * rows[i].seconds);
  }
}

TEST(WriteResults, UnwritablePath) {
  EXPECT_EQ(code_of([] { write_results("/nonexistent/dir/r.csv", {}); }), ErrorCode::Io);
}

}  // namespace
}  // namespace rbfpu
