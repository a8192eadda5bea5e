#include <gtest/gtest.h>

#include "oracle.hpp"
#include "polyxt/extraction.hpp"
#include "polyxt/generator.hpp"

using namespace polyxt;

namespace {

std::vector<Scalar> longs(std::initializer_list<long> xs) {
  std::vector<Scalar> v;
  for (auto x : xs)
    v.emplace_back(x);
  return v;
}

// Block sums recomputed from the cuts, independent of the library's prefix sums.
std::vector<Scalar> block_sums(const std::vector<Scalar> &r, const std::vector<std::size_t> &cuts) {
  std::vector<Scalar> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    Scalar s = 0;
    for (std::size_t i = cuts[k]; i < cuts[k + 1]; ++i)
      s += r[i];
    out.push_back(s);
  }
  return out;
}

AdmissibleProfile steep_angles(std::size_t n) {
  // Like the strict profile but with g = 4, so turns 2 atan(t0 4^k) grow by more than 3x.
  auto p = strict_profile(n);
  p.g = 4;
  p.t0 = 1 / (pow(Scalar(4), static_cast<unsigned>(n)) * static_cast<unsigned long>(n));
  return p;
}

} // namespace

TEST(SumSubsequence, HandTracedGeometricExample) {
  // (8,4,2,1), h = 2, p = q = 2: halving keeps the right half twice, giving
  // blocks (12),(2),(1); grouping sizes 2,1 merges them into (14),(1).
  const auto r = longs({8, 4, 2, 1});
  const auto ss = sum_subsequence(r, Scalar(2), 2, 2);
  EXPECT_EQ(ss.direction, Direction::Decreasing);
  EXPECT_EQ(ss.cut_indices, (std::vector<std::size_t>{0, 3, 4}));
  EXPECT_EQ(ss.block_sums, longs({14, 1}));
  EXPECT_GE(ss.length(), 2u);
}

TEST(SumSubsequence, TrivialCasesAndErrors) {
  const auto one = sum_subsequence(longs({5}), Scalar(1), 1, 1);
  EXPECT_EQ(one.length(), 1u);
  EXPECT_EQ(one.block_sums, longs({5}));
  try {
    (void)sum_subsequence({}, Scalar(1), 2, 2);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
  try {
    (void)sum_subsequence(longs({1, -1}), Scalar(1), 2, 2);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(SumSubsequence, GuaranteedLengthForUnitRatio) {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Scalar> r(16);
    for (auto &x : r)
      x = make_scalar(1 + static_cast<long>(uniform_below(rng, 1000)), 1 + static_cast<long>(uniform_below(rng, 9)));
    const auto ss = sum_subsequence(r, Scalar(1), 3, 3);
    ASSERT_GE(ss.length(), 3u);
    EXPECT_EQ(block_sums(r, ss.cut_indices), ss.block_sums);
    EXPECT_EQ(is_h_monotone(ss.block_sums, Scalar(1)) != Direction::Neither, true);
  }
}

TEST(SumSubsequence, GuaranteedLengthForRatioTwo) {
  // P = Q = 1 + 2 = 3 blocks at h = 1 need 2^(3+3-2) = 16 entries.
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Scalar> r(16);
    for (auto &x : r)
      x = Scalar(1 + static_cast<long>(uniform_below(rng, 50)));
    const auto ss = sum_subsequence(r, Scalar(2), 2, 2);
    ASSERT_GE(ss.length(), 2u);
    EXPECT_EQ(is_h_monotone(ss.block_sums, Scalar(2)), ss.direction);
    EXPECT_EQ(block_sums(r, ss.cut_indices), ss.block_sums);
  }
}

TEST(SumSubsequence, ShortInputIsBestEffort) {
  const auto ss = sum_subsequence(longs({3, 1, 4}), Scalar(1), 4, 4);
  EXPECT_GE(ss.length(), 1u);
  EXPECT_NE(is_h_monotone(ss.block_sums, Scalar(1)), Direction::Neither);
}

TEST(Thin, WindowOnThinChainIsEverything) {
  const auto seq = generate_admissible(32, strict_profile(32));
  const auto idx = extract_thin(seq, Scalar(1, 32), 32);
  ASSERT_EQ(idx.size(), 32u);
  for (std::size_t k = 0; k < 32; ++k)
    EXPECT_EQ(idx[k], k);
}

TEST(Thin, WindowOnRegularPolygon) {
  const auto reg = generate_regular(10000, 64);
  const auto idx = extract_thin(reg, Scalar(1, 20), 20);
  ASSERT_EQ(idx.size(), 20u);
  EXPECT_EQ(idx.front(), 0u);
  EXPECT_TRUE(is_thin(reg.subsequence(idx), Scalar(1, 20), 128));
}

TEST(Thin, NoWindowFound) {
  const VertexSequence sq(oracle::integer_points({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
  try {
    (void)extract_thin(sq, Scalar(1, 10), 3);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
}

TEST(EdgeStage, SlopeChainIsAlreadyMonotone) {
  // Horizontal extents shrink by 4, so squared chords shrink by about 16 > 3^2.
  const AdmissibleProfile p{ChainFamily::Slope, Scalar(4), Scalar(1, 1 << 12), Scalar(2)};
  const auto seq = generate_admissible(8, p);
  ExtractionParams params;
  params.h_edge = 3;
  params.theta = Scalar(1, 8);
  const auto idx = extract_edge_monotone(seq, 8, params);
  EXPECT_EQ(idx, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(EdgeStage, NinefoldShrinkingEdges) {
  // Edge lengths 1, 1/9, 1/81, ... are already 3-decreasing.
  const AdmissibleProfile p{ChainFamily::Rotation, Scalar(9), Scalar(1, 1 << 10), Scalar(2)};
  const auto seq = generate_admissible(8, p);
  ExtractionParams params;
  params.h_edge = 3;
  const auto idx = extract_edge_monotone(seq, 8, params);
  EXPECT_EQ(idx, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(EdgeStage, RandomLargePolygon) {
  const auto poly = generate_random_convex(10000, 2024);
  ExtractionParams params;
  params.target_n = 6;
  params.h_edge = 2;
  const auto idx = extract_edge_monotone(poly, 6, params);
  ASSERT_GE(idx.size(), 6u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  // Squared chords are 4-monotone, checked here without the library helper.
  std::vector<Scalar> sq;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const auto &a = poly[idx[k]], &b = poly[idx[k + 1]];
    sq.push_back((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
  }
  bool dec = true, inc = true;
  for (std::size_t k = 0; k + 1 < sq.size(); ++k) {
    dec = dec && sq[k] >= 4 * sq[k + 1];
    inc = inc && 4 * sq[k] <= sq[k + 1];
  }
  EXPECT_TRUE(dec || inc);
}

TEST(AngleStage, IdentityWhenAlreadyMonotone) {
  const std::size_t n = 20;
  const auto seq = generate_admissible(n, steep_angles(n));
  ExtractionParams params;
  params.target_n = n;
  params.h_edge = Scalar(static_cast<long>(n * n));
  const auto a = extract_angle_monotone(seq, n, AngleMode::Angle, params);
  EXPECT_EQ(a.size(), n);
  for (std::size_t k = 0; k < a.size(); ++k)
    EXPECT_EQ(a[k], k);
  const auto g = extract_angle_monotone(seq, n, AngleMode::EdgeByAngle, params);
  EXPECT_EQ(g.size(), n);
}

TEST(AngleStage, EdgeByAngleOnStrictProfile) {
  const auto seq = generate_admissible(20, strict_profile(20));
  ExtractionParams params;
  params.target_n = 20;
  const auto g = extract_angle_monotone(seq, 20, AngleMode::EdgeByAngle, params);
  EXPECT_EQ(g.size(), 20u);
}

TEST(AngleStage, HypothesesChecked) {
  const VertexSequence sq(oracle::integer_points({{0, 0}, {0, 1}, {1, 1}, {1, 0}}));
  ExtractionParams params;
  params.target_n = 3;
  try {
    (void)extract_angle_monotone(sq, 3, AngleMode::Angle, params);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesesNotCertified);
  }
}

TEST(Pipeline, AdmissibleInputIsAFixedPoint) {
  const auto seq = generate_admissible(20, strict_profile(20));
  ExtractionParams params;
  params.target_n = 20;
  const auto r = extract_admissible(seq, params);
  ASSERT_TRUE(r.verified);
  EXPECT_EQ(r.subsequence, seq);
  EXPECT_TRUE(r.admissibility.admissible);
  EXPECT_FALSE(r.stage_reports.empty());
}

TEST(Pipeline, RegularPolygonTargetEight) {
  // All chords are equal, so the edge and angle stages skip; the first window
  // of eight consecutive vertices is already admissible.
  const auto reg = generate_regular(10000, 64);
  ExtractionParams params;
  params.target_n = 8;
  const auto r = extract_admissible(reg, params);
  ASSERT_TRUE(r.verified);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_TRUE(oracle::admissible(oracle::points(r.subsequence)));
  ASSERT_EQ(r.stage_reports.size(), 5u);
  EXPECT_EQ(r.stage_reports[1].stage, "edges");
  EXPECT_NE(r.stage_reports[1].outcome.find("skipped"), std::string::npos);
}

TEST(Pipeline, RandomPolygonTargetEight) {
  const auto poly = generate_random_convex(10000, 7);
  ExtractionParams params;
  params.target_n = 8;
  const auto r = extract_admissible(poly, params);
  ASSERT_TRUE(r.verified);
  EXPECT_EQ(r.indices.size(), 8u);
  EXPECT_TRUE(std::is_sorted(r.indices.begin(), r.indices.end()));
  EXPECT_EQ(r.subsequence, poly.subsequence(r.indices));
  EXPECT_TRUE(oracle::admissible(oracle::points(r.subsequence)));
}
