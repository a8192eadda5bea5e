#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "polyxt/admissibility.hpp"
#include "polyxt/generator.hpp"

using namespace polyxt;

TEST(Generator, ProfilesAreProperAndDeterministic) {
  for (std::size_t n : {4, 5, 9, 16, 25, 40}) {
    for (const auto &prof : escalation_schedule(n)) {
      const auto a = generate_admissible(n, prof);
      const auto b = generate_admissible(n, prof);
      EXPECT_EQ(a, b);
      EXPECT_EQ(a.size(), n);
      EXPECT_TRUE(is_proper(a));
    }
  }
}

TEST(Generator, StrictSixteenIsAdmissible) {
  const auto seq = generate_admissible(16, strict_profile(16));
  EXPECT_EQ(strict_profile(16).h, 257);
  EXPECT_EQ(strict_profile(16).g, 3);
  EXPECT_EQ(strict_profile(16).t0, 1 / (pow(Scalar(3), 16) * 16));
  EXPECT_TRUE(oracle::admissible(oracle::points(seq)));
}

TEST(Generator, SmallCustomProfile) {
  const AdmissibleProfile p{ChainFamily::Rotation, Scalar(2), Scalar(1, 8), Scalar(2)};
  const auto seq = generate_admissible(4, p);
  EXPECT_TRUE(is_proper(seq));
  EXPECT_EQ(is_admissible_exact(seq).admissible, oracle::admissible(oracle::points(seq)));
}

TEST(Generator, TurnsFollowTheProfile) {
  // Rotation chains turn by 2 atan(t0 g^k) at vertex k+1.
  const AdmissibleProfile p{ChainFamily::Rotation, Scalar(8), Scalar(1, 64), Scalar(2)};
  const auto seq = generate_admissible(8, p);
  for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
    const double expect = 2 * std::atan(std::ldexp(1.0, static_cast<int>(k) - 7));
    const auto iv = turn_interval(seq, k, 128);
    EXPECT_LE(iv.lo.get_d(), expect * (1 + 1e-12));
    EXPECT_GE(iv.hi.get_d(), expect * (1 - 1e-12));
  }
  // Edge lengths shrink by exactly h.
  const auto sq = squared_edge_sequence(seq);
  for (std::size_t k = 0; k + 2 < sq.size(); ++k)
    EXPECT_EQ(sq[k], 64 * sq[k + 1]);
}

TEST(Generator, AggressiveProfileRejected) {
  const AdmissibleProfile wild{ChainFamily::Rotation, Scalar(2), Scalar(1), Scalar(4)};
  try {
    (void)generate_admissible(12, wild);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::ProfileTooAggressive);
  }
  try {
    (void)generate_admissible(3, gentle_profile(3));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Generator, RandomConvexPolygons) {
  const auto seq = generate_random_convex(12, 7);
  EXPECT_TRUE(is_proper(seq));
  EXPECT_EQ(exact_rank(slack_matrix(seq)), 3u);
  EXPECT_EQ(seq, generate_random_convex(12, 7));
  EXPECT_NE(seq, generate_random_convex(12, 8));
  for (const auto &p : seq)
    EXPECT_EQ(p.x.get_den(), 1);
  const auto big = generate_random_convex(3000, 1);
  EXPECT_TRUE(is_proper(big));
}

TEST(Generator, RegularPolygons) {
  const auto six = generate_regular(6, 64);
  ASSERT_EQ(six.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_GT(oriented_area(six.at_cyclic(i), six.at_cyclic(i + 1), six.at_cyclic(i + 2)), 0);
    EXPECT_EQ(six[i].x * six[i].x + six[i].y * six[i].y, 1) << "on the unit circle";
  }
  EXPECT_EQ(six[0], (Point{Scalar(1), Scalar(0)}));
  // Vertex k sits near angle -2 pi k / n.
  const auto reg = generate_regular(10000, 64);
  for (std::size_t k : {1u, 2500u, 3333u, 9999u}) {
    const double ang = -2 * std::numbers::pi * static_cast<double>(k) / 10000;
    EXPECT_NEAR(reg[k].x.get_d(), std::cos(ang), 1e-15);
    EXPECT_NEAR(reg[k].y.get_d(), std::sin(ang), 1e-15);
  }
}

TEST(Generator, RankThreeInstances) {
  const auto small = generate_rank3_matrix(3, 3, 4);
  EXPECT_EQ(exact_rank(small.matrix), 3u);
  const auto inst = generate_rank3_matrix(100, 40, 1);
  EXPECT_EQ(exact_rank(inst.matrix), 3u);
  EXPECT_EQ(oracle::rank(oracle::rows_of(inst.matrix)), 3u);
  EXPECT_TRUE(inst.matrix.nonnegative());
  // The hint reproduces the matrix.
  for (std::size_t i = 0; i < 100; i += 7)
    for (std::size_t j = 0; j < 40; j += 3) {
      Scalar s = 0;
      for (const auto &h : inst.factors_hint)
        s += h.row[i] * h.col[j];
      EXPECT_EQ(s, inst.matrix(i, j));
    }
}
