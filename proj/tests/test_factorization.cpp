#include <gtest/gtest.h>

#include "oracle.hpp"
#include "polyxt/factorization.hpp"
#include "polyxt/generator.hpp"

using namespace polyxt;

namespace {

Matrix from_rows(const std::vector<std::vector<long>> &rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(i, j) = rows[i][j];
  return m;
}

VertexSequence unit_square() { return VertexSequence(oracle::integer_points({{0, 0}, {0, 1}, {1, 1}, {1, 0}})); }

} // namespace

TEST(Verify, AcceptsExactAndReportsFirstMismatch) {
  const Matrix m = from_rows({{1, 2}, {3, 4}});
  Factorization f{2, 2, {}};
  f.add({{1, 0}, {1, 2}, "a"});
  f.add({{0, 1}, {3, 4}, "b"});
  EXPECT_TRUE(verify_factorization(m, f).passed);

  f.terms[1].col_factor[1] = 5;
  const auto rep = verify_factorization(m, f);
  EXPECT_FALSE(rep.passed);
  ASSERT_TRUE(rep.first_mismatch.has_value());
  EXPECT_EQ(rep.first_mismatch->row, 1u);
  EXPECT_EQ(rep.first_mismatch->col, 1u);
  EXPECT_EQ(rep.first_mismatch->expected, 4);
  EXPECT_EQ(rep.first_mismatch->actual, 5);
}

TEST(Verify, NegativeFactorFailsEvenWhenProductMatches) {
  const Matrix m = from_rows({{1}});
  Factorization f{1, 1, {}};
  f.add({{2}, {1}, "p"});
  f.add({{1}, {-1}, "n"});
  EXPECT_EQ(oracle::expand(f), oracle::rows_of(m));
  const auto rep = verify_factorization(m, f);
  EXPECT_FALSE(rep.passed);
  ASSERT_TRUE(rep.negative.has_value());
  EXPECT_EQ(rep.negative->term, 1u);
  EXPECT_FALSE(rep.negative->in_row_factor);
}

TEST(Verify, ZeroTermsAreDroppedAndShapesChecked) {
  Factorization f{2, 3, {}};
  f.add({{0, 0}, {1, 2, 3}, "zero"});
  EXPECT_EQ(f.inner_dim(), 0u);
  try {
    f.add({{1}, {1, 2, 3}, "short"});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Trivial, UsesTheShorterSide) {
  const Matrix wide = from_rows({{1, 0, 2, 0, 1}, {0, 3, 0, 1, 0}, {4, 0, 0, 0, 2}});
  const auto fw = trivial_factorization(wide);
  EXPECT_EQ(fw.inner_dim(), 3u);
  EXPECT_TRUE(oracle::reproduces(fw, oracle::rows_of(wide)));
  const Matrix tall = wide.transpose();
  const auto ft = trivial_factorization(tall);
  EXPECT_EQ(ft.inner_dim(), 3u);
  EXPECT_TRUE(oracle::reproduces(ft, oracle::rows_of(tall)));
}

TEST(Trivial, RejectsNegativeEntries) {
  try {
    (void)trivial_factorization(from_rows({{1, -1}}));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(LineCover, ExtendsSubFactorization) {
  const Matrix m = from_rows({{1, 2, 0}, {3, 4, 5}, {0, 0, 0}, {6, 0, 7}});
  const std::vector<std::size_t> rows{0, 1}, cols{0, 1};
  const auto sub = trivial_factorization(m.submatrix(rows, cols));
  const auto f = line_cover_extend(sub, m, rows, cols);
  EXPECT_TRUE(oracle::reproduces(f, oracle::rows_of(m)));
  // 2 sub terms, column 2, then row 3 on kept columns; the zero row 2 adds nothing.
  EXPECT_EQ(f.inner_dim(), 2u + 1u + 1u);
}

TEST(LineCover, ZeroLinesAddNoTerms) {
  const Matrix m = from_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  const auto sub = trivial_factorization(m.submatrix({0}, {0}));
  const auto f = line_cover_extend(sub, m, {0}, {0});
  EXPECT_EQ(f.inner_dim(), 1u);
  EXPECT_TRUE(oracle::reproduces(f, oracle::rows_of(m)));
}

TEST(LineCover, IdentityKeepsTwoOfThree) {
  const Matrix id = Matrix::identity(3);
  const auto sub = trivial_factorization(id.submatrix({0, 1}, {0, 1}));
  ASSERT_EQ(sub.inner_dim(), 2u);
  const auto f = line_cover_extend(sub, id, {0, 1}, {0, 1});
  // Column 2 is covered by one term; row 2 restricted to columns {0,1} is zero and adds none.
  EXPECT_EQ(f.inner_dim(), 3u);
  EXPECT_TRUE(verify_factorization(id, f).passed);
  const auto all = line_cover_extend(trivial_factorization(id), id, {0, 1, 2}, {0, 1, 2});
  EXPECT_EQ(all, trivial_factorization(id));
}

TEST(LineCover, RejectsWrongSubFactorization) {
  const Matrix m = from_rows({{1, 2}, {3, 4}});
  Factorization bad{1, 1, {}};
  bad.add({{1}, {2}, "x"});
  try {
    (void)line_cover_extend(bad, m, {0}, {0});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::SubVerificationFailed);
  }
}

TEST(MergeUnion, SingleChunkSelfUnion) {
  const auto seq = generate_random_convex(9, 3);
  const auto s = slack_matrix(seq);
  const auto own = trivial_factorization(s.entries);
  const auto f = merge_union(seq, {{0, 9}}, {own});
  EXPECT_TRUE(verify_factorization(seq, f).passed);
  EXPECT_TRUE(oracle::reproduces(f, oracle::slack(oracle::points(seq))));
  EXPECT_LE(f.inner_dim(), own.inner_dim() + 1);
}

TEST(MergeUnion, UnitSquareFromTwoPairs) {
  const auto sq = unit_square();
  const auto f = merge_union(sq, {{0, 2}, {2, 2}}, {Factorization{}, Factorization{}});
  EXPECT_EQ(f.inner_dim(), 4u);
  EXPECT_TRUE(oracle::reproduces(f, oracle::slack(oracle::points(sq))));
}

TEST(MergeUnion, TwentyGonSplitSixteenAndFour) {
  const auto seq = generate_admissible(20, gentle_profile(20));
  std::vector<Factorization> parts{trivial_factorization(slack_matrix(seq.slice(0, 16)).entries),
                                   trivial_factorization(slack_matrix(seq.slice(16, 4)).entries)};
  const auto f = merge_union(seq, {{0, 16}, {16, 4}}, parts);
  EXPECT_TRUE(oracle::reproduces(f, oracle::slack(oracle::points(seq))));
  EXPECT_LE(f.inner_dim(), parts[0].inner_dim() + parts[1].inner_dim() + 2);
}

TEST(MergeUnion, RandomSplitsReproduce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto seq = generate_random_convex(14, seed);
    const std::size_t a = 3 + seed % 8;
    std::vector<Factorization> parts{trivial_factorization(slack_matrix(seq.slice(0, a)).entries),
                                     Factorization{}};
    if (14 - a >= 3)
      parts[1] = trivial_factorization(slack_matrix(seq.slice(a, 14 - a)).entries);
    const auto f = merge_union(seq, {{0, a}, {a, 14 - a}}, parts);
    EXPECT_TRUE(oracle::reproduces(f, oracle::slack(oracle::points(seq)))) << "seed " << seed;
  }
}

TEST(MergeUnion, RejectsBadPartition) {
  const auto sq = unit_square();
  try {
    (void)merge_union(sq, {{0, 2}, {3, 1}}, {Factorization{}, Factorization{}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  try {
    (void)merge_union(sq, {{0, 2}}, {Factorization{}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(MergeUnion, ChunkFactorizationVerifiedFirst) {
  const auto seq = generate_random_convex(8, 1);
  auto bad = trivial_factorization(slack_matrix(seq.slice(0, 5)).entries);
  bad.terms[0].col_factor[0] += 1;
  try {
    (void)merge_union(seq, {{0, 5}, {5, 3}}, {bad, trivial_factorization(slack_matrix(seq.slice(5, 3)).entries)});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::SubVerificationFailed);
  }
}
