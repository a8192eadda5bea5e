#pragma once
// Naive reference implementations used to cross-check the library. They
// follow the definitions literally and share no code paths with polyxt
// beyond the Scalar type.

#include <gmpxx.h>

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "polyxt/factorization.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/matrix.hpp"

namespace oracle {

using polyxt::Scalar;

inline Scalar delta(const polyxt::Point &a, const polyxt::Point &b, const polyxt::Point &c) {
  return (a.x - b.x) * (c.y - b.y) - (a.y - b.y) * (c.x - b.x);
}

inline std::vector<std::vector<Scalar>> slack(const std::vector<polyxt::Point> &v) {
  const std::size_t n = v.size();
  std::vector<std::vector<Scalar>> s(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s[i][j] = delta(v[i], v[j], v[(j + 1) % n]);
  return s;
}

inline std::vector<polyxt::Point> points(const polyxt::VertexSequence &seq) {
  return {seq.begin(), seq.end()};
}

using Quad = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;

// All (p,q,r,t) in [1,n]^4 by brute force over n^4 tuples.
inline std::vector<Quad> quadruples(std::size_t n) {
  std::vector<Quad> out;
  for (std::size_t p = 1; p <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q)
      for (std::size_t r = 1; r <= n; ++r)
        for (std::size_t t = 1; t <= n; ++t) {
          if (p == q || r == t || p > n - 1)
            continue;
          const bool one = std::min(p, q - 1) > r && r > t;
          const bool two = q > p && p > std::max(r, t);
          if (one || two)
            out.emplace_back(p, q, r, t);
        }
  return out;
}

// S^col_row with 1-based indices.
inline const Scalar &entry(const std::vector<std::vector<Scalar>> &s, std::size_t row, std::size_t col) {
  return s[row - 1][col - 1];
}

inline bool admissible(const std::vector<polyxt::Point> &v) {
  const auto s = slack(v);
  for (const auto &[p, q, r, t] : quadruples(v.size()))
    if (!(entry(s, t, p) * entry(s, q, r) > entry(s, q, p) * entry(s, t, r)))
      return false;
  return true;
}

// Row-echelon rank over the rationals, no fraction-free tricks.
inline std::size_t rank(std::vector<std::vector<Scalar>> a) {
  if (a.empty())
    return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0)
      ++piv;
    if (piv == rows)
      continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0)
        continue;
      const Scalar f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j)
        a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline std::vector<std::vector<Scalar>> rows_of(const polyxt::Matrix &m) {
  std::vector<std::vector<Scalar>> out(m.rows(), std::vector<Scalar>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out[i][j] = m(i, j);
  return out;
}

// Dense sum of all terms.
inline std::vector<std::vector<Scalar>> expand(const polyxt::Factorization &f) {
  std::vector<std::vector<Scalar>> out(f.rows, std::vector<Scalar>(f.cols));
  for (const auto &t : f.terms)
    for (std::size_t i = 0; i < f.rows; ++i) {
      if (t.row_factor[i] == 0)
        continue;
      for (std::size_t j = 0; j < f.cols; ++j)
        out[i][j] += t.row_factor[i] * t.col_factor[j];
    }
  return out;
}

inline bool all_nonnegative(const polyxt::Factorization &f) {
  for (const auto &t : f.terms) {
    for (const auto &x : t.row_factor)
      if (x < 0)
        return false;
    for (const auto &x : t.col_factor)
      if (x < 0)
        return false;
  }
  return true;
}

inline bool reproduces(const polyxt::Factorization &f, const std::vector<std::vector<Scalar>> &target) {
  return all_nonnegative(f) && expand(f) == target;
}

inline std::vector<polyxt::Point> integer_points(std::initializer_list<std::pair<long, long>> xy) {
  std::vector<polyxt::Point> out;
  for (const auto &[x, y] : xy)
    out.push_back({Scalar(x), Scalar(y)});
  return out;
}

} // namespace oracle
