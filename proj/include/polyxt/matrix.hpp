#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/errors.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/parallel.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// Dense row-major matrix of exact rationals.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  Scalar &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<Scalar> column(std::size_t j) const {
    std::vector<Scalar> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      out[i] = (*this)(i, j);
    return out;
  }

  [[nodiscard]] Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  [[nodiscard]] Matrix submatrix(const std::vector<std::size_t> &rs, const std::vector<std::size_t> &cs) const {
    Matrix out(rs.size(), cs.size());
    for (std::size_t a = 0; a < rs.size(); ++a)
      for (std::size_t b = 0; b < cs.size(); ++b)
        out(a, b) = (*this)(rs[a], cs[b]);
    return out;
  }

  [[nodiscard]] bool nonnegative() const {
    for (const auto &x : data_)
      if (sgn(x) < 0)
        return false;
    return true;
  }

  friend bool operator==(const Matrix &, const Matrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

inline Matrix operator*(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows())
    fail(ErrorCode::DimensionMismatch, "matrix product " + std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                                           "x" + std::to_string(b.cols()));
  Matrix c(a.rows(), b.cols());
  parallel_for(a.rows(), [&](std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) += a(i, k) * b(k, j);
    }
  });
  return c;
}

/// Single slack entry S_i^j = oriented_area(v_i, v_j, v_{j+1}) with cyclic
/// j+1; 0-based.
inline Scalar slack_entry(const VertexSequence &seq, std::size_t i, std::size_t j) {
  return oriented_area(seq[i], seq[j], seq.at_cyclic(j + 1));
}

struct SlackMatrix {
  Matrix entries;
  VertexSequence source;

  [[nodiscard]] std::size_t size() const noexcept { return entries.rows(); }
  const Scalar &operator()(std::size_t i, std::size_t j) const { return entries(i, j); }
};

inline SlackMatrix slack_matrix(const VertexSequence &seq) {
  require_proper(seq);
  const std::size_t n = seq.size();
  SlackMatrix s{Matrix(n, n), seq};
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      s.entries(i, j) = slack_entry(seq, i, j);
  });
  return s;
}

namespace detail {

// Scales every row by the lcm of its denominators so elimination can run
// over the integers.
inline std::vector<std::vector<Integer>> integer_rows(const Matrix &m) {
  std::vector<std::vector<Integer>> out(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j)
      out[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  return out;
}

} // namespace detail

/// Indices of pivot columns of a column-ordered fraction-free (Bareiss)
/// elimination: the lexicographically first maximal independent column set.
inline std::vector<std::size_t> pivot_columns(const Matrix &m) {
  auto a = detail::integer_rows(m);
  const std::size_t rows = m.rows();
  std::vector<std::size_t> pivots;
  Integer prev = 1;
  std::size_t k = 0;
  for (std::size_t col = 0; col < m.cols() && k < rows; ++col) {
    std::size_t piv = k;
    while (piv < rows && a[piv][col] == 0)
      ++piv;
    if (piv == rows)
      continue;
    std::swap(a[piv], a[k]);
    for (std::size_t i = k + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j) {
        a[i][j] = a[k][col] * a[i][j] - a[i][col] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[k][col];
    pivots.push_back(col);
    ++k;
  }
  return pivots;
}

/// Exact rank via fraction-free elimination.
inline std::size_t exact_rank(const Matrix &m) { return pivot_columns(m).size(); }
inline std::size_t exact_rank(const SlackMatrix &s) { return exact_rank(s.entries); }

} // namespace polyxt
