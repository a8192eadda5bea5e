#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/errors.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/parallel.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// Nonnegative rank-one matrix row_factor (x) col_factor.
struct RankOneTerm {
  std::vector<Scalar> row_factor;
  std::vector<Scalar> col_factor;
  std::string label;

  [[nodiscard]] bool is_zero() const {
    const auto nz = [](const std::vector<Scalar> &v) {
      return std::any_of(v.begin(), v.end(), [](const Scalar &x) { return sgn(x) != 0; });
    };
    return !nz(row_factor) || !nz(col_factor);
  }

  friend bool operator==(const RankOneTerm &, const RankOneTerm &) = default;
};

struct Factorization {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<RankOneTerm> terms;

  [[nodiscard]] std::size_t inner_dim() const noexcept { return terms.size(); }

  /// Appends `t` unless one of its factors is identically zero.
  void add(RankOneTerm t) {
    if (t.row_factor.size() != rows || t.col_factor.size() != cols)
      fail(ErrorCode::DimensionMismatch, "term '" + t.label + "' has shape " +
                                             std::to_string(t.row_factor.size()) + "x" +
                                             std::to_string(t.col_factor.size()));
    if (!t.is_zero())
      terms.push_back(std::move(t));
  }

  void append(Factorization other) {
    for (auto &t : other.terms)
      add(std::move(t));
  }

  friend bool operator==(const Factorization &, const Factorization &) = default;
};

inline std::vector<Scalar> unit_vector(std::size_t n, std::size_t i) {
  std::vector<Scalar> v(n);
  v[i] = 1;
  return v;
}

struct Mismatch {
  std::size_t row;
  std::size_t col;
  Scalar expected;
  Scalar actual;
};

struct NegativeFactor {
  std::size_t term;
  bool in_row_factor;
  std::size_t index;
  Scalar value;
};

struct VerificationReport {
  bool passed = false;
  std::size_t inner_dim = 0;
  std::optional<Mismatch> first_mismatch;
  std::optional<NegativeFactor> negative;
};

/// Lazily evaluated target entries; lets callers verify against slack or
/// reduced matrices too large to hold with all intermediate bit growth.
using EntryFn = std::function<Scalar(std::size_t, std::size_t)>;

namespace detail {

// Unreduced fraction used to accumulate sums without a gcd per addition.
struct RawFraction {
  Integer num = 0;
  Integer den = 1;

  void add_product(const Scalar &a, const Scalar &b) {
    // num/den + (a.num*b.num)/(a.den*b.den)
    Integer pn = a.get_num() * b.get_num();
    Integer pd = a.get_den() * b.get_den();
    if (den == 1) {
      num = num * pd + pn;
      den = std::move(pd);
    } else if (den == pd) {
      num += pn;
    } else {
      num = num * pd + pn * den;
      den *= pd;
    }
  }

  [[nodiscard]] bool equals(const Scalar &q) const { return num * q.get_den() == q.get_num() * den; }
  [[nodiscard]] Scalar value() const {
    Scalar q(num, den);
    q.canonicalize();
    return q;
  }
};

struct SparseTerm {
  std::vector<std::size_t> row_nz;
  std::vector<std::size_t> col_nz;
};

inline std::vector<SparseTerm> sparse_supports(const Factorization &f) {
  std::vector<SparseTerm> out(f.terms.size());
  for (std::size_t s = 0; s < f.terms.size(); ++s) {
    for (std::size_t i = 0; i < f.rows; ++i)
      if (sgn(f.terms[s].row_factor[i]) != 0)
        out[s].row_nz.push_back(i);
    for (std::size_t j = 0; j < f.cols; ++j)
      if (sgn(f.terms[s].col_factor[j]) != 0)
        out[s].col_nz.push_back(j);
  }
  return out;
}

} // namespace detail

/// Exact check that every factor is nonnegative and the terms sum to the
/// target entrywise. Rows are checked independently (in parallel when
/// enabled); the reported mismatch is the first in row-major order.
inline VerificationReport verify_factorization(std::size_t rows, std::size_t cols, const EntryFn &target,
                                               const Factorization &f) {
  if (f.rows != rows || f.cols != cols)
    fail(ErrorCode::DimensionMismatch, "factorization is " + std::to_string(f.rows) + "x" +
                                           std::to_string(f.cols) + ", target is " + std::to_string(rows) +
                                           "x" + std::to_string(cols));
  VerificationReport report;
  report.inner_dim = f.inner_dim();
  for (std::size_t s = 0; s < f.terms.size(); ++s) {
    const auto &t = f.terms[s];
    if (t.row_factor.size() != rows || t.col_factor.size() != cols)
      fail(ErrorCode::DimensionMismatch, "term " + std::to_string(s) + " has wrong shape");
    for (std::size_t i = 0; i < rows; ++i)
      if (sgn(t.row_factor[i]) < 0) {
        report.negative = NegativeFactor{s, true, i, t.row_factor[i]};
        return report;
      }
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(t.col_factor[j]) < 0) {
        report.negative = NegativeFactor{s, false, j, t.col_factor[j]};
        return report;
      }
  }
  const auto support = detail::sparse_supports(f);
  // terms touching each row
  std::vector<std::vector<std::size_t>> by_row(rows);
  for (std::size_t s = 0; s < support.size(); ++s)
    for (auto i : support[s].row_nz)
      by_row[i].push_back(s);

  std::vector<std::optional<Mismatch>> row_result(rows);
  parallel_for(rows, [&](std::size_t i) {
    std::vector<detail::RawFraction> acc(cols);
    for (auto s : by_row[i]) {
      const Scalar &a = f.terms[s].row_factor[i];
      for (auto j : support[s].col_nz)
        acc[j].add_product(a, f.terms[s].col_factor[j]);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const Scalar expected = target(i, j);
      if (!acc[j].equals(expected)) {
        row_result[i] = Mismatch{i, j, expected, acc[j].value()};
        return;
      }
    }
  });
  for (auto &r : row_result)
    if (r) {
      report.first_mismatch = std::move(r);
      return report;
    }
  report.passed = true;
  return report;
}

inline VerificationReport verify_factorization(const Matrix &m, const Factorization &f) {
  return verify_factorization(
      m.rows(), m.cols(), [&m](std::size_t i, std::size_t j) { return m(i, j); }, f);
}

inline VerificationReport verify_factorization(const VertexSequence &seq, const Factorization &f) {
  const std::size_t n = seq.size();
  return verify_factorization(
      n, n, [&seq](std::size_t i, std::size_t j) { return slack_entry(seq, i, j); }, f);
}

inline void require_nonnegative(const Matrix &m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) < 0)
        fail(ErrorCode::InvalidArgument,
             "matrix entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
}

/// Line cover with one term per row or per column, whichever is fewer.
/// Zero lines are skipped, so inner_dim <= min(rows, cols).
inline Factorization trivial_factorization(const Matrix &m) {
  require_nonnegative(m);
  Factorization f{m.rows(), m.cols(), {}};
  if (m.rows() <= m.cols()) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::vector<Scalar> row(m.cols());
      for (std::size_t j = 0; j < m.cols(); ++j)
        row[j] = m(i, j);
      f.add({unit_vector(m.rows(), i), std::move(row), "row " + std::to_string(i)});
    }
  } else {
    for (std::size_t j = 0; j < m.cols(); ++j)
      f.add({m.column(j), unit_vector(m.cols(), j), "col " + std::to_string(j)});
  }
  return f;
}

/// Embeds a factorization of M[kept_rows|kept_cols] into one of M by
/// covering the removed columns (whole columns) and then the removed rows
/// (restricted to kept columns). Zero lines add no term.
inline Factorization line_cover_extend(const Factorization &sub, const Matrix &m,
                                       const std::vector<std::size_t> &kept_rows,
                                       const std::vector<std::size_t> &kept_cols) {
  const auto sub_matrix = m.submatrix(kept_rows, kept_cols);
  if (sub.rows != kept_rows.size() || sub.cols != kept_cols.size() ||
      !verify_factorization(sub_matrix, sub).passed)
    fail(ErrorCode::SubVerificationFailed, "sub-factorization does not match the kept submatrix");
  Factorization f{m.rows(), m.cols(), {}};
  for (const auto &t : sub.terms) {
    RankOneTerm e{std::vector<Scalar>(m.rows()), std::vector<Scalar>(m.cols()), t.label};
    for (std::size_t a = 0; a < kept_rows.size(); ++a)
      e.row_factor[kept_rows[a]] = t.row_factor[a];
    for (std::size_t b = 0; b < kept_cols.size(); ++b)
      e.col_factor[kept_cols[b]] = t.col_factor[b];
    f.add(std::move(e));
  }
  std::vector<bool> row_kept(m.rows()), col_kept(m.cols());
  for (auto i : kept_rows)
    row_kept.at(i) = true;
  for (auto j : kept_cols)
    col_kept.at(j) = true;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!col_kept[j])
      f.add({m.column(j), unit_vector(m.cols(), j), "cover col " + std::to_string(j)});
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!row_kept[i]) {
      std::vector<Scalar> row(m.cols());
      for (auto j : kept_cols)
        row[j] = m(i, j);
      f.add({unit_vector(m.rows(), i), std::move(row), "cover row " + std::to_string(i)});
    }
  return f;
}

/// Contiguous run [first, first + count) of polygon vertex indices.
struct Chunk {
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Nonnegative decomposition of an affine functional f over the vertices of
/// a convex chunk polygon: f = a * g_e1 + b * g_e2 + c on the plane, where
/// g_k(w) = oriented_area(w, u_k, u_{k+1}) are the chunk's edge functionals.
struct AffineSplit {
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  Scalar a;
  Scalar b;
  Scalar c;
};

/// `form` is an affine functional w -> form[0] + form[1]*x + form[2]*y.
/// e1, e2 are the chunk edges entering and leaving the vertex where the
/// functional is smallest (lowest index on ties).
inline AffineSplit split_affine(const Vec3 &form, const VertexSequence &chunk) {
  const std::size_t k = chunk.size();
  auto eval = [&](const Point &w) -> Scalar { return form[0] + form[1] * w.x + form[2] * w.y; };
  std::size_t best = 0;
  Scalar best_val = eval(chunk[0]);
  for (std::size_t i = 1; i < k; ++i) {
    Scalar v = eval(chunk[i]);
    if (v < best_val) {
      best_val = std::move(v);
      best = i;
    }
  }
  AffineSplit s;
  s.e1 = (best + k - 1) % k;
  s.e2 = best;
  const Vec3 g1 = edge_form(chunk[s.e1], chunk.at_cyclic(s.e1 + 1));
  const Vec3 g2 = edge_form(chunk[s.e2], chunk.at_cyclic(s.e2 + 1));
  // [g1.x g2.x; g1.y g2.y] (a, b)^T = (form.x, form.y)^T
  const Scalar det = g1[1] * g2[2] - g2[1] * g1[2];
  if (sgn(det) == 0)
    fail(ErrorCode::DecompositionFailed, "adjacent chunk edges are parallel");
  s.a = (form[1] * g2[2] - g2[1] * form[2]) / det;
  s.b = (g1[1] * form[2] - form[1] * g1[2]) / det;
  s.c = best_val;
  if (sgn(s.a) < 0 || sgn(s.b) < 0 || sgn(s.c) < 0)
    fail(ErrorCode::NegativeCoefficient, "affine functional is not a nonnegative combination at chunk vertex " +
                                             std::to_string(best));
  return s;
}

/// Composes `chunk_fact` (a factorization of the chunk's standalone slack
/// matrix, rows = chunk vertices, cols = chunk edges) into terms covering
/// the chunk's rows of an arbitrary family of affine functionals `forms`
/// (one per output column). Adds one constant term when any functional has
/// a positive constant part. Output rows index `total_rows`, placing chunk
/// vertex a at row row_offset + a.
inline Factorization compose_affine(const VertexSequence &chunk, const Factorization &chunk_fact,
                                    const std::vector<Vec3> &forms, std::size_t total_rows,
                                    std::size_t row_offset, const std::string &label) {
  const std::size_t k = chunk.size();
  const std::size_t cols = forms.size();
  std::vector<AffineSplit> splits(cols);
  parallel_for(cols, [&](std::size_t e) { splits[e] = split_affine(forms[e], chunk); });
  Factorization f{total_rows, cols, {}};
  for (std::size_t s = 0; s < chunk_fact.terms.size(); ++s) {
    const auto &t = chunk_fact.terms[s];
    RankOneTerm out{std::vector<Scalar>(total_rows), std::vector<Scalar>(cols), label + "/" + t.label};
    for (std::size_t a = 0; a < k; ++a)
      out.row_factor[row_offset + a] = t.row_factor[a];
    parallel_for(cols, [&](std::size_t e) {
      const auto &sp = splits[e];
      Scalar v = 0;
      if (sgn(sp.a) != 0)
        v += sp.a * t.col_factor[sp.e1];
      if (sgn(sp.b) != 0)
        v += sp.b * t.col_factor[sp.e2];
      out.col_factor[e] = std::move(v);
    });
    f.add(std::move(out));
  }
  RankOneTerm constant{std::vector<Scalar>(total_rows), std::vector<Scalar>(cols), label + "/constant"};
  for (std::size_t a = 0; a < k; ++a)
    constant.row_factor[row_offset + a] = 1;
  for (std::size_t e = 0; e < cols; ++e)
    constant.col_factor[e] = splits[e].c;
  f.add(std::move(constant));
  return f;
}

/// Factorization of the full polygon's slack matrix from factorizations of
/// contiguous chunks (each a standalone polygon). Chunks with fewer than
/// three vertices take one row term per vertex; `chunk_factorizations[c]`
/// is ignored for them. Chunk factorizations are verified first when
/// `verify_chunks` is set.
inline Factorization merge_union(const VertexSequence &polygon, const std::vector<Chunk> &chunks,
                                 const std::vector<Factorization> &chunk_factorizations,
                                 bool verify_chunks = true) {
  require_proper(polygon);
  const std::size_t n = polygon.size();
  if (chunk_factorizations.size() != chunks.size())
    fail(ErrorCode::DimensionMismatch, "one factorization slot per chunk is required");
  std::size_t next = 0;
  for (const auto &c : chunks) {
    if (c.first != next || c.count == 0)
      fail(ErrorCode::InvalidArgument, "chunks must partition the vertices into contiguous runs");
    next += c.count;
  }
  if (next != n)
    fail(ErrorCode::InvalidArgument, "chunks do not cover every vertex");

  std::vector<Vec3> forms(n);
  for (std::size_t e = 0; e < n; ++e)
    forms[e] = edge_form(polygon[e], polygon.at_cyclic(e + 1));

  Factorization out{n, n, {}};
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const auto &ch = chunks[c];
    const std::string label = "chunk " + std::to_string(c);
    if (ch.count < 3) {
      for (std::size_t a = 0; a < ch.count; ++a) {
        const std::size_t i = ch.first + a;
        std::vector<Scalar> row(n);
        for (std::size_t j = 0; j < n; ++j)
          row[j] = slack_entry(polygon, i, j);
        out.add({unit_vector(n, i), std::move(row), label + "/row " + std::to_string(i)});
      }
      continue;
    }
    const VertexSequence sub = polygon.slice(ch.first, ch.count);
    const auto &cf = chunk_factorizations[c];
    if (verify_chunks && !verify_factorization(sub, cf).passed)
      fail(ErrorCode::SubVerificationFailed, label + " factorization does not verify");
    out.append(compose_affine(sub, cf, forms, n, ch.first, label));
  }
  return out;
}

} // namespace polyxt
