#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/builder.hpp"
#include "polyxt/errors.hpp"
#include "polyxt/factorization.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// Three exact columns of M spanning its column space (its first pivot
/// columns).
inline std::array<std::vector<Scalar>, 3> column_space_basis(const Matrix &m) {
  const auto piv = pivot_columns(m);
  if (piv.size() != 3)
    fail(ErrorCode::RankNotThree, "matrix has rank " + std::to_string(piv.size()));
  return {m.column(piv[0]), m.column(piv[1]), m.column(piv[2])};
}

/// Affine chart of the plane {y in colspace(M) : sum(y) = 1}: every point is
/// y(s, t) = origin + s * ds + t * dt. Row i of the chart is the affine form
/// (origin_i, ds_i, dt_i) on (s, t).
struct SliceChart {
  std::vector<Scalar> origin;
  std::vector<Scalar> ds;
  std::vector<Scalar> dt;
  /// Two rows with independent gradients, used to invert the chart.
  std::size_t row_a = 0;
  std::size_t row_b = 0;

  [[nodiscard]] std::size_t dim() const noexcept { return origin.size(); }
  [[nodiscard]] Vec3 form(std::size_t i) const { return {origin[i], ds[i], dt[i]}; }

  [[nodiscard]] std::vector<Scalar> lift(const Point &p) const {
    std::vector<Scalar> y(dim());
    for (std::size_t i = 0; i < dim(); ++i)
      y[i] = origin[i] + p.x * ds[i] + p.y * dt[i];
    return y;
  }

  /// Chart coordinates of a vector known to lie on the slice plane.
  [[nodiscard]] Point locate(const std::vector<Scalar> &y) const {
    const Scalar det = ds[row_a] * dt[row_b] - dt[row_a] * ds[row_b];
    const Scalar ya = y[row_a] - origin[row_a];
    const Scalar yb = y[row_b] - origin[row_b];
    return {(ya * dt[row_b] - dt[row_a] * yb) / det, (ds[row_a] * yb - ya * ds[row_b]) / det};
  }
};

struct SlicePolygon {
  SliceChart chart;
  /// Clockwise chart coordinates of the vertices.
  VertexSequence polygon;
  /// Column l is the lifted vertex l (nonnegative, sums to 1).
  Matrix s_lift;

  [[nodiscard]] std::size_t k() const noexcept { return polygon.size(); }
};

namespace detail {

inline SliceChart make_chart(const Matrix &m) {
  const auto basis = column_space_basis(m);
  const std::size_t rows = m.rows();
  std::array<Scalar, 3> w;
  for (std::size_t c = 0; c < 3; ++c) {
    w[c] = 0;
    for (const auto &x : basis[c])
      w[c] += x;
  }
  // Eliminate the coordinate whose weight has the shortest encoding.
  std::optional<std::size_t> k;
  for (std::size_t c = 0; c < 3; ++c)
    if (sgn(w[c]) != 0 && (!k || bit_length(w[c]) < bit_length(w[*k])))
      k = c;
  if (!k)
    fail(ErrorCode::EmptySlice, "column space is orthogonal to the all-ones vector");
  const std::size_t l1 = (*k + 1) % 3, l2 = (*k + 2) % 3;
  SliceChart ch;
  ch.origin.resize(rows);
  ch.ds.resize(rows);
  ch.dt.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const Scalar base = basis[*k][i] / w[*k];
    ch.origin[i] = base;
    ch.ds[i] = basis[l1][i] - w[l1] * base;
    ch.dt[i] = basis[l2][i] - w[l2] * base;
  }
  bool found = false;
  for (std::size_t a = 0; a < rows && !found; ++a)
    for (std::size_t b = a + 1; b < rows && !found; ++b)
      if (sgn(ch.ds[a] * ch.dt[b] - ch.dt[a] * ch.ds[b]) != 0) {
        ch.row_a = a;
        ch.row_b = b;
        found = true;
      }
  if (!found)
    fail(ErrorCode::RankNotThree, "slice chart is degenerate");
  return ch;
}

// Keeps the part of a convex polygon where form >= 0.
inline std::vector<Point> clip(const std::vector<Point> &poly, const Vec3 &form) {
  auto eval = [&](const Point &p) -> Scalar { return form[0] + form[1] * p.x + form[2] * p.y; };
  std::vector<Point> out;
  const std::size_t k = poly.size();
  if (k == 0)
    return out;
  std::vector<Scalar> val(k);
  for (std::size_t i = 0; i < k; ++i)
    val[i] = eval(poly[i]);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = (i + 1) % k;
    const int si = sgn(val[i]), sj = sgn(val[j]);
    if (si >= 0)
      out.push_back(poly[i]);
    if ((si > 0 && sj < 0) || (si < 0 && sj > 0)) {
      const Scalar lambda = val[i] / (val[i] - val[j]);
      out.push_back({poly[i].x + lambda * (poly[j].x - poly[i].x), poly[i].y + lambda * (poly[j].y - poly[i].y)});
    }
  }
  return out;
}

// Drops repeated and collinear points of a closed polygon.
inline std::vector<Point> simplify(std::vector<Point> poly) {
  bool changed = true;
  while (changed && poly.size() >= 2) {
    changed = false;
    const std::size_t k = poly.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Point &prev = poly[(i + k - 1) % k];
      const Point &cur = poly[i];
      const Point &next = poly[(i + 1) % k];
      if (cur == next || (k >= 3 && sgn(oriented_area(prev, cur, next)) == 0)) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return poly;
}

} // namespace detail

/// Intersection of the probability simplex with the column space of M, as
/// a clockwise polygon in an exact chart of the slice plane.
inline SlicePolygon simplex_slice_polygon(const Matrix &m) {
  SlicePolygon out;
  out.chart = detail::make_chart(m);
  const auto &ch = out.chart;
  // Start from the parallelogram 0 <= y_a, y_b <= 1, which contains the slice.
  std::vector<Point> poly;
  for (auto [ya, yb] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{1, 1}, std::pair{0, 1}}) {
    std::vector<Scalar> y(ch.dim());
    y[ch.row_a] = ya;
    y[ch.row_b] = yb;
    poly.push_back(ch.locate(y));
  }
  for (std::size_t i = 0; i < ch.dim(); ++i) {
    poly = detail::clip(poly, ch.form(i));
    if (poly.empty())
      fail(ErrorCode::EmptySlice, "column space misses the simplex");
  }
  poly = detail::simplify(std::move(poly));
  if (poly.size() < 3)
    fail(ErrorCode::DegenerateSlice, "slice is a point or a segment");
  Scalar area = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    area += cross(poly[i], poly[(i + 1) % poly.size()]);
  if (sgn(area) > 0)
    std::reverse(poly.begin(), poly.end());
  out.polygon = VertexSequence(std::move(poly));
  require_proper(out.polygon);
  out.s_lift = Matrix(ch.dim(), out.polygon.size());
  for (std::size_t l = 0; l < out.polygon.size(); ++l) {
    const auto y = ch.lift(out.polygon[l]);
    for (std::size_t i = 0; i < ch.dim(); ++i)
      out.s_lift(i, l) = y[i];
  }
  return out;
}

/// Column j of M equals S_lift * B[:, j]; at most three nonzeros per column
/// (fan triangulation from vertex 0).
inline Matrix barycentric_B(const SlicePolygon &slice, const Matrix &m) {
  const std::size_t k = slice.k();
  Matrix b(k, m.cols());
  const auto &v = slice.polygon;
  std::map<std::pair<Scalar, Scalar>, std::size_t> vertex_at;
  for (std::size_t l = 0; l < k; ++l)
    vertex_at.emplace(std::pair{v[l].x, v[l].y}, l);
  std::vector<std::optional<std::string>> errors(m.cols());
  parallel_for(m.cols(), [&](std::size_t j) {
    Scalar total = 0;
    auto col = m.column(j);
    for (const auto &x : col)
      total += x;
    if (sgn(total) == 0)
      return;
    for (auto &x : col)
      x /= total;
    const Point p = slice.chart.locate(col);
    if (auto it = vertex_at.find({p.x, p.y}); it != vertex_at.end()) {
      b(it->second, j) = total;
      return;
    }
    for (std::size_t l = 1; l + 1 < k; ++l) {
      const Scalar whole = oriented_area(v[0], v[l], v[l + 1]);
      const Scalar w0 = oriented_area(p, v[l], v[l + 1]) / whole;
      const Scalar w1 = oriented_area(v[0], p, v[l + 1]) / whole;
      const Scalar w2 = oriented_area(v[0], v[l], p) / whole;
      if (sgn(w0) >= 0 && sgn(w1) >= 0 && sgn(w2) >= 0) {
        b(0, j) = total * w0;
        b(l, j) = total * w1;
        b(l + 1, j) = total * w2;
        return;
      }
    }
    errors[j] = "column " + std::to_string(j) + " lies outside the slice polygon";
  });
  for (const auto &e : errors)
    if (e)
      fail(ErrorCode::PointOutsidePolygon, *e);
  return b;
}

/// Exact check of M = S_lift * B using the column sparsity of B.
inline bool reconstructs(const SlicePolygon &slice, const Matrix &b, const Matrix &m) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Scalar acc = 0;
      for (std::size_t l = 0; l < slice.k(); ++l)
        if (sgn(b(l, j)) != 0)
          acc += slice.s_lift(i, l) * b(l, j);
      if (acc != m(i, j))
        return false;
    }
  return true;
}

struct NmfReport {
  std::string route;
  std::size_t k = 0;
  bool transposed = false;
  bool verified = false;
  std::vector<std::string> notes;
};

struct NmfResult {
  Factorization factorization;
  NmfReport report;
};

namespace detail {

// Factorization of M from k vertex terms S_lift[:, l] (x) B[l, :].
inline Factorization vertex_route(const SlicePolygon &slice, const Matrix &b, std::size_t rows, std::size_t cols) {
  Factorization f{rows, cols, {}};
  for (std::size_t l = 0; l < slice.k(); ++l) {
    std::vector<Scalar> col(cols);
    for (std::size_t j = 0; j < cols; ++j)
      col[j] = b(l, j);
    f.add({slice.s_lift.column(l), std::move(col), "vertex " + std::to_string(l)});
  }
  return f;
}

// Builder route: orders the slice vertices by the smallest input column
// that lands on each, factors the resulting polygon, and rewrites S_lift
// through its edge slacks plus one constant term.
inline std::optional<Factorization> polygon_route(const SlicePolygon &slice, const Matrix &b, const Matrix &m,
                                                  const BuildOptions &opt, std::vector<std::string> &notes) {
  const std::size_t k = slice.k();
  if (k < 16) {
    notes.push_back("slice has fewer than 16 vertices; builder route skipped");
    return std::nullopt;
  }
  // first input column sitting exactly on each vertex (B column with one nonzero)
  std::vector<std::optional<std::size_t>> first_col(k);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::optional<std::size_t> only;
    std::size_t nz = 0;
    for (std::size_t l = 0; l < k; ++l)
      if (sgn(b(l, j)) != 0) {
        ++nz;
        only = l;
      }
    if (nz == 1 && !first_col[*only])
      first_col[*only] = j;
  }
  std::vector<std::size_t> order(k);
  for (std::size_t l = 0; l < k; ++l)
    order[l] = l;
  const bool all_matched = std::all_of(first_col.begin(), first_col.end(), [](const auto &x) { return x.has_value(); });
  if (all_matched) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return *first_col[a] < *first_col[c]; });
  } else {
    notes.push_back("some slice vertices carry no input column; clipping order used");
  }
  std::vector<Point> pts;
  for (auto l : order)
    pts.push_back(slice.polygon[l]);
  // A reflection keeps the order while restoring clockwise orientation.
  bool mirrored = false;
  if (!is_proper(VertexSequence(pts))) {
    for (auto &p : pts)
      p.x = -p.x;
    mirrored = true;
    if (!is_proper(VertexSequence(pts))) {
      notes.push_back("input column order is not a convex cyclic order of the slice");
      return std::nullopt;
    }
  }
  const VertexSequence poly(std::move(pts));
  GeneralBuild built;
  try {
    built = factor_admissible(poly, opt);
  } catch (const Error &e) {
    notes.push_back(std::string("builder route failed: ") + e.what());
    return std::nullopt;
  }
  if (!built.certificate.verdict)
    return std::nullopt;
  // Row i of S_lift as an affine form in the (possibly mirrored) chart.
  std::vector<Vec3> forms(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    forms[i] = slice.chart.form(i);
    if (mirrored)
      forms[i][1] = -forms[i][1];
  }
  // Terms over (polygon vertex, row of M); polygon vertex a is slice vertex order[a].
  const Factorization lifted = compose_affine(poly, built.factorization, forms, k, 0, "slice");
  Factorization f{m.rows(), m.cols(), {}};
  for (const auto &t : lifted.terms) {
    std::vector<Scalar> col(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Scalar acc = 0;
      for (std::size_t a = 0; a < k; ++a)
        if (sgn(t.row_factor[a]) != 0 && sgn(b(order[a], j)) != 0)
          acc += t.row_factor[a] * b(order[a], j);
      col[j] = std::move(acc);
    }
    f.add({t.col_factor, std::move(col), t.label});
  }
  notes.push_back("builder route on the slice polygon: " + std::to_string(built.factorization.inner_dim()) +
                  " slack terms plus one constant term");
  return f;
}

inline Factorization transpose(const Factorization &f) {
  Factorization t{f.cols, f.rows, {}};
  for (const auto &term : f.terms)
    t.terms.push_back({term.col_factor, term.row_factor, term.label});
  return t;
}

struct RouteAttempt {
  Factorization f;
  std::string route;
  std::size_t k;
};

inline std::vector<RouteAttempt> routes_for(const Matrix &m, bool transposed, const BuildOptions &opt,
                                            std::vector<std::string> &notes) {
  std::vector<RouteAttempt> out;
  const SlicePolygon slice = simplex_slice_polygon(m);
  const Matrix b = barycentric_B(slice, m);
  if (!reconstructs(slice, b, m))
    fail(ErrorCode::PointOutsidePolygon, "S_lift * B does not reproduce the matrix");
  const std::string side = transposed ? "transpose/" : "";
  out.push_back({vertex_route(slice, b, m.rows(), m.cols()), side + "vertex", slice.k()});
  std::vector<std::string> local;
  if (auto f = polygon_route(slice, b, m, opt, local))
    out.push_back({std::move(*f), side + "builder", slice.k()});
  for (auto &note : local)
    notes.push_back((transposed ? "transpose: " : "direct: ") + note);
  return out;
}

} // namespace detail

/// Exact nonnegative factorization of a rank-3 nonnegative matrix through
/// the simplex slice of its column space (and of its transpose). Returns
/// the smallest verified candidate; the vertex route always exists.
inline NmfResult nmf_rank3(const Matrix &m, const BuildOptions &opt = {}) {
  require_nonnegative(m);
  if (exact_rank(m) != 3)
    fail(ErrorCode::RankNotThree, "nmf_rank3 needs an exact rank-3 matrix");
  NmfResult best;
  bool have = false;
  std::vector<std::string> notes;
  auto consider = [&](Factorization f, const std::string &route, std::size_t k, bool transposed) {
    if (have && f.inner_dim() >= best.factorization.inner_dim())
      return;
    if (!verify_factorization(m, f).passed) {
      notes.push_back("route " + route + " failed verification");
      return;
    }
    best.factorization = std::move(f);
    best.report.route = route;
    best.report.k = k;
    best.report.transposed = transposed;
    best.report.verified = true;
    have = true;
  };
  for (auto &a : detail::routes_for(m, false, opt, notes))
    consider(std::move(a.f), a.route, a.k, false);
  for (auto &a : detail::routes_for(m.transpose(), true, opt, notes))
    consider(detail::transpose(a.f), a.route, a.k, true);
  if (!have)
    fail(ErrorCode::DecompositionFailed, "no route produced a verified factorization");
  best.report.notes = std::move(notes);
  return best;
}

} // namespace polyxt
