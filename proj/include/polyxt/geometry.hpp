#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/errors.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

struct Point {
  Scalar x;
  Scalar y;

  friend bool operator==(const Point &, const Point &) = default;
  friend Point operator+(const Point &a, const Point &b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point &a, const Point &b) { return {a.x - b.x, a.y - b.y}; }
};

inline Scalar cross(const Point &a, const Point &b) { return a.x * b.y - a.y * b.x; }
inline Scalar dot(const Point &a, const Point &b) { return a.x * b.x + a.y * b.y; }

/// Oriented area of the parallelogram spanned by u1-u2 and u3-u2:
/// (u1-u2) x (u3-u2). Positive values along a proper sequence mean the
/// vertices are listed clockwise.
inline Scalar oriented_area(const Point &u1, const Point &u2, const Point &u3) {
  return (u1.x - u2.x) * (u3.y - u2.y) - (u1.y - u2.y) * (u3.x - u2.x);
}

inline Scalar squared_distance(const Point &a, const Point &b) {
  const Scalar dx = a.x - b.x;
  const Scalar dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Ordered list of plane points with the closing convention v_{n+1} = v_1.
/// Indices are 0-based in code.
class VertexSequence {
public:
  VertexSequence() = default;
  explicit VertexSequence(std::vector<Point> vertices) : vertices_(std::move(vertices)) {}

  [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return vertices_.empty(); }
  [[nodiscard]] const Point &operator[](std::size_t i) const { return vertices_[i]; }
  /// Cyclic access.
  [[nodiscard]] const Point &at_cyclic(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  [[nodiscard]] std::span<const Point> vertices() const noexcept { return vertices_; }
  [[nodiscard]] auto begin() const noexcept { return vertices_.begin(); }
  [[nodiscard]] auto end() const noexcept { return vertices_.end(); }

  [[nodiscard]] VertexSequence subsequence(std::span<const std::size_t> indices) const {
    std::vector<Point> out;
    out.reserve(indices.size());
    for (auto i : indices)
      out.push_back(vertices_.at(i));
    return VertexSequence(std::move(out));
  }
  [[nodiscard]] VertexSequence slice(std::size_t first, std::size_t count) const {
    return VertexSequence(std::vector<Point>(vertices_.begin() + static_cast<std::ptrdiff_t>(first),
                                             vertices_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

  friend bool operator==(const VertexSequence &, const VertexSequence &) = default;

private:
  std::vector<Point> vertices_;
};

struct ProperReport {
  bool proper = false;
  /// First index j (0-based) whose cyclic triple (v_j, v_{j+1}, v_{j+2}) is
  /// not strictly positive, if any.
  std::optional<std::size_t> first_bad_triple;
  /// Locally convex but winding more than once around (star polygon).
  bool winds_multiple_times = false;

  explicit operator bool() const noexcept { return proper; }
};

namespace detail {

// Half-turn class of a nonzero direction for exact angular comparison:
// 0 for angles in [0, pi), 1 for [pi, 2pi).
inline int half_of(const Point &d) {
  const int sy = sgn(d.y);
  if (sy > 0 || (sy == 0 && sgn(d.x) > 0))
    return 0;
  return 1;
}

// True when the counterclockwise angle of a (in [0, 2pi)) is below that of b.
inline bool angle_less(const Point &a, const Point &b) {
  const int ha = half_of(a);
  const int hb = half_of(b);
  if (ha != hb)
    return ha < hb;
  return sgn(cross(a, b)) > 0;
}

} // namespace detail

/// A sequence is proper iff every cyclic triple has strictly positive
/// oriented area and the edge directions wind exactly once (so every
/// consecutive segment, including the closing one, is a hull edge).
inline ProperReport is_proper(const VertexSequence &seq) {
  const std::size_t n = seq.size();
  if (n < 3)
    fail(ErrorCode::SequenceTooShort, "proper sequences need n >= 3, got " + std::to_string(n));
  ProperReport report;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(oriented_area(seq.at_cyclic(j), seq.at_cyclic(j + 1), seq.at_cyclic(j + 2))) <= 0) {
      report.first_bad_triple = j;
      return report;
    }
  }
  // Directions turn clockwise at every vertex by less than pi; each wrap of
  // the counterclockwise angle through zero counts one full clockwise turn.
  std::size_t wraps = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Point a = seq.at_cyclic(j + 1) - seq.at_cyclic(j);
    const Point b = seq.at_cyclic(j + 2) - seq.at_cyclic(j + 1);
    if (detail::angle_less(a, b))
      ++wraps;
  }
  if (wraps != 1) {
    report.winds_multiple_times = true;
    return report;
  }
  report.proper = true;
  return report;
}

inline void require_proper(const VertexSequence &seq) {
  const auto report = is_proper(seq);
  if (!report) {
    if (report.first_bad_triple)
      fail(ErrorCode::NotProper, "cyclic triple at index " + std::to_string(*report.first_bad_triple) +
                                     " is not strictly positive");
    fail(ErrorCode::NotProper, "vertex sequence winds more than once");
  }
}

/// Squared edge lengths d(v_k, v_{k+1})^2 of the open chain, k = 0..n-2.
inline std::vector<Scalar> squared_edge_sequence(const VertexSequence &seq) {
  std::vector<Scalar> out;
  if (seq.size() < 2)
    return out;
  out.reserve(seq.size() - 1);
  for (std::size_t k = 0; k + 1 < seq.size(); ++k)
    out.push_back(squared_distance(seq[k], seq[k + 1]));
  return out;
}

/// Homogeneous 3-vector (w0, w1, w2) standing for the point (w1/w0, w2/w0)
/// when w0 != 0 and for a direction when w0 = 0.
using Vec3 = std::array<Scalar, 3>;

inline Vec3 homogenize(const Point &p) { return {Scalar(1), p.x, p.y}; }

inline Scalar dot3(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross3(const Vec3 &a, const Vec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Coefficients of the linear form z -> oriented_area(z, a, b) extended to
/// homogeneous coordinates, so that dot3(form, homogenize(w)) equals
/// oriented_area(w, a, b).
inline Vec3 edge_form(const Point &a, const Point &b) {
  const Scalar dy = b.y - a.y;
  const Scalar dx = b.x - a.x;
  return {a.y * dx - a.x * dy, dy, -dx};
}

} // namespace polyxt
