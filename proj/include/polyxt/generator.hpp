#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/errors.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/interval.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/random.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// How consecutive edge directions are produced.
///  - Rotation: direction k+1 is direction k rotated clockwise by the exact
///    rational rotation ((1-t^2)/(1+t^2), 2t/(1+t^2)), t = t0 * g^k, so the
///    turn at the vertex is 2 atan(t).
///  - Slope: edge k is h^-k * (1, -s_k) with s_0 = 0 and
///    s_{k+1} = s_k + t0 * g^k. Coordinates stay dyadic for dyadic
///    parameters, which keeps bit lengths several times smaller.
enum class ChainFamily { Rotation, Slope };

inline std::string_view to_string(ChainFamily f) { return f == ChainFamily::Rotation ? "rotation" : "slope"; }

struct AdmissibleProfile {
  ChainFamily family = ChainFamily::Rotation;
  /// Edge k has length h^-k (rotation) or horizontal extent h^-k (slope).
  Scalar h;
  Scalar t0;
  Scalar g;

  friend bool operator==(const AdmissibleProfile &, const AdmissibleProfile &) = default;
};

/// h = 4, g = 2, t0 = 2^-n slope chain. Cheapest coordinates; the builder's
/// reduced matrix stays nonnegative on it up to at least m = 25.
inline AdmissibleProfile gentle_profile(std::size_t n) {
  return {ChainFamily::Slope, Scalar(4), Scalar(1) / pow(Scalar(2), static_cast<unsigned>(n)), Scalar(2)};
}

inline AdmissibleProfile medium_profile(std::size_t n) {
  return {ChainFamily::Rotation, Scalar(8), Scalar(1) / pow(Scalar(2), static_cast<unsigned>(n + 1)), Scalar(2)};
}

/// h = n^2+1, g = 3, t0 = 3^-n / n: meets the sufficient hypotheses
/// (thin, n^2-decreasing edges, monotone angles and edge-by-angle products).
inline AdmissibleProfile strict_profile(std::size_t n) {
  const auto nn = static_cast<unsigned long>(n);
  return {ChainFamily::Rotation, Scalar(nn * nn + 1),
          Scalar(1) / (pow(Scalar(3), static_cast<unsigned>(n)) * Scalar(nn)), Scalar(3)};
}

/// Profiles tried in order on downstream failure; each entry is harsher than
/// the one before.
inline std::vector<AdmissibleProfile> escalation_schedule(std::size_t n) {
  return {gentle_profile(n), medium_profile(n), strict_profile(n)};
}

/// Chain of n vertices per the profile, starting at the origin and heading
/// along +x with clockwise turning. Throws ProfileTooAggressive when the
/// result (closing edge included) is not in strictly convex position.
inline VertexSequence generate_admissible(std::size_t n, const AdmissibleProfile &profile) {
  if (n < 4)
    fail(ErrorCode::InvalidArgument, "generate_admissible needs n >= 4, got " + std::to_string(n));
  if (profile.h <= 1 || sgn(profile.t0) <= 0 || sgn(profile.g) <= 0)
    fail(ErrorCode::InvalidArgument, "profile needs h > 1, t0 > 0, g > 0");
  std::vector<Point> v;
  v.reserve(n);
  v.push_back({Scalar(0), Scalar(0)});
  const Scalar inv_h = 1 / profile.h;
  Scalar len = 1;
  Scalar t = profile.t0;
  if (profile.family == ChainFamily::Rotation) {
    Point d{Scalar(1), Scalar(0)};
    for (std::size_t k = 0; k + 1 < n; ++k) {
      v.push_back({v.back().x + len * d.x, v.back().y + len * d.y});
      const Scalar den = 1 + t * t;
      const Scalar c = (1 - t * t) / den;
      const Scalar s = 2 * t / den;
      d = Point{c * d.x + s * d.y, c * d.y - s * d.x};
      len *= inv_h;
      t *= profile.g;
    }
  } else {
    Scalar slope = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      v.push_back({v.back().x + len, v.back().y - slope * len});
      slope += t;
      len *= inv_h;
      t *= profile.g;
    }
  }
  VertexSequence seq(std::move(v));
  if (!is_proper(seq))
    fail(ErrorCode::ProfileTooAggressive, "chain is not in strictly convex position");
  return seq;
}

namespace detail {

// One coordinate stream of the Valtr construction: n integer increments
// summing to zero.
inline std::vector<long long> valtr_components(std::size_t n, Rng &rng, std::uint64_t range) {
  std::set<std::uint64_t> picked;
  while (picked.size() < n)
    picked.insert(uniform_below(rng, range));
  std::vector<long long> xs(picked.begin(), picked.end());
  const long long lo = xs.front(), hi = xs.back();
  long long a = lo, b = lo;
  std::vector<long long> out;
  out.reserve(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (coin(rng)) {
      out.push_back(xs[i] - a);
      a = xs[i];
    } else {
      out.push_back(b - xs[i]);
      b = xs[i];
    }
  }
  out.push_back(hi - a);
  out.push_back(b - hi);
  return out;
}

} // namespace detail

/// Random convex polygon with integer coordinates (Valtr's construction),
/// clockwise. Deterministic in seed; redraws until strictly convex.
inline VertexSequence generate_random_convex(std::size_t n, std::uint64_t seed) {
  if (n < 3)
    fail(ErrorCode::SequenceTooShort, "random polygon needs n >= 3");
  Rng rng(seed);
  const std::uint64_t range = std::max<std::uint64_t>(1ULL << 30, 4 * n);
  for (;;) {
    const auto xs = detail::valtr_components(n, rng, range);
    auto ys = detail::valtr_components(n, rng, range);
    shuffle(ys.begin(), ys.end(), rng);
    std::vector<Point> vec(n);
    bool zero = false;
    for (std::size_t i = 0; i < n; ++i) {
      vec[i] = {Scalar(static_cast<long>(xs[i])), Scalar(static_cast<long>(ys[i]))};
      zero = zero || (xs[i] == 0 && ys[i] == 0);
    }
    if (zero)
      continue;
    // Decreasing counterclockwise angle gives clockwise traversal.
    std::stable_sort(vec.begin(), vec.end(),
                     [](const Point &a, const Point &b) { return detail::angle_less(b, a); });
    std::vector<Point> v{{Scalar(0), Scalar(0)}};
    for (std::size_t i = 0; i + 1 < n; ++i)
      v.push_back(v.back() + vec[i]);
    VertexSequence seq(std::move(v));
    if (is_proper(seq))
      return seq;
  }
}

/// Regular n-gon approximation: vertex k sits exactly on the unit circle at
/// an angle within about 2^-precision of -2 pi k / n (clockwise from (1,0)).
/// Points come from the rational parameterization of the circle, so only
/// the angle is approximated.
inline VertexSequence generate_regular(std::size_t n, unsigned precision = 64) {
  if (n < 3)
    fail(ErrorCode::SequenceTooShort, "regular polygon needs n >= 3");
  std::vector<Point> v;
  v.reserve(n);
  const unsigned work = precision + 32;
  for (std::size_t k = 0; k < n; ++k) {
    // Nearest quarter turn and the residual angle psi in [-pi/4, pi/4].
    const std::size_t q = (8 * k + n) / (2 * n);
    const long long num = static_cast<long long>(4 * k) - static_cast<long long>(q * n);
    Scalar t = 0;
    if (num != 0) {
      detail::Mpfr a(work), out(precision);
      mpfr_const_pi(a.get(), MPFR_RNDN);
      mpfr_mul_si(a.get(), a.get(), -num, MPFR_RNDN);
      mpfr_div_ui(a.get(), a.get(), static_cast<unsigned long>(4 * n), MPFR_RNDN);
      mpfr_tan(out.get(), a.get(), MPFR_RNDN);
      t = detail::to_scalar(out);
    }
    const Scalar den = 1 + t * t;
    Point p{(1 - t * t) / den, 2 * t / den};
    for (std::size_t r = 0; r < q % 4; ++r)
      p = Point{p.y, -p.x};
    v.push_back(std::move(p));
  }
  VertexSequence seq(std::move(v));
  require_proper(seq);
  return seq;
}

struct RankOneHint {
  std::vector<Scalar> row;
  std::vector<Scalar> col;
};

struct Rank3Instance {
  Matrix matrix;
  std::array<RankOneHint, 3> factors_hint;
};

/// Sum of three random nonnegative integer rank-one terms, redrawn until
/// the exact rank is 3. Deterministic in seed.
inline Rank3Instance generate_rank3_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 3 || n < 3)
    fail(ErrorCode::InvalidArgument, "rank-3 instance needs m, n >= 3");
  Rng rng(seed);
  for (;;) {
    Rank3Instance inst{Matrix(m, n), {}};
    for (auto &hint : inst.factors_hint) {
      hint.row.resize(m);
      hint.col.resize(n);
      // About one entry in four is zero so slices meet several facets.
      for (auto &x : hint.row)
        x = uniform_below(rng, 4) == 0 ? 0 : static_cast<long>(uniform_below(rng, 100));
      for (auto &x : hint.col)
        x = uniform_below(rng, 4) == 0 ? 0 : static_cast<long>(uniform_below(rng, 100));
    }
    for (const auto &hint : inst.factors_hint)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          inst.matrix(i, j) += hint.row[i] * hint.col[j];
    if (exact_rank(inst.matrix) == 3)
      return inst;
  }
}

} // namespace polyxt
