#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyxt/errors.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/interval.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/random.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// 1-based index quadruple (p, q, r, t) of the admissibility inequality
/// S_t^p * S_q^r > S_q^p * S_t^r (row index below, column index above).
struct Quadruple {
  std::size_t p, q, r, t;
  friend auto operator<=>(const Quadruple &, const Quadruple &) = default;
};

/// Membership test for the quantified classes. Indices must be distinct
/// pairwise within (p,q) and (r,t); column p = n (the closing edge) is
/// excluded, see README.
inline bool is_admissible_quadruple(std::size_t n, const Quadruple &x) {
  if (x.p == x.q || x.r == x.t)
    return false;
  if (x.p < 1 || x.q < 1 || x.r < 1 || x.t < 1 || x.p > n - 1 || x.q > n || x.r > n || x.t > n)
    return false;
  const bool class_i = std::min(x.p, x.q - 1) > x.r && x.r > x.t;
  const bool class_ii = x.q > x.p && x.p > std::max(x.r, x.t);
  return class_i || class_ii;
}

/// Calls f(quadruple) for every admissible quadruple in lexicographic
/// (p,q,r,t) order; stops early when f returns false.
template <class F> void for_each_quadruple(std::size_t n, F &&f) {
  for (std::size_t p = 1; p + 1 <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q) {
      if (q == p)
        continue;
      // q > p admits every r != t below p; q < p admits t < r < q-1.
      const std::size_t r_bound = q > p ? p : (q >= 2 ? q - 1 : 0);
      for (std::size_t r = 1; r < r_bound; ++r)
        for (std::size_t t = 1; t < r_bound; ++t) {
          if (t == r || (q < p && t > r))
            continue;
          if (!f(Quadruple{p, q, r, t}))
            return;
        }
    }
}

inline std::vector<Quadruple> admissible_quadruples(std::size_t n) {
  std::vector<Quadruple> out;
  for_each_quadruple(n, [&](const Quadruple &x) {
    out.push_back(x);
    return true;
  });
  return out;
}

inline std::uint64_t count_quadruples(std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t p = 1; p + 1 <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q) {
      if (q == p)
        continue;
      if (q > p) {
        const std::uint64_t k = p - 1;
        c += k * (k > 0 ? k - 1 : 0);
      } else if (q >= 3) {
        const std::uint64_t k = q - 2;
        c += k * (k > 0 ? k - 1 : 0) / 2;
      }
    }
  return c;
}

struct Violation {
  Quadruple at;
  Scalar lhs;
  Scalar rhs;
};

enum class CheckMode { Exhaustive, Sampled };

struct AdmissibilityReport {
  bool admissible = true;
  std::uint64_t checked_quadruples = 0;
  std::optional<Violation> first_violation;
  CheckMode mode = CheckMode::Exhaustive;
};

inline constexpr std::size_t kDefaultExhaustiveCap = 64;

namespace detail {

// Slack matrix with each column scaled to integers. Both sides of every
// inequality use one entry from column p and one from column r, so positive
// column scaling preserves every comparison.
struct IntegerSlack {
  std::size_t n;
  std::vector<Integer> entries;
  std::vector<Scalar> column_scale;

  const Integer &at(std::size_t i1, std::size_t j1) const { return entries[(i1 - 1) * n + (j1 - 1)]; }
};

inline IntegerSlack integer_slack(const VertexSequence &seq) {
  const std::size_t n = seq.size();
  IntegerSlack s{n, std::vector<Integer>(n * n), std::vector<Scalar>(n)};
  std::vector<Scalar> raw(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      raw[i * n + j] = slack_entry(seq, i, j);
  for (std::size_t j = 0; j < n; ++j) {
    Integer l = 1;
    for (std::size_t i = 0; i < n; ++i)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), raw[i * n + j].get_den_mpz_t());
    s.column_scale[j] = Scalar(l);
    for (std::size_t i = 0; i < n; ++i)
      s.entries[i * n + j] = raw[i * n + j].get_num() * (l / raw[i * n + j].get_den());
  }
  return s;
}

inline bool check_one(const IntegerSlack &s, const Quadruple &x, Integer &lhs, Integer &rhs) {
  lhs = s.at(x.t, x.p) * s.at(x.q, x.r);
  rhs = s.at(x.q, x.p) * s.at(x.t, x.r);
  return lhs > rhs;
}

inline Violation make_violation(const IntegerSlack &s, const Quadruple &x, const Integer &lhs,
                                const Integer &rhs) {
  const Scalar scale = s.column_scale[x.p - 1] * s.column_scale[x.r - 1];
  return Violation{x, Scalar(lhs) / scale, Scalar(rhs) / scale};
}

} // namespace detail

/// Exhaustive exact check over every admissible quadruple.
inline AdmissibilityReport is_admissible_exact(const VertexSequence &seq,
                                               std::size_t cap = kDefaultExhaustiveCap) {
  require_proper(seq);
  if (seq.size() > cap)
    fail(ErrorCode::CapExceeded, "n = " + std::to_string(seq.size()) + " exceeds the exhaustive cap " +
                                     std::to_string(cap) + "; use sampled mode");
  const auto s = detail::integer_slack(seq);
  AdmissibilityReport report;
  Integer lhs, rhs;
  for_each_quadruple(seq.size(), [&](const Quadruple &x) {
    ++report.checked_quadruples;
    if (detail::check_one(s, x, lhs, rhs))
      return true;
    report.admissible = false;
    report.first_violation = detail::make_violation(s, x, lhs, rhs);
    return false;
  });
  return report;
}

/// Spot check of `samples` quadruples drawn uniformly from the quantified
/// classes. A violation is definitive; a pass only means none was found.
inline AdmissibilityReport is_admissible_sampled(const VertexSequence &seq, std::uint64_t samples,
                                                 std::uint64_t rng_seed) {
  require_proper(seq);
  AdmissibilityReport report;
  report.mode = CheckMode::Sampled;
  const std::size_t n = seq.size();
  if (samples == 0 || count_quadruples(n) == 0)
    return report;
  const auto s = detail::integer_slack(seq);
  Rng rng(rng_seed);
  Integer lhs, rhs;
  while (report.checked_quadruples < samples) {
    Quadruple x{1 + uniform_below(rng, n), 1 + uniform_below(rng, n), 1 + uniform_below(rng, n),
                1 + uniform_below(rng, n)};
    if (!is_admissible_quadruple(n, x))
      continue;
    ++report.checked_quadruples;
    if (!detail::check_one(s, x, lhs, rhs)) {
      report.admissible = false;
      report.first_violation = detail::make_violation(s, x, lhs, rhs);
      break;
    }
  }
  return report;
}

enum class Direction { Increasing, Decreasing, Neither };

inline std::string_view to_string(Direction d) {
  switch (d) {
  case Direction::Increasing: return "increasing";
  case Direction::Decreasing: return "decreasing";
  case Direction::Neither: return "neither";
  }
  return "neither";
}

/// h-monotonicity of an exact sequence. A sequence that is both (possible
/// only for h = 1 and constant input) reports Increasing.
inline Direction is_h_monotone(const std::vector<Scalar> &values, const Scalar &h) {
  if (values.empty())
    fail(ErrorCode::EmptyInput, "is_h_monotone on an empty sequence");
  if (sgn(h) <= 0)
    fail(ErrorCode::InvalidArgument, "h must be positive");
  bool inc = true;
  bool dec = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    inc = inc && h * values[i] <= values[i + 1];
    dec = dec && values[i] >= h * values[i + 1];
  }
  if (inc)
    return Direction::Increasing;
  if (dec)
    return Direction::Decreasing;
  return Direction::Neither;
}

/// Exact comparison of two exterior angles beta(a1,a2,a3) and
/// beta(b1,b2,b3): returns -1, 0 or +1. Works on cosines, since
/// cos(beta) = -(u.w)/(|u||w|) is strictly decreasing on [0, pi].
inline int compare_angles(const Point &a1, const Point &a2, const Point &a3, const Point &b1, const Point &b2,
                          const Point &b3) {
  const Point u1 = a1 - a2, w1 = a3 - a2, u2 = b1 - b2, w2 = b3 - b2;
  const Scalar x1 = -dot(u1, w1), x2 = -dot(u2, w2);
  const Scalar y1 = dot(u1, u1) * dot(w1, w1), y2 = dot(u2, u2) * dot(w2, w2);
  if (sgn(y1) == 0 || sgn(y2) == 0)
    fail(ErrorCode::DegenerateAngle, "angle with a zero-length side");
  // cos1 vs cos2 with cos_i = x_i / sqrt(y_i).
  int cmp_cos;
  const int s1 = sgn(x1), s2 = sgn(x2);
  if (s1 != s2) {
    cmp_cos = s1 < s2 ? -1 : 1;
  } else {
    const int mag = sgn(x1 * x1 * y2 - x2 * x2 * y1);
    cmp_cos = s1 >= 0 ? mag : -mag;
  }
  return -cmp_cos;
}

/// Turning angle at interior vertex k (0-based, 1 <= k <= n-2) of the open
/// chain, enclosure at the given precision.
inline Interval turn_interval(const VertexSequence &seq, std::size_t k, unsigned bits) {
  return angle_interval(seq[k - 1], seq[k], seq[k + 1], bits).interval();
}

/// gamma_k = d(v_k, v_{k+1}) * beta(v_{k-1}, v_k, v_{k+1}), 0-based k.
inline Interval edge_by_angle_interval(const VertexSequence &seq, std::size_t k, unsigned bits) {
  return mul_nonneg(sqrt_interval(squared_distance(seq[k], seq[k + 1]), bits), turn_interval(seq, k, bits));
}

inline Interval turn_sum_interval(const VertexSequence &seq, unsigned bits) {
  Interval sum{Scalar(0), Scalar(0)};
  for (std::size_t k = 1; k + 1 < seq.size(); ++k)
    sum = sum + turn_interval(seq, k, bits);
  return sum;
}

/// Certified theta-thinness of the open chain: the sum of interior turning
/// angles is at most theta. Throws Indeterminate at the precision cap.
inline bool is_thin(const VertexSequence &seq, const Scalar &theta, unsigned precision = default_precision(),
                    unsigned max_precision = kMaxPrecision) {
  if (seq.size() < 3)
    fail(ErrorCode::SequenceTooShort, "thinness needs at least three points");
  return escalate(
      [&](unsigned bits) {
        const Interval s = turn_sum_interval(seq, bits);
        if (s.hi <= theta)
          return Certainty::True;
        if (s.lo > theta)
          return Certainty::False;
        return Certainty::Unknown;
      },
      "thinness", precision, max_precision);
}

/// Certified h-monotonicity of a family of enclosures produced by
/// `make(bits)`. `increasing` selects the direction under test.
template <class Make>
Certainty certify_monotone_once(Make &&make, const Scalar &h, bool increasing, unsigned bits) {
  const std::vector<Interval> xs = make(bits);
  Certainty out = Certainty::True;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Interval &a = increasing ? xs[i] : xs[i + 1];
    const Interval &b = increasing ? xs[i + 1] : xs[i];
    // need h * a <= b
    if (h * a.hi <= b.lo)
      continue;
    if (h * a.lo > b.hi)
      return Certainty::False;
    out = Certainty::Unknown;
  }
  return out;
}

struct SufficiencyReport {
  bool thin_ok = false;
  bool edges_ok = false;
  bool angle_ok = false;
  bool edge_by_angle_ok = false;
  Scalar theta;
  Scalar h;
  unsigned precision_used = 0;
  /// Hypotheses whose interval comparisons stayed undecided at the cap;
  /// their flags are false.
  std::vector<std::string> undecided;

  [[nodiscard]] bool all() const { return thin_ok && edges_ok && angle_ok && edge_by_angle_ok; }
};

/// Exact test of the n^2-decreasing edge hypothesis on squared lengths.
inline bool edges_decreasing(const VertexSequence &seq, const Scalar &h) {
  const auto sq = squared_edge_sequence(seq);
  const Scalar h2 = h * h;
  for (std::size_t i = 0; i + 1 < sq.size(); ++i)
    if (sq[i] < h2 * sq[i + 1])
      return false;
  return true;
}

/// Exact test that the angle sequence is monotone (non-strict, either
/// direction).
inline bool angles_monotone(const VertexSequence &seq) {
  bool inc = true, dec = true;
  for (std::size_t k = 1; k + 2 < seq.size(); ++k) {
    const int c = compare_angles(seq[k - 1], seq[k], seq[k + 1], seq[k], seq[k + 1], seq[k + 2]);
    inc = inc && c <= 0;
    dec = dec && c >= 0;
  }
  return inc || dec;
}

/// Evaluates the four sufficient hypotheses for admissibility: theta-thin
/// with theta = 1/n, n^2-decreasing edges, monotone angles, monotone
/// edge-by-angle products. Every flag is true only when certified.
inline SufficiencyReport check_sufficient_conditions(const VertexSequence &seq,
                                                     unsigned precision = default_precision(),
                                                     unsigned max_precision = 4096) {
  require_proper(seq);
  const std::size_t n = seq.size();
  SufficiencyReport rep;
  rep.theta = Scalar(1, static_cast<unsigned long>(n));
  rep.h = Scalar(static_cast<unsigned long>(n * n));
  rep.precision_used = precision;
  auto run = [&](const char *name, auto &&attempt) {
    try {
      unsigned used = precision;
      const bool ok = escalate(attempt, name, precision, max_precision, &used);
      rep.precision_used = std::max(rep.precision_used, used);
      return ok;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::Indeterminate)
        throw;
      rep.undecided.emplace_back(name);
      rep.precision_used = max_precision;
      return false;
    }
  };
  rep.thin_ok = run("thin", [&](unsigned bits) {
    const Interval s = turn_sum_interval(seq, bits);
    if (s.hi <= rep.theta)
      return Certainty::True;
    if (s.lo > rep.theta)
      return Certainty::False;
    return Certainty::Unknown;
  });
  rep.edges_ok = edges_decreasing(seq, rep.h);
  rep.angle_ok = angles_monotone(seq);
  auto gammas = [&](unsigned bits) {
    std::vector<Interval> xs;
    for (std::size_t k = 1; k + 1 < n; ++k)
      xs.push_back(edge_by_angle_interval(seq, k, bits));
    return xs;
  };
  rep.edge_by_angle_ok = run("edge_by_angle", [&](unsigned bits) {
    const Certainty inc = certify_monotone_once(gammas, Scalar(1), true, bits);
    if (inc == Certainty::True)
      return inc;
    const Certainty dec = certify_monotone_once(gammas, Scalar(1), false, bits);
    if (dec == Certainty::True)
      return dec;
    if (inc == Certainty::False && dec == Certainty::False)
      return Certainty::False;
    return Certainty::Unknown;
  });
  return rep;
}

} // namespace polyxt
