#pragma once

#include <mpfr.h>

#include <cstdlib>
#include <string>

#include "polyxt/errors.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// Closed interval [lo, hi] with exact rational (dyadic) endpoints.
struct Interval {
  Scalar lo;
  Scalar hi;

  [[nodiscard]] bool contains(const Scalar &x) const { return lo <= x && x <= hi; }
  [[nodiscard]] Scalar width() const { return hi - lo; }

  friend Interval operator+(const Interval &a, const Interval &b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend bool operator==(const Interval &, const Interval &) = default;
};

/// Product of two intervals with nonnegative endpoints.
inline Interval mul_nonneg(const Interval &a, const Interval &b) { return {a.lo * b.lo, a.hi * b.hi}; }

inline Interval scale(const Interval &a, const Scalar &c) {
  if (sgn(c) >= 0)
    return {a.lo * c, a.hi * c};
  return {a.hi * c, a.lo * c};
}

/// Enclosure of beta(u1,u2,u3) = pi - alpha(u1,u2,u3) in radians.
struct AngleInterval {
  Scalar lo;
  Scalar hi;
  unsigned precision_bits = 0;

  [[nodiscard]] Interval interval() const { return {lo, hi}; }
};

inline constexpr unsigned kMinPrecision = 128;
inline constexpr unsigned kMaxPrecision = 1U << 16;

/// Starting precision for escalation loops; POLYXT_PRECISION overrides it.
inline unsigned default_precision() {
  if (const char *env = std::getenv("POLYXT_PRECISION")) {
    char *end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 16 && v <= kMaxPrecision)
      return static_cast<unsigned>(v);
  }
  return kMinPrecision;
}

namespace detail {

class Mpfr {
public:
  explicit Mpfr(unsigned bits) { mpfr_init2(v_, static_cast<mpfr_prec_t>(bits)); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr &) = delete;
  Mpfr &operator=(const Mpfr &) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

private:
  mpfr_t v_;
};

inline Scalar to_scalar(const Mpfr &x) {
  Scalar q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return q;
}

// atan2 enclosure over the box [ylo,yhi] x [xlo,xhi] (box must avoid the
// origin and the negative x half-axis; here y >= 0 always).
inline Interval atan2_box(const Scalar &y, const Scalar &x, unsigned bits, const Scalar &pi_hi) {
  Mpfr ylo(bits), yhi(bits), xlo(bits), xhi(bits);
  mpfr_set_q(ylo.get(), y.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(yhi.get(), y.get_mpq_t(), MPFR_RNDU);
  mpfr_set_q(xlo.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(xhi.get(), x.get_mpq_t(), MPFR_RNDU);
  const bool x_straddles = mpfr_sgn(xlo.get()) <= 0 && mpfr_sgn(xhi.get()) >= 0;
  if (mpfr_sgn(ylo.get()) <= 0 && x_straddles)
    return {Scalar(0), pi_hi};
  // Directed rounding at each corner; the extreme arguments of a convex box
  // in the closed upper half-plane are attained at its corners.
  Mpfr t(bits), best_lo(bits), best_hi(bits);
  bool first = true;
  for (auto *yy : {&ylo, &yhi})
    for (auto *xx : {&xlo, &xhi}) {
      mpfr_atan2(t.get(), yy->get(), xx->get(), MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), best_lo.get()))
        mpfr_set(best_lo.get(), t.get(), MPFR_RNDD);
      mpfr_atan2(t.get(), yy->get(), xx->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), best_hi.get()))
        mpfr_set(best_hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  Scalar lo = to_scalar(best_lo);
  if (sgn(lo) < 0)
    lo = 0;
  return {lo, to_scalar(best_hi)};
}

} // namespace detail

/// Enclosure of pi at the given precision.
inline Interval pi_interval(unsigned bits) {
  detail::Mpfr lo(bits), hi(bits);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return {detail::to_scalar(lo), detail::to_scalar(hi)};
}

/// Enclosure of sqrt(x) for x >= 0.
inline Interval sqrt_interval(const Scalar &x, unsigned bits) {
  if (sgn(x) < 0)
    fail(ErrorCode::InvalidArgument, "sqrt of a negative value");
  detail::Mpfr lo(bits), hi(bits);
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), hi.get(), MPFR_RNDU);
  return {detail::to_scalar(lo), detail::to_scalar(hi)};
}

/// Certified enclosure of beta(u1,u2,u3) = pi - alpha(u1,u2,u3), the
/// exterior (turning) angle at u2. With a = u1-u2 and b = u3-u2,
/// beta = atan2(|a x b|, -a.b).
inline AngleInterval angle_interval(const Point &u1, const Point &u2, const Point &u3,
                                    unsigned precision_bits = kMinPrecision) {
  const Point a = u1 - u2;
  const Point b = u3 - u2;
  if ((sgn(a.x) == 0 && sgn(a.y) == 0) || (sgn(b.x) == 0 && sgn(b.y) == 0))
    fail(ErrorCode::DegenerateAngle, "angle with a zero-length side");
  if (precision_bits < 2)
    fail(ErrorCode::InvalidArgument, "precision must be at least 2 bits");
  const Scalar c = abs(cross(a, b));
  const Scalar d = -dot(a, b);
  const Interval pi = pi_interval(precision_bits);
  const Interval r = detail::atan2_box(c, d, precision_bits, pi.hi);
  return {r.lo, r.hi, precision_bits};
}

/// Tri-state outcome of an interval comparison.
enum class Certainty { True, False, Unknown };

/// Runs `attempt(bits)` (returning Certainty) at doubling precision starting
/// from `start`, and returns the first decided answer. Throws Indeterminate
/// once `cap` bits have been tried.
template <class Attempt>
bool escalate(Attempt &&attempt, const std::string &what, unsigned start = default_precision(),
              unsigned cap = kMaxPrecision, unsigned *used = nullptr) {
  for (unsigned bits = start; bits <= cap; bits *= 2) {
    const Certainty c = attempt(bits);
    if (c != Certainty::Unknown) {
      if (used)
        *used = bits;
      return c == Certainty::True;
    }
    if (bits > cap / 2)
      break;
  }
  fail(ErrorCode::Indeterminate, what + " undecided at " + std::to_string(cap) + " bits");
}

} // namespace polyxt
