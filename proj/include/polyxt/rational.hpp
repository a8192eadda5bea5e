#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

#include "polyxt/errors.hpp"

namespace polyxt {

/// Exact rational scalar. gmpxx keeps every arithmetic result canonical
/// (reduced, positive denominator); values parsed from text are
/// canonicalized explicitly so structural equality is value equality.
using Scalar = mpq_class;
using Integer = mpz_class;

inline Scalar make_scalar(long num, long den = 1) {
  if (den == 0)
    fail(ErrorCode::InvalidArgument, "zero denominator");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q" or "p" with decimal integers; rejects zero denominators.
inline Scalar parse_scalar(std::string_view text) {
  if (text.empty())
    fail(ErrorCode::ParseError, "empty rational literal");
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty())
      return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+'))
      i = 1;
    if (i == s.size())
      return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9')
        return false;
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    fail(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
  std::string num_s(num);
  if (num_s[0] == '+')
    num_s.erase(0, 1);
  Integer n(num_s, 10);
  Integer d{std::string(den), 10};
  if (d == 0)
    fail(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  Scalar q(n, d);
  q.canonicalize();
  return q;
}

/// Canonical text form: "p/q", always with an explicit denominator.
inline std::string to_string(const Scalar &q) {
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

inline std::size_t bit_length(const Scalar &q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

inline int sign(const Scalar &q) { return sgn(q); }

inline Scalar pow(const Scalar &base, unsigned exponent) {
  Scalar out(1);
  Scalar b = base;
  while (exponent) {
    if (exponent & 1U)
      out *= b;
    exponent >>= 1U;
    if (exponent)
      b *= b;
  }
  return out;
}

} // namespace polyxt
