#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/errors.hpp"
#include "polyxt/factorization.hpp"
#include "polyxt/generator.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/parallel.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

/// Rank-one reduction of the slack matrix of a proper m^2-gon (0-based
/// vertices, i = sigma*m + r). Row i with 2 <= r <= m-2 loses
/// C[r][sigma'] / C[r][sigma] times row sigma'*m + r on the columns of
/// block sigma', where
///   C[r][sigma] = prod_{t<sigma} S(t m + r, (t+1) m) * prod_{tau>sigma} S(tau m + r, tau m).
/// The reduced matrix is never stored; entries are evaluated on demand
/// because their bit length grows with m.
class ReductionBundle {
public:
  ReductionBundle(const VertexSequence &seq, std::size_t m) : seq_(&seq), m_(m) {
    if (m <= 3)
      fail(ErrorCode::InvalidArgument, "reduction needs m > 3, got m = " + std::to_string(m));
    if (seq.size() != m * m)
      fail(ErrorCode::InvalidArgument, "reduction needs exactly m^2 = " + std::to_string(m * m) +
                                           " vertices, got " + std::to_string(seq.size()));
    require_proper(seq);
    coef_.resize(m - 3);
    alpha_.resize(m - 3);
    parallel_for(m - 3, [&](std::size_t idx) { init_r(idx + 2); });
  }

  [[nodiscard]] std::size_t m() const noexcept { return m_; }
  [[nodiscard]] std::size_t n() const noexcept { return m_ * m_; }
  [[nodiscard]] const VertexSequence &sequence() const noexcept { return *seq_; }

  [[nodiscard]] bool in_p(std::size_t i) const noexcept {
    const std::size_t r = i % m_;
    return r >= 2 && r + 2 <= m_;
  }
  [[nodiscard]] std::vector<std::size_t> p_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n(); ++i)
      if (in_p(i))
        out.push_back(i);
    return out;
  }
  /// P_sigma = {sigma m + 2, ..., sigma m + m - 2}.
  [[nodiscard]] std::vector<std::size_t> block(std::size_t sigma) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 2; r + 2 <= m_; ++r)
      out.push_back(sigma * m_ + r);
    return out;
  }

  [[nodiscard]] const Scalar &coefficient(std::size_t r, std::size_t sigma) const { return coef_[r - 2][sigma]; }

  /// C[r][sigma] / C[r][sigma_row]; the reduction weight row sigma_row*m+r
  /// places on block sigma.
  [[nodiscard]] const Scalar &ratio(std::size_t r, std::size_t sigma, std::size_t sigma_row) const {
    return alpha_[r - 2][sigma_row * m_ + sigma];
  }

  /// A^r: supported on indices congruent to r mod m, A^r_{sigma m + r} = 1 / C[r][sigma].
  [[nodiscard]] std::vector<Scalar> a_vector(std::size_t r) const {
    std::vector<Scalar> a(n());
    for (std::size_t s = 0; s < m_; ++s)
      a[s * m_ + r] = 1 / coefficient(r, s);
    return a;
  }

  /// B_r restricted to the columns in P: B_r^j = C[r][j/m] * S(r + (j/m) m, j).
  [[nodiscard]] std::vector<Scalar> b_vector(std::size_t r) const {
    std::vector<Scalar> b(n());
    for (std::size_t j = 0; j < n(); ++j)
      if (in_p(j))
        b[j] = coefficient(r, j / m_) * slack_entry(*seq_, r + (j / m_) * m_, j);
    return b;
  }

  /// Reduced entry as an unreduced fraction num/den (den > 0).
  void reduced_raw(std::size_t i, std::size_t j, Integer &num, Integer &den) const {
    const Scalar s = slack_entry(*seq_, i, j);
    if (!in_p(i) || !in_p(j)) {
      num = s.get_num();
      den = s.get_den();
      return;
    }
    const std::size_t r = i % m_;
    const std::size_t sj = j / m_;
    const Scalar &w = ratio(r, sj, i / m_);
    const Scalar t = slack_entry(*seq_, sj * m_ + r, j);
    const Integer wd = w.get_den() * t.get_den();
    num = s.get_num() * wd - w.get_num() * t.get_num() * s.get_den();
    den = s.get_den() * wd;
  }

  [[nodiscard]] Scalar reduced_entry(std::size_t i, std::size_t j) const {
    Integer num, den;
    reduced_raw(i, j, num, den);
    Scalar q(num, den);
    q.canonicalize();
    return q;
  }

  [[nodiscard]] int reduced_sign(std::size_t i, std::size_t j) const {
    Integer num, den;
    reduced_raw(i, j, num, den);
    return sgn(num);
  }

  /// Dense reduced matrix; meant for tests and small m.
  [[nodiscard]] Matrix reduced_matrix() const {
    Matrix out(n(), n());
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j)
        out(i, j) = reduced_entry(i, j);
    return out;
  }

  /// Throws NegativeReducedEntry at the first negative entry in row-major
  /// order, and asserts that every diagonal block vanishes.
  void check_reduced() const {
    const auto p = p_indices();
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> bad(p.size());
    parallel_for(p.size(), [&](std::size_t a) {
      for (auto j : p)
        if (reduced_sign(p[a], j) < 0) {
          bad[a] = std::make_pair(p[a], j);
          return;
        }
    });
    for (const auto &b : bad)
      if (b)
        fail(ErrorCode::NegativeReducedEntry,
             "reduced entry (" + std::to_string(b->first) + "," + std::to_string(b->second) + ") is negative");
    for (std::size_t s = 0; s < m_; ++s)
      for (auto i : block(s))
        for (auto j : block(s))
          if (reduced_sign(i, j) != 0)
            fail(ErrorCode::NegativeReducedEntry, "diagonal block " + std::to_string(s) + " does not vanish at (" +
                                                      std::to_string(i) + "," + std::to_string(j) + ")");
  }

private:
  void init_r(std::size_t r) {
    const VertexSequence &v = *seq_;
    // fwd[t] = S(t m + r, (t+1) m), bwd[tau] = S(tau m + r, tau m)
    std::vector<Scalar> fwd(m_), bwd(m_);
    for (std::size_t t = 0; t + 1 < m_; ++t)
      fwd[t] = slack_entry(v, t * m_ + r, (t + 1) * m_);
    for (std::size_t tau = 0; tau < m_; ++tau)
      bwd[tau] = slack_entry(v, tau * m_ + r, tau * m_);
    for (std::size_t t = 0; t < m_; ++t)
      if ((t + 1 < m_ && sgn(fwd[t]) == 0) || (t > 0 && sgn(bwd[t]) == 0))
        fail(ErrorCode::DivisorZero, "zero product factor for r = " + std::to_string(r));
    std::vector<Scalar> prefix(m_ + 1), suffix(m_ + 1);
    prefix[0] = 1;
    for (std::size_t t = 0; t < m_; ++t)
      prefix[t + 1] = t + 1 < m_ ? prefix[t] * fwd[t] : prefix[t];
    suffix[m_] = 1;
    for (std::size_t t = m_; t-- > 0;)
      suffix[t] = suffix[t + 1] * bwd[t];
    auto &c = coef_[r - 2];
    c.resize(m_);
    for (std::size_t s = 0; s < m_; ++s)
      c[s] = prefix[s] * suffix[s + 1];
    // Ratios by telescoping: C[s+1]/C[s] = fwd[s] / bwd[s+1].
    auto &al = alpha_[r - 2];
    al.resize(m_ * m_);
    for (std::size_t row = 0; row < m_; ++row) {
      al[row * m_ + row] = 1;
      for (std::size_t s = row; s + 1 < m_; ++s)
        al[row * m_ + s + 1] = al[row * m_ + s] * fwd[s] / bwd[s + 1];
      for (std::size_t s = row; s > 0; --s)
        al[row * m_ + s - 1] = al[row * m_ + s] * bwd[s] / fwd[s - 1];
    }
  }

  const VertexSequence *seq_;
  std::size_t m_;
  std::vector<std::vector<Scalar>> coef_;
  std::vector<std::vector<Scalar>> alpha_;
};

inline ReductionBundle reduce_rows(const VertexSequence &seq, std::size_t m, bool check = true) {
  ReductionBundle b(seq, m);
  if (check)
    b.check_reduced();
  return b;
}

/// The three functionals bounding the cone of block sigma and the cone's
/// extreme rays g_k (F_a(g_k) = 0 for a != k, F_k(g_k) > 0).
struct HomogeneousCone {
  std::array<Vec3, 3> functionals;
  std::array<Vec3, 3> generators;
  bool pointed = false;
};

inline HomogeneousCone block_cone(const VertexSequence &v, std::size_t p, std::size_t q) {
  HomogeneousCone c;
  c.functionals = {edge_form(v[p], v[q]), edge_form(v[q - 1], v[q]), edge_form(v[p], v[p + 1])};
  c.pointed = true;
  for (std::size_t k = 0; k < 3; ++k) {
    const Vec3 &fa = c.functionals[(k + 1) % 3];
    const Vec3 &fb = c.functionals[(k + 2) % 3];
    Vec3 g = cross3(fa, fb);
    const int s = sgn(dot3(c.functionals[k], g));
    if (s == 0)
      c.pointed = false;
    if (s < 0)
      for (auto &x : g)
        x = -x;
    c.generators[k] = std::move(g);
  }
  return c;
}

struct BlockResult {
  std::vector<RankOneTerm> terms;
  bool cone_route = false;
};

/// Factorization of the off-diagonal block reduced[P \ P_sigma | P_sigma]
/// with at most three terms (cone route) or one term per block column.
/// Terms are full n x n shaped.
inline BlockResult block_factor_rank8(const ReductionBundle &bundle, std::size_t sigma) {
  const VertexSequence &v = bundle.sequence();
  const std::size_t m = bundle.m(), n = bundle.n();
  const auto cols = bundle.block(sigma);
  std::vector<std::size_t> rows;
  for (auto i : bundle.p_indices())
    if (i / m != sigma)
      rows.push_back(i);
  const std::string label = "block " + std::to_string(sigma);
  BlockResult out;

  const std::size_t p = sigma * m + 2, q = sigma * m + m - 1;
  const HomogeneousCone cone = block_cone(v, p, q);
  if (cols.size() <= 3 || !cone.pointed) {
    for (auto j : cols) {
      RankOneTerm t{std::vector<Scalar>(n), unit_vector(n, j), label + "/col " + std::to_string(j)};
      for (auto i : rows)
        t.row_factor[i] = bundle.reduced_entry(i, j);
      out.terms.push_back(std::move(t));
    }
    return out;
  }
  out.cone_route = true;
  std::array<Scalar, 3> scale;
  for (std::size_t k = 0; k < 3; ++k)
    scale[k] = dot3(cone.functionals[k], cone.generators[k]);
  std::array<std::vector<Scalar>, 3> mu;
  for (auto &x : mu)
    x.assign(n, Scalar(0));
  std::vector<std::optional<std::string>> errors(rows.size());
  parallel_for(rows.size(), [&](std::size_t a) {
    const std::size_t i = rows[a];
    const std::size_t r = i % m;
    // z_i = hom(v_i) - ratio * hom(v_{sigma m + r}); reduced(i, j) = L_j(z_i).
    const Scalar &w = bundle.ratio(r, sigma, i / m);
    const Point &u = v[sigma * m + r];
    const Vec3 z{1 - w, v[i].x - w * u.x, v[i].y - w * u.y};
    Vec3 check{0, 0, 0};
    for (std::size_t k = 0; k < 3; ++k) {
      const Scalar val = dot3(cone.functionals[k], z) / scale[k];
      if (sgn(val) < 0) {
        errors[a] = "row " + std::to_string(i) + " lies outside the cone of block " + std::to_string(sigma);
        return;
      }
      for (std::size_t c = 0; c < 3; ++c)
        check[c] += val * cone.generators[k][c];
      mu[k][i] = val;
    }
    if (check != z)
      errors[a] = "cone decomposition of row " + std::to_string(i) + " is inexact";
  });
  for (const auto &e : errors)
    if (e)
      fail(e->find("inexact") != std::string::npos ? ErrorCode::DecompositionFailed
                                                    : ErrorCode::ConeMembershipFailed,
           *e);
  for (std::size_t k = 0; k < 3; ++k) {
    RankOneTerm t{std::move(mu[k]), std::vector<Scalar>(n), label + "/ray " + std::to_string(k)};
    for (auto j : cols) {
      Scalar c = dot3(edge_form(v[j], v[j + 1]), cone.generators[k]);
      if (sgn(c) < 0)
        fail(ErrorCode::ConeMembershipFailed, "extreme ray " + std::to_string(k) + " of block " +
                                                  std::to_string(sigma) + " is negative on column " +
                                                  std::to_string(j));
      t.col_factor[j] = std::move(c);
    }
    out.terms.push_back(std::move(t));
  }
  return out;
}

/// Exact entrywise check of block terms against reduced[P \ P_sigma | P_sigma].
inline bool verify_block(const ReductionBundle &bundle, std::size_t sigma, const std::vector<RankOneTerm> &terms) {
  const std::size_t m = bundle.m();
  const auto cols = bundle.block(sigma);
  std::vector<std::size_t> rows;
  for (auto i : bundle.p_indices())
    if (i / m != sigma)
      rows.push_back(i);
  for (const auto &t : terms)
    for (std::size_t i = 0; i < bundle.n(); ++i) {
      if (sgn(t.row_factor[i]) < 0 || sgn(t.col_factor[i]) < 0)
        return false;
      // support must stay inside the block
      if (sgn(t.row_factor[i]) != 0 && (!bundle.in_p(i) || i / m == sigma))
        return false;
      if (sgn(t.col_factor[i]) != 0 && (!bundle.in_p(i) || i / m != sigma))
        return false;
    }
  std::vector<char> ok(rows.size(), 1);
  parallel_for(rows.size(), [&](std::size_t a) {
    const std::size_t i = rows[a];
    Integer num, den;
    for (auto j : cols) {
      detail::RawFraction acc;
      for (const auto &t : terms)
        if (sgn(t.row_factor[i]) != 0 && sgn(t.col_factor[j]) != 0)
          acc.add_product(t.row_factor[i], t.col_factor[j]);
      bundle.reduced_raw(i, j, num, den);
      if (acc.num * den != num * acc.den) {
        ok[a] = 0;
        return;
      }
    }
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

struct BlockStats {
  std::size_t sigma = 0;
  std::size_t terms = 0;
  bool cone_route = false;
  bool verified = false;
};

struct SquareBuild {
  Factorization factorization;
  std::size_t m = 0;
  std::size_t reduction_terms = 0;
  std::size_t line_cover_terms = 0;
  std::vector<BlockStats> blocks;
  bool verified = false;
  double seconds = 0;
};

struct BuildOptions {
  /// Entrywise sign check of the reduced matrix before factoring blocks.
  bool check_reduced = true;
  /// Entrywise check of every block against the reduced matrix.
  bool verify_blocks = true;
  /// Final entrywise verification against the slack matrix.
  bool verify = true;
};

/// Square route for a proper m^2-gon: m-3 reduction terms, at most three
/// terms per block, and 6m line-cover terms (3m columns outside P, then 3m
/// rows outside P restricted to P). Total at most 10m-3 <= 15m-3.
inline SquareBuild factor_admissible_square(const VertexSequence &seq, const BuildOptions &opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = seq.size();
  std::size_t m = 0;
  while ((m + 1) * (m + 1) <= n)
    ++m;
  if (m * m != n)
    fail(ErrorCode::InvalidArgument, "square route needs n = m^2, got n = " + std::to_string(n));
  if (m <= 3)
    fail(ErrorCode::InvalidArgument, "square route needs m > 3, got m = " + std::to_string(m));
  const ReductionBundle bundle = reduce_rows(seq, m, opt.check_reduced);

  SquareBuild out;
  out.m = m;
  out.factorization = Factorization{n, n, {}};
  auto &f = out.factorization;
  for (std::size_t r = 2; r + 2 <= m; ++r) {
    f.add({bundle.a_vector(r), bundle.b_vector(r), "reduction " + std::to_string(r)});
    ++out.reduction_terms;
  }
  for (std::size_t s = 0; s < m; ++s) {
    BlockResult b = block_factor_rank8(bundle, s);
    BlockStats st{s, 0, b.cone_route, false};
    if (opt.verify_blocks) {
      st.verified = verify_block(bundle, s, b.terms);
      if (!st.verified)
        fail(ErrorCode::SubVerificationFailed, "block " + std::to_string(s) + " does not verify");
    }
    for (auto &t : b.terms) {
      const std::size_t before = f.inner_dim();
      f.add(std::move(t));
      st.terms += f.inner_dim() - before;
    }
    if (st.terms > 8)
      fail(ErrorCode::DecompositionFailed, "block " + std::to_string(s) + " uses more than eight terms");
    out.blocks.push_back(st);
  }
  const auto p = bundle.p_indices();
  for (std::size_t j = 0; j < n; ++j)
    if (!bundle.in_p(j)) {
      std::vector<Scalar> col(n);
      for (std::size_t i = 0; i < n; ++i)
        col[i] = slack_entry(seq, i, j);
      const std::size_t before = f.inner_dim();
      f.add({std::move(col), unit_vector(n, j), "cover col " + std::to_string(j)});
      out.line_cover_terms += f.inner_dim() - before;
    }
  for (std::size_t i = 0; i < n; ++i)
    if (!bundle.in_p(i)) {
      std::vector<Scalar> row(n);
      for (auto j : p)
        row[j] = slack_entry(seq, i, j);
      const std::size_t before = f.inner_dim();
      f.add({unit_vector(n, i), std::move(row), "cover row " + std::to_string(i)});
      out.line_cover_terms += f.inner_dim() - before;
    }
  if (f.inner_dim() > 15 * m - 3)
    fail(ErrorCode::DecompositionFailed, "square route exceeded 15m-3 terms");
  if (opt.verify) {
    const auto rep = verify_factorization(seq, f);
    out.verified = rep.passed;
    if (!rep.passed)
      fail(ErrorCode::SubVerificationFailed, "square-route factorization does not verify");
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Smallest integer k with k >= c * sqrt(n).
inline std::size_t ceil_c_sqrt(std::size_t c, std::size_t n) {
  const Integer target = Integer(static_cast<unsigned long>(c * c)) * static_cast<unsigned long>(n);
  Integer k;
  mpz_sqrt(k.get_mpz_t(), target.get_mpz_t());
  if (k * k < target)
    ++k;
  return k.get_ui();
}

struct ExtensionCertificate {
  std::string polygon_hash;
  std::size_t n = 0;
  std::string route;
  std::string bound_formula;
  std::size_t bound_value = 0;
  std::size_t inner_dim = 0;
  bool verdict = false;
  std::optional<Mismatch> first_mismatch;
  std::vector<std::string> notes;
  double seconds = 0;

  friend bool operator==(const ExtensionCertificate &a, const ExtensionCertificate &b) {
    const bool mm = a.first_mismatch.has_value() == b.first_mismatch.has_value() &&
                    (!a.first_mismatch || (a.first_mismatch->row == b.first_mismatch->row &&
                                           a.first_mismatch->col == b.first_mismatch->col &&
                                           a.first_mismatch->expected == b.first_mismatch->expected &&
                                           a.first_mismatch->actual == b.first_mismatch->actual));
    return mm && a.polygon_hash == b.polygon_hash && a.n == b.n && a.route == b.route &&
           a.bound_formula == b.bound_formula && a.bound_value == b.bound_value && a.inner_dim == b.inner_dim &&
           a.verdict == b.verdict && a.notes == b.notes && a.seconds == b.seconds;
  }
};

/// FNV-1a over the canonical "p/q" text of every coordinate.
inline std::string polygon_hash(const VertexSequence &seq) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string &s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto &p : seq) {
    feed(to_string(p.x));
    feed(to_string(p.y));
  }
  static const char *hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4)
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

inline std::vector<std::string> standard_notes() {
  return {"admissibility quadruples use distinct indices p!=q, r!=t and exclude column p = n",
          "union of chunks adds one constant term per chunk with at least three vertices"};
}

/// Verifies F against the slack matrix of seq and records the verdict.
inline ExtensionCertificate certify(const VertexSequence &seq, const Factorization &f, std::string route = "external",
                                    std::string bound_formula = "", std::size_t bound_value = 0) {
  const auto start = std::chrono::steady_clock::now();
  ExtensionCertificate c;
  c.polygon_hash = polygon_hash(seq);
  c.n = seq.size();
  c.route = std::move(route);
  c.bound_formula = std::move(bound_formula);
  c.bound_value = bound_value;
  c.inner_dim = f.inner_dim();
  c.notes = standard_notes();
  if (f.rows == seq.size() && f.cols == seq.size() && is_proper(seq)) {
    const auto rep = verify_factorization(seq, f);
    c.verdict = rep.passed;
    c.first_mismatch = rep.first_mismatch;
    if (rep.negative)
      c.notes.push_back("negative factor entry in term " + std::to_string(rep.negative->term));
  } else {
    c.notes.push_back("factorization shape does not match the polygon");
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

struct GeneralBuild {
  Factorization factorization;
  ExtensionCertificate certificate;
  std::optional<SquareBuild> square;
  std::vector<Chunk> chunks;
};

/// General n: the leading floor(sqrt n)^2 vertices take the square route as
/// a standalone polygon, the remaining vertices form one more chunk covered
/// by its trivial factorization, and the two are merged.
inline GeneralBuild factor_admissible(const VertexSequence &seq, const BuildOptions &opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  require_proper(seq);
  const std::size_t n = seq.size();
  std::size_t m = 0;
  while ((m + 1) * (m + 1) <= n)
    ++m;
  if (m <= 3)
    fail(ErrorCode::InvalidArgument, "general route needs n >= 16, got n = " + std::to_string(n));
  GeneralBuild out;
  const std::size_t sq = m * m;
  const VertexSequence head = seq.slice(0, sq);
  try {
    out.square = factor_admissible_square(head, opt);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::NegativeReducedEntry || e.code() == ErrorCode::ConeMembershipFailed ||
        e.code() == ErrorCode::DecompositionFailed)
      fail(ErrorCode::ChunkNotCertifiable, std::string("leading square chunk: ") + e.what());
    throw;
  }
  const std::size_t bound_general = (15 * m - 3) + (n - sq) + 2;
  const std::size_t limit = ceil_c_sqrt(17, n);
  if (sq == n) {
    out.factorization = out.square->factorization;
    out.chunks = {{0, n}};
    out.certificate = certify(seq, out.factorization, "square", "15m-3", 15 * m - 3);
  } else {
    out.chunks = {{0, sq}, {sq, n - sq}};
    std::vector<Factorization> parts(2);
    parts[0] = out.square->factorization;
    if (n - sq >= 3)
      parts[1] = trivial_factorization(slack_matrix(seq.slice(sq, n - sq)).entries);
    out.factorization = merge_union(seq, out.chunks, parts, false);
    out.certificate = certify(seq, out.factorization, "chunked", "(15m-3)+(n-m^2)+2", bound_general);
  }
  if (out.certificate.inner_dim > out.certificate.bound_value)
    fail(ErrorCode::DecompositionFailed, "achieved size exceeds the claimed bound");
  if (out.certificate.inner_dim >= limit)
    fail(ErrorCode::DecompositionFailed, "achieved size is not below 17 sqrt(n)");
  out.certificate.notes.push_back("17 sqrt(n) rounded up: " + std::to_string(limit));
  out.certificate.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct EscalatedBuild {
  VertexSequence polygon;
  AdmissibleProfile profile;
  std::size_t attempts = 0;
  GeneralBuild build;
};

/// Generates with each profile of the schedule in turn until the builder's
/// own checks accept the polygon.
inline EscalatedBuild generate_and_factor(std::size_t n, const std::vector<AdmissibleProfile> &schedule,
                                          const BuildOptions &opt = {}) {
  std::string last;
  std::size_t attempts = 0;
  for (const auto &prof : schedule) {
    ++attempts;
    try {
      VertexSequence poly = generate_admissible(n, prof);
      GeneralBuild b = factor_admissible(poly, opt);
      if (!b.certificate.verdict)
        continue;
      return EscalatedBuild{std::move(poly), prof, attempts, std::move(b)};
    } catch (const Error &e) {
      switch (e.code()) {
      case ErrorCode::ProfileTooAggressive:
      case ErrorCode::NegativeReducedEntry:
      case ErrorCode::ConeMembershipFailed:
      case ErrorCode::ChunkNotCertifiable:
        last = e.what();
        continue;
      default:
        throw;
      }
    }
  }
  fail(ErrorCode::NotFound, "every profile of the schedule failed; last error: " + last);
}

} // namespace polyxt
