#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyxt/admissibility.hpp"
#include "polyxt/errors.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/interval.hpp"
#include "polyxt/rational.hpp"

namespace polyxt {

struct SumSubsequence {
  /// Strictly increasing cut positions i_0 < ... < i_t into r (0 = before
  /// r_1); block k sums r_{i_k + 1} .. r_{i_{k+1}} (1-based r).
  std::vector<std::size_t> cut_indices;
  std::vector<Scalar> block_sums;
  Direction direction = Direction::Neither;

  [[nodiscard]] std::size_t length() const noexcept { return block_sums.size(); }
};

namespace detail {

struct Cuts {
  std::vector<std::size_t> cuts;
  bool increasing = true;
  [[nodiscard]] std::size_t length() const { return cuts.empty() ? 0 : cuts.size() - 1; }
};

// h = 1 recursion on r[lo, hi) (0-based half-open, cut positions are
// absolute 0-based boundaries). Returns a non-decreasing sum-subsequence of
// length p or a non-increasing one of length q when the range is long
// enough, and otherwise the longest one it met.
inline Cuts halving(const std::vector<Scalar> &prefix, std::size_t lo, std::size_t hi, std::size_t p,
                    std::size_t q) {
  if (p <= 1)
    return {{lo, hi}, true};
  if (q <= 1)
    return {{lo, hi}, false};
  if (hi - lo < 2)
    return {{lo, hi}, true};
  const std::size_t mid = lo + (hi - lo) / 2;
  const Scalar first = prefix[mid] - prefix[lo];
  const Scalar second = prefix[hi] - prefix[mid];
  if (first >= second) {
    Cuts sub = halving(prefix, mid, hi, p, q - 1);
    if (sub.increasing) {
      if (sub.length() >= p)
        return sub;
      // best effort: the prepend below still yields a non-increasing run of length 2
      Cuts alt{{lo, mid, hi}, false};
      return sub.length() >= alt.length() ? sub : alt;
    }
    sub.cuts.front() = mid;
    sub.cuts.insert(sub.cuts.begin(), lo);
    return sub;
  }
  Cuts sub = halving(prefix, lo, mid, p - 1, q);
  if (!sub.increasing) {
    if (sub.length() >= q)
      return sub;
    Cuts alt{{lo, mid, hi}, true};
    return sub.length() >= alt.length() ? sub : alt;
  }
  sub.cuts.back() = mid;
  sub.cuts.push_back(hi);
  return sub;
}

inline std::size_t geometric_total(std::size_t h, std::size_t count) {
  std::size_t total = 0, pw = 1;
  for (std::size_t k = 0; k < count; ++k) {
    total += pw;
    pw *= h;
  }
  return total;
}

} // namespace detail

/// Sum-subsequence extraction. Runs the halving recursion for h = 1 on
/// targets P = sum_{k<p} H^k and Q = sum_{k<q} H^k (H = ceil(h)), then merges
/// consecutive blocks in groups of sizes H^0, H^1, ... (increasing) or
/// ..., H, 1 (decreasing). When r has at least 2^(P+Q-2) entries the result
/// has length p (increasing) or q (decreasing); otherwise the longest
/// result found is returned. The output is re-checked exactly.
inline SumSubsequence sum_subsequence(const std::vector<Scalar> &r, const Scalar &h, std::size_t p, std::size_t q) {
  if (r.empty())
    fail(ErrorCode::EmptyInput, "sum_subsequence on an empty sequence");
  if (h < 1 || p < 1 || q < 1)
    fail(ErrorCode::InvalidArgument, "sum_subsequence needs h >= 1 and p, q >= 1");
  for (const auto &x : r)
    if (sgn(x) <= 0)
      fail(ErrorCode::InvalidArgument, "sum_subsequence needs positive entries");
  Integer hc;
  mpz_cdiv_q(hc.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
  const std::size_t H = hc.get_ui();
  const std::size_t big_p = detail::geometric_total(H, p);
  const std::size_t big_q = detail::geometric_total(H, q);
  std::vector<Scalar> prefix(r.size() + 1);
  for (std::size_t k = 0; k < r.size(); ++k)
    prefix[k + 1] = prefix[k] + r[k];
  const detail::Cuts base = detail::halving(prefix, 0, r.size(), big_p, big_q);

  // Group consecutive blocks.
  std::vector<std::size_t> cuts{base.cuts.front()};
  const std::size_t blocks = base.length();
  if (base.increasing) {
    std::size_t pos = 0, size = 1;
    while (pos + size <= blocks) {
      pos += size;
      cuts.push_back(base.cuts[pos]);
      size *= H;
    }
  } else {
    // Largest count c with 1 + H + ... + H^(c-1) <= blocks; group sizes H^(c-1), ..., 1.
    std::size_t c = 0;
    while (detail::geometric_total(H, c + 1) <= blocks)
      ++c;
    std::size_t pos = 0, size = 1;
    for (std::size_t k = 1; k < c; ++k)
      size *= H;
    for (std::size_t k = 0; k < c; ++k) {
      pos += size;
      cuts.push_back(base.cuts[pos]);
      size = std::max<std::size_t>(1, size / H);
    }
  }
  SumSubsequence out;
  out.cut_indices = std::move(cuts);
  for (std::size_t k = 0; k + 1 < out.cut_indices.size(); ++k)
    out.block_sums.push_back(prefix[out.cut_indices[k + 1]] - prefix[out.cut_indices[k]]);
  if (out.block_sums.empty()) {
    out.cut_indices = {0, r.size()};
    out.block_sums = {prefix.back()};
  }
  out.direction = base.increasing ? Direction::Increasing : Direction::Decreasing;
  const Direction d = is_h_monotone(out.block_sums, h);
  if (out.block_sums.size() > 1 && d != out.direction) {
    // Only reachable in best-effort mode; fall back to one block.
    out.cut_indices = {out.cut_indices.front(), out.cut_indices[1]};
    out.block_sums.resize(1);
  }
  return out;
}

struct ExtractionParams {
  std::size_t target_n = 8;
  /// Thinness threshold for the window stage; 0 means 1 / target_n.
  Scalar theta = 0;
  /// Chords must satisfy d_i >= h_edge d_{i+1} (or the increasing analogue).
  Scalar h_edge = 2;
  /// Monotonicity ratio demanded of angle and edge-by-angle sequences.
  Scalar h_mono = 3;
  unsigned precision = kMinPrecision;
  unsigned max_precision = 4096;
  /// Maximum number of exact admissibility checks in the final stage.
  std::size_t budget = 4096;

  [[nodiscard]] Scalar effective_theta() const {
    return sgn(theta) > 0 ? theta : Scalar(1, static_cast<unsigned long>(std::max<std::size_t>(target_n, 1)));
  }
};

namespace detail {

inline std::vector<Interval> turn_intervals(const VertexSequence &seq, unsigned bits) {
  std::vector<Interval> out(seq.size());
  for (std::size_t k = 1; k + 1 < seq.size(); ++k)
    out[k] = turn_interval(seq, k, bits);
  return out;
}

inline Scalar midpoint(const Interval &x) { return (x.lo + x.hi) / 2; }

} // namespace detail

/// Leftmost window of `target_len` consecutive vertices whose interior turn
/// sum is certified <= theta.
inline std::vector<std::size_t> extract_thin(const VertexSequence &seq, const Scalar &theta, std::size_t target_len,
                                             unsigned precision = kMinPrecision,
                                             unsigned max_precision = kMaxPrecision) {
  const std::size_t n = seq.size();
  if (target_len > n || target_len == 0)
    fail(ErrorCode::NotFound, "window longer than the sequence");
  for (unsigned bits = precision;; bits *= 2) {
    const auto beta = detail::turn_intervals(seq, bits);
    std::vector<Scalar> lo(n + 1), hi(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
      lo[k + 1] = lo[k] + beta[k].lo;
      hi[k + 1] = hi[k] + beta[k].hi;
    }
    bool undecided = false;
    for (std::size_t s = 0; s + target_len <= n; ++s) {
      if (target_len < 3)
        return std::vector<std::size_t>{s, s + 1}.size() == target_len ? std::vector<std::size_t>{s, s + 1}
                                                                        : std::vector<std::size_t>{s};
      // interior vertices s+1 .. s+target_len-2
      const std::size_t a = s + 1, b = s + target_len - 1;
      if (hi[b] - hi[a] <= theta) {
        std::vector<std::size_t> idx(target_len);
        for (std::size_t k = 0; k < target_len; ++k)
          idx[k] = s + k;
        return idx;
      }
      if (lo[b] - lo[a] <= theta)
        undecided = true;
    }
    if (!undecided)
      fail(ErrorCode::NotFound, "no window of " + std::to_string(target_len) + " vertices is thin enough");
    if (bits * 2 > max_precision)
      fail(ErrorCode::Indeterminate, "thin window undecided at " + std::to_string(bits) + " bits");
  }
}

/// Longest window of consecutive vertices with certified turn sum <= theta
/// (leftmost among the longest).
inline std::vector<std::size_t> longest_thin_window(const VertexSequence &seq, const Scalar &theta, unsigned bits) {
  const std::size_t n = seq.size();
  const auto beta = detail::turn_intervals(seq, bits);
  std::size_t best_s = 0, best_len = std::min<std::size_t>(n, 2);
  Scalar sum = 0;
  // two pointers over interior turns of the window [s, e)
  std::size_t s = 0;
  for (std::size_t e = 2; e <= n; ++e) {
    sum += beta[e - 2].hi * (e - 2 > s ? 1 : 0);
    while (sum > theta && s + 2 < e) {
      sum -= beta[s + 1].hi;
      ++s;
    }
    if (sum <= theta && e - s > best_len) {
      best_len = e - s;
      best_s = s;
    }
  }
  std::vector<std::size_t> idx(best_len);
  for (std::size_t k = 0; k < best_len; ++k)
    idx[k] = best_s + k;
  return idx;
}

inline std::vector<Scalar> squared_chords(const VertexSequence &seq, const std::vector<std::size_t> &idx) {
  std::vector<Scalar> out;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k)
    out.push_back(squared_distance(seq[idx[k]], seq[idx[k + 1]]));
  return out;
}

/// Exact h-monotonicity of chord lengths (compared on squares with h^2).
inline Direction chord_direction(const VertexSequence &seq, const std::vector<std::size_t> &idx, const Scalar &h) {
  if (idx.size() < 2)
    return Direction::Increasing;
  return is_h_monotone(squared_chords(seq, idx), h * h);
}

namespace detail {

// Greedy h-decreasing chords anchored at the right end: each new vertex is
// the rightmost one whose chord to the current first vertex is at least h
// times the previous chord.
inline std::vector<std::size_t> greedy_decreasing(const VertexSequence &seq, const std::vector<std::size_t> &w,
                                                  const Scalar &h) {
  if (w.size() < 2)
    return w;
  const Scalar h2 = h * h;
  std::vector<std::size_t> picked{w.size() - 1, w.size() - 2};
  Scalar last = squared_distance(seq[w[w.size() - 2]], seq[w.back()]);
  std::size_t cur = w.size() - 2;
  while (cur > 0) {
    std::size_t j = cur;
    bool found = false;
    while (j-- > 0) {
      const Scalar c = squared_distance(seq[w[j]], seq[w[cur]]);
      if (c >= h2 * last) {
        picked.push_back(j);
        last = c;
        cur = j;
        found = true;
        break;
      }
    }
    if (!found)
      break;
  }
  std::reverse(picked.begin(), picked.end());
  std::vector<std::size_t> out;
  for (auto k : picked)
    out.push_back(w[k]);
  return out;
}

inline std::vector<std::size_t> greedy_increasing(const VertexSequence &seq, const std::vector<std::size_t> &w,
                                                  const Scalar &h) {
  if (w.size() < 2)
    return w;
  const Scalar h2 = h * h;
  std::vector<std::size_t> out{w[0], w[1]};
  Scalar last = squared_distance(seq[w[0]], seq[w[1]]);
  std::size_t cur = 1;
  while (cur + 1 < w.size()) {
    bool found = false;
    for (std::size_t j = cur + 1; j < w.size(); ++j) {
      const Scalar c = squared_distance(seq[w[cur]], seq[w[j]]);
      if (c >= h2 * last) {
        out.push_back(w[j]);
        last = c;
        cur = j;
        found = true;
        break;
      }
    }
    if (!found)
      break;
  }
  return out;
}

} // namespace detail

/// Thin window followed by an h_edge-monotone chord chain. Tries the
/// sum-subsequence of (midpoint) edge lengths first and greedy chains
/// otherwise; every candidate is re-checked exactly on squared chords.
/// Returns the longest certified chain when it reaches n_target.
inline std::vector<std::size_t> extract_edge_monotone(const VertexSequence &seq, std::size_t n_target,
                                                      const ExtractionParams &params) {
  require_proper(seq);
  if (n_target < 2)
    return {0};
  const auto window = longest_thin_window(seq, params.effective_theta(), params.precision);
  if (window.size() < n_target)
    fail(ErrorCode::NotFound, "longest thin window has " + std::to_string(window.size()) + " vertices");
  std::vector<std::vector<std::size_t>> candidates;
  {
    std::vector<Scalar> lengths;
    for (std::size_t k = 0; k + 1 < window.size(); ++k)
      lengths.push_back(detail::midpoint(sqrt_interval(squared_distance(seq[window[k]], seq[window[k + 1]]), 64)));
    // Block sums bound chords within a factor 2 on thin chains, so aim for 2 h_edge.
    const auto ss = sum_subsequence(lengths, 2 * params.h_edge, n_target - 1, n_target - 1);
    std::vector<std::size_t> idx;
    for (auto c : ss.cut_indices)
      idx.push_back(window[c]);
    candidates.push_back(std::move(idx));
  }
  candidates.push_back(detail::greedy_decreasing(seq, window, params.h_edge));
  candidates.push_back(detail::greedy_increasing(seq, window, params.h_edge));
  std::vector<std::size_t> best;
  for (auto &c : candidates)
    if (c.size() >= n_target && chord_direction(seq, c, params.h_edge) != Direction::Neither && c.size() > best.size())
      best = c;
  if (best.empty())
    fail(ErrorCode::NotFound, "no chord chain of " + std::to_string(n_target) + " vertices is " +
                                  to_string(params.h_edge) + "-monotone");
  return best;
}

enum class AngleMode { Angle, EdgeByAngle };

namespace detail {

inline std::vector<Interval> mode_values(const VertexSequence &seq, AngleMode mode, unsigned bits) {
  std::vector<Interval> xs;
  for (std::size_t k = 1; k + 1 < seq.size(); ++k)
    xs.push_back(mode == AngleMode::Angle ? turn_interval(seq, k, bits) : edge_by_angle_interval(seq, k, bits));
  return xs;
}

// Certified h-monotonicity of the mode sequence of seq in either direction.
inline bool certified_mode_monotone(const VertexSequence &seq, AngleMode mode, const Scalar &h, unsigned start,
                                    unsigned cap) {
  if (seq.size() < 4)
    return true;
  auto make = [&](unsigned bits) { return mode_values(seq, mode, bits); };
  for (unsigned bits = start; bits <= cap; bits *= 2) {
    const Certainty inc = certify_monotone_once(make, h, true, bits);
    const Certainty dec = certify_monotone_once(make, h, false, bits);
    if (inc == Certainty::True || dec == Certainty::True)
      return true;
    if (inc == Certainty::False && dec == Certainty::False)
      return false;
  }
  return false;
}

} // namespace detail

/// Subsequence whose angle (or edge-by-angle) sequence is certified
/// h_mono-monotone. Requires a certified thin input with h_edge-monotone
/// edges.
inline std::vector<std::size_t> extract_angle_monotone(const VertexSequence &seq, std::size_t n_target, AngleMode mode,
                                                       const ExtractionParams &params) {
  require_proper(seq);
  const Scalar theta = params.effective_theta();
  bool thin = false;
  try {
    thin = is_thin(seq, theta, params.precision, params.max_precision);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::Indeterminate)
      throw;
  }
  std::vector<std::size_t> all(seq.size());
  for (std::size_t k = 0; k < all.size(); ++k)
    all[k] = k;
  if (!thin || chord_direction(seq, all, params.h_edge) == Direction::Neither)
    fail(ErrorCode::HypothesesNotCertified, "input is not certified thin with monotone edges");
  if (n_target > seq.size())
    fail(ErrorCode::NotFound, "sequence shorter than the target");
  // A contiguous run of an h-monotone sequence stays h-monotone.
  if (detail::certified_mode_monotone(seq, mode, params.h_mono, params.precision, params.max_precision)) {
    all.resize(n_target);
    return all;
  }
  if (seq.size() < 3)
    fail(ErrorCode::NotFound, "too few vertices");
  const auto xs = detail::mode_values(seq, mode, params.precision);
  std::vector<Scalar> r;
  for (const auto &x : xs)
    r.push_back(detail::midpoint(x));
  for (auto &x : r)
    if (sgn(x) <= 0)
      fail(ErrorCode::NotFound, "zero turn in the sequence");
  const auto ss = sum_subsequence(r, 2 * params.h_mono, n_target - 1, n_target - 1);
  std::vector<std::size_t> idx;
  for (auto c : ss.cut_indices)
    idx.push_back(mode == AngleMode::Angle ? c : c + 1);
  if (idx.size() < n_target)
    fail(ErrorCode::NotFound, "sum-subsequence reached only " + std::to_string(idx.size()) + " vertices");
  idx.resize(n_target);
  if (!detail::certified_mode_monotone(seq.subsequence(idx), mode, params.h_mono, params.precision,
                                       params.max_precision))
    fail(ErrorCode::NotFound, "extracted subsequence is not certified monotone");
  return idx;
}

struct StageReport {
  std::string stage;
  std::string outcome;
  std::size_t length = 0;
};

struct ExtractionResult {
  std::vector<std::size_t> indices;
  VertexSequence subsequence;
  std::vector<StageReport> stage_reports;
  bool verified = false;
  AdmissibilityReport admissibility;
};

/// Pipeline: longest thin window, monotone chords, angle stage,
/// edge-by-angle stage, then windows of target_n vertices of the survivor
/// are checked exactly for admissibility until one passes or the budget runs
/// out. Stages that cannot reach target_n leave the sequence unchanged and
/// say so in their report.
inline ExtractionResult extract_admissible(const VertexSequence &seq, const ExtractionParams &params) {
  require_proper(seq);
  const std::size_t target = params.target_n;
  if (target < 3)
    fail(ErrorCode::InvalidArgument, "target_n must be at least 3");
  if (seq.size() < target)
    fail(ErrorCode::NotFound, "sequence has fewer than target_n vertices");
  ExtractionResult out;
  std::vector<std::size_t> cur(seq.size());
  for (std::size_t k = 0; k < cur.size(); ++k)
    cur[k] = k;
  if (target == 3) {
    cur.resize(3);
    out.indices = cur;
    out.subsequence = seq.subsequence(cur);
    out.admissibility = is_admissible_exact(out.subsequence);
    out.verified = out.admissibility.admissible;
    out.stage_reports.push_back({"trivial", "three vertices are vacuously admissible", 3});
    return out;
  }
  auto compose = [&](const std::vector<std::size_t> &inner) {
    std::vector<std::size_t> r;
    for (auto k : inner)
      r.push_back(cur[k]);
    return r;
  };
  auto stage = [&](const std::string &name, auto &&run) {
    try {
      const VertexSequence sub = seq.subsequence(cur);
      auto inner = run(sub);
      if (inner.size() >= target) {
        cur = compose(inner);
        out.stage_reports.push_back({name, "ok", cur.size()});
      } else {
        out.stage_reports.push_back({name, "short result kept previous", cur.size()});
      }
    } catch (const Error &e) {
      out.stage_reports.push_back({name, std::string("skipped: ") + e.what(), cur.size()});
    }
  };
  stage("thin", [&](const VertexSequence &s) {
    return longest_thin_window(s, params.effective_theta(), params.precision);
  });
  stage("edges", [&](const VertexSequence &s) { return extract_edge_monotone(s, target, params); });
  stage("angles", [&](const VertexSequence &s) {
    return extract_angle_monotone(s, target, AngleMode::Angle, params);
  });
  stage("edge_by_angle", [&](const VertexSequence &s) {
    return extract_angle_monotone(s, target, AngleMode::EdgeByAngle, params);
  });
  std::size_t tried = 0;
  for (std::size_t s = 0; s + target <= cur.size() && tried < params.budget; ++s, ++tried) {
    std::vector<std::size_t> idx(cur.begin() + static_cast<std::ptrdiff_t>(s),
                                 cur.begin() + static_cast<std::ptrdiff_t>(s + target));
    VertexSequence sub = seq.subsequence(idx);
    if (!is_proper(sub))
      continue;
    auto rep = is_admissible_exact(sub, std::max(kDefaultExhaustiveCap, target));
    if (rep.admissible) {
      out.indices = std::move(idx);
      out.subsequence = std::move(sub);
      out.admissibility = std::move(rep);
      out.verified = true;
      out.stage_reports.push_back({"verify", "window " + std::to_string(s) + " admissible", target});
      return out;
    }
  }
  out.stage_reports.push_back({"verify", "no admissible window after " + std::to_string(tried) + " checks", target});
  fail(ErrorCode::NotFound, "extraction found no admissible subsequence; last stage: verify");
}

} // namespace polyxt
