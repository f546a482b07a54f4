#pragma once

// Writing an integer as a short sum of squares.  The adjuster coordinates of
// the exact reduction need, for each point, a handful of integers whose squares
// sum to a common target; the split below (greedy largest square, then a
// minimal decomposition of the small remainder) keeps the count bounded by a
// constant that depends only on the greedy cutoff.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/rational.hpp"

namespace ovemd {

// Exact minimal number of squares summing to m, by the classical
// classification: 1 iff m is a perfect square; 2 iff m - a^2 is a square for
// some a; 4 iff m = 4^a(8b+7) (three squares impossible); else 3.
inline int min_square_count(const Int& m_big) {
  if (m_big < 0) throw param_error("min_square_count: negative input");
  if (m_big > 10'000'000) throw capacity_error("min_square_count capped at 1e7");
  auto m = static_cast<std::int64_t>(m_big);
  if (m == 0) return 0;
  auto is_square = [](std::int64_t v) {
    auto r = static_cast<std::int64_t>(isqrt(Int(v)));
    return r * r == v;
  };
  if (is_square(m)) return 1;
  std::int64_t stripped = m;
  while (stripped % 4 == 0) stripped /= 4;
  if (stripped % 8 == 7) return 4;
  for (std::int64_t a = 1; a * a * 2 <= m; ++a)
    if (is_square(m - a * a)) return 2;
  return 3;
}

namespace detail {

// A minimal decomposition of small r, built by peeling off the largest square
// that keeps the remaining count on track.  Such a part always exists because
// some minimal representation contains a part of each tried size or smaller.
inline void append_minimal_squares(std::int64_t r, std::vector<Int>& out) {
  while (r > 0) {
    int k = min_square_count(r);
    auto a = static_cast<std::int64_t>(isqrt(Int(r)));
    for (; a >= 1; --a) {
      if (min_square_count(r - a * a) == k - 1) break;
    }
    require(a >= 1, "minimal square decomposition found no valid part");
    out.push_back(a);
    r -= a * a;
  }
}

}  // namespace detail

inline int ceil_log2_inverse(const Ratio& rho) {  // ceil(log2(1/rho))
  if (!rho.positive() || rho.num > rho.den) throw param_error("rho must lie in (0, 1]");
  int t = 0;
  while ((Int(1) << t) * rho.num < rho.den) ++t;
  return t;
}

// Upper bound on the number of parts decompose_squares can emit, any m < 2^256.
// Greedy from r leaves at most 2*sqrt(r), so log2 of the remainder follows
// y -> 1 + y/2; reaching the cutoff max(m^(rho/2), 16) takes at most
// min(3 + ceil(log2(1/rho)), 8) steps for 256-bit m, and the remainder then
// needs at most 4 squares.
inline int decompose_parts_bound(const Ratio& rho) {
  return 4 + std::min(8, 3 + ceil_log2_inverse(rho));
}

// Squares summing to m, descending, at most decompose_parts_bound(rho) parts.
inline std::vector<Int> decompose_squares(const Int& m, const Ratio& rho) {
  if (m < 0) throw param_error("decompose_squares: negative input");
  if (!rho.positive() || rho.num > rho.den) throw param_error("rho must lie in (0, 1]");
  Int cutoff = ceil_scaled_pow(m, Ratio(rho.num, 2 * rho.den));
  if (cutoff < 16) cutoff = 16;

  std::vector<Int> parts;
  Int r = m;
  while (r > cutoff) {
    Int s = isqrt(r);
    parts.push_back(s);
    r -= s * s;
  }
  if (r > 1'000'000) throw capacity_error("decompose_squares: remainder cutoff too large for exact tail");
  detail::append_minimal_squares(static_cast<std::int64_t>(r), parts);
  std::sort(parts.begin(), parts.end(), std::greater<Int>());

  require(static_cast<int>(parts.size()) <= decompose_parts_bound(rho),
          "decompose_squares exceeded its parts bound");
  Int check = 0;
  for (const Int& p : parts) check += p * p;
  require(check == m, "decompose_squares parts do not sum to m");
  return parts;
}

}  // namespace ovemd
