#pragma once

// Min-cost bipartite matching over pluggable cost oracles.  One shortest-path
// Hungarian core serves both cost domains: exact big integers for squared
// metrics (results are equalities, not approximations) and long double for
// Euclidean metrics (the only place square roots are materialized; 64-bit
// mantissa on x86-64).  Left side may be smaller than the right, in which case
// the solver produces a min-cost injection directly; conceptually this is the
// padded square problem with zero-cost dummy rows, with the dummies skipped.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/vectors.hpp"

namespace ovemd {

enum class MatchKind { bijection, injection };

template <class Cost>
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (left id, right id), ascending left id
  Cost cost{};
  MatchKind kind = MatchKind::bijection;
};

inline long double to_ld(const Int& v) { return v.convert_to<long double>(); }
inline long double to_ld(int v) { return static_cast<long double>(v); }

// ---- cost oracles ----------------------------------------------------------
// An oracle exposes rows(), cols(), cost(i, j) and a cost_type.

template <class V>
struct EuclideanCosts {
  using cost_type = long double;
  const PointSetPair<V>* p;
  int rows() const { return static_cast<int>(p->left.size()); }
  int cols() const { return static_cast<int>(p->right.size()); }
  long double cost(int i, int j) const { return sqrtl(to_ld(sq_dist(p->left[i], p->right[j]))); }
};

template <class V>
struct SquaredEuclideanCosts {
  using cost_type = Int;
  const PointSetPair<V>* p;
  int rows() const { return static_cast<int>(p->left.size()); }
  int cols() const { return static_cast<int>(p->right.size()); }
  Int cost(int i, int j) const { return sq_dist(p->left[i], p->right[j]); }
};

struct ExplicitCosts {
  using cost_type = Int;
  std::vector<std::vector<Int>> m;
  int rows() const { return static_cast<int>(m.size()); }
  int cols() const { return m.empty() ? 0 : static_cast<int>(m[0].size()); }
  const Int& cost(int i, int j) const { return m[i][j]; }
};

// cost(i, j) = sum_r u[i][r] * v[j][r]
struct FactorizedCosts {
  using cost_type = Int;
  std::vector<std::vector<Int>> u, v;
  int rows() const { return static_cast<int>(u.size()); }
  int cols() const { return static_cast<int>(v.size()); }
  Int cost(int i, int j) const {
    Int s = 0;
    for (std::size_t r = 0; r < u[i].size(); ++r) s += u[i][r] * v[j][r];
    return s;
  }
};

// ---- Hungarian core --------------------------------------------------------

namespace detail {

template <class Cost>
Cost infinite_cost(const std::vector<Cost>& a, int n, int m) {
  if constexpr (std::is_same_v<Cost, long double>) {
    (void)a; (void)n; (void)m;
    return std::numeric_limits<long double>::infinity();
  } else {
    Cost maxabs = 0;
    for (const Cost& c : a) {
      if (c > maxabs) maxabs = c;
      if (-c > maxabs) maxabs = -c;
    }
    return (maxabs + 1) * 16 * (n + m + 2);  // above any sum of deltas in one search
  }
}

// Rows 1..n against columns 1..m, n <= m, dense row-major costs.  Ties in the
// shortest-path step resolve toward the smallest column index, so the result
// is a deterministic function of the matrix.
template <class Cost>
std::vector<int> hungarian(int n, int m, const std::vector<Cost>& a) {
  const Cost inf = infinite_cost(a, n, m);
  std::vector<Cost> u(n + 1, Cost(0)), v(m + 1, Cost(0));
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Cost> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      Cost delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        Cost cur = a[static_cast<std::size_t>(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
        if (minv[j] < delta) { delta = minv[j]; j1 = j; }
      }
      if (j1 < 0 || !(delta < inf)) throw internal_error("hungarian: no augmenting column");
      for (int j = 0; j <= m; ++j) {
        if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
        else if (minv[j] < inf) minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

template <class Cost>
Cost assignment_cost(int m, const std::vector<Cost>& a, const std::vector<int>& row_to_col) {
  Cost total(0);
  for (std::size_t i = 0; i < row_to_col.size(); ++i)
    total += a[i * m + row_to_col[i]];
  return total;
}

template <class Cost>
bool cost_equal(const Cost& x, const Cost& y) {
  if constexpr (std::is_same_v<Cost, long double>) {
    long double scale = std::max<long double>({1.0L, fabsl(x), fabsl(y)});
    return fabsl(x - y) <= 1e-9L * scale;
  } else {
    return x == y;
  }
}

// Min cost of assigning rows `rows` into the columns of `cols` (subproblem
// used by the canonicalization pass).
template <class Cost>
Cost sub_assignment_cost(int m, const std::vector<Cost>& a,
                         const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty()) return Cost(0);
  std::vector<Cost> sub(rows.size() * cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      sub[i * cols.size() + j] = a[static_cast<std::size_t>(rows[i]) * m + cols[j]];
  auto rc = hungarian(static_cast<int>(rows.size()), static_cast<int>(cols.size()), sub);
  return assignment_cost(static_cast<int>(cols.size()), sub, rc);
}

// Among all minimum-cost assignments, the lexicographically smallest pair
// sequence, found by forcing each row's column in turn and re-solving the
// remainder.  Cost O(n*m) extra solves, so it only runs when n*m is small;
// the caller falls back to the solver's deterministic output above the cap.
template <class Cost>
std::vector<int> lex_min_assignment(int n, int m, const std::vector<Cost>& a, const Cost& best) {
  std::vector<int> result(n, -1);
  std::vector<char> col_used(m, 0);
  Cost fixed_cost(0);
  std::vector<int> tail_rows;
  for (int i = 0; i < n; ++i) {
    tail_rows.clear();
    for (int r = i + 1; r < n; ++r) tail_rows.push_back(r);
    bool placed = false;
    for (int j = 0; j < m && !placed; ++j) {
      if (col_used[j]) continue;
      std::vector<int> tail_cols;
      for (int c = 0; c < m; ++c)
        if (!col_used[c] && c != j) tail_cols.push_back(c);
      Cost total = fixed_cost + a[static_cast<std::size_t>(i) * m + j] +
                   sub_assignment_cost(m, a, tail_rows, tail_cols);
      if (cost_equal(total, best)) {
        result[i] = j;
        col_used[j] = 1;
        fixed_cost += a[static_cast<std::size_t>(i) * m + j];
        placed = true;
      }
    }
    require(placed, "lex canonicalization lost the optimum");
  }
  return result;
}

constexpr int kLexCanonCap = 256;  // canonicalize when rows*cols <= this

}  // namespace detail

// ---- solver entry points ---------------------------------------------------

// Deterministic min-cost matching.  Bijections need |L| = |R|; injections need
// |L| <= |R| and leave the surplus right vertices unmatched.  When the cost
// matrix has at most detail::kLexCanonCap entries, ties between optimal
// matchings are broken toward the lexicographically smallest pair sequence
// (matching what brute_force_min_matching returns); larger instances return
// the solver's row-order optimum, which is still a pure function of the input.
template <class Oracle>
Matching<typename Oracle::cost_type> min_cost_matching(const Oracle& oracle, MatchKind kind) {
  using Cost = typename Oracle::cost_type;
  const int n = oracle.rows(), m = oracle.cols();
  if (kind == MatchKind::bijection && n != m)
    throw shape_error("bijection requires equal side sizes");
  if (n > m) throw shape_error("injection requires |left| <= |right|");

  std::vector<Cost> a(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a[static_cast<std::size_t>(i) * m + j] = oracle.cost(i, j);

  Matching<Cost> out;
  out.kind = kind;
  if (n == 0) return out;
  auto row_to_col = detail::hungarian(n, m, a);
  Cost best = detail::assignment_cost(m, a, row_to_col);
  if (static_cast<long long>(n) * m <= detail::kLexCanonCap)
    row_to_col = detail::lex_min_assignment(n, m, a, best);
  out.cost = detail::assignment_cost(m, a, row_to_col);
  for (int i = 0; i < n; ++i) out.pairs.emplace_back(i, row_to_col[i]);
  return out;
}

// Exhaustive reference solver; enumerates injections in lexicographic order,
// so ties resolve exactly as documented for min_cost_matching.
template <class Oracle>
Matching<typename Oracle::cost_type> brute_force_min_matching(const Oracle& oracle, MatchKind kind) {
  using Cost = typename Oracle::cost_type;
  const int n = oracle.rows(), m = oracle.cols();
  if (kind == MatchKind::bijection && n != m)
    throw shape_error("bijection requires equal side sizes");
  if (n > m) throw shape_error("injection requires |left| <= |right|");
  if (n > 9) throw capacity_error("brute_force_min_matching capped at 9 left points");
  double leaves = 1;
  for (int i = 0; i < n; ++i) leaves *= m - i;
  if (leaves > 2e7) throw capacity_error("brute_force_min_matching: too many injections");

  Matching<Cost> out;
  out.kind = kind;
  if (n == 0) return out;

  std::vector<int> current(n, -1), best_assign;
  std::vector<char> used(m, 0);
  Cost best{};
  bool have_best = false;
  auto rec = [&](auto&& self, int row, Cost acc) -> void {
    if (row == n) {
      if (!have_best || acc < best) {
        best = acc;
        best_assign = current;
        have_best = true;
      }
      return;
    }
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      current[row] = j;
      self(self, row + 1, acc + oracle.cost(row, j));
      used[j] = 0;
    }
  };
  rec(rec, 0, Cost(0));
  require(have_best, "brute force found no assignment");
  out.cost = best;
  for (int i = 0; i < n; ++i) out.pairs.emplace_back(i, best_assign[i]);
  return out;
}

template <class V>
Matching<long double> emd(const PointSetPair<V>& p) {
  return min_cost_matching(EuclideanCosts<V>{&p}, MatchKind::bijection);
}

template <class V>
Matching<long double> asymmetric_emd(const PointSetPair<V>& p) {
  return min_cost_matching(EuclideanCosts<V>{&p}, MatchKind::injection);
}

template <class V>
Matching<Int> sqemd(const PointSetPair<V>& p) {
  return min_cost_matching(SquaredEuclideanCosts<V>{&p}, MatchKind::bijection);
}

// ---- maximum-cardinality matching (Hopcroft–Karp) --------------------------

// adj[i] lists right neighbours of left i.  Returns only the matched pairs;
// cost is the matching size (unit edge costs).
inline Matching<Int> max_cardinality_matching(const std::vector<std::vector<int>>& adj, int n_right) {
  const int n = static_cast<int>(adj.size());
  constexpr int NIL = -1;
  std::vector<std::vector<int>> g(adj);
  for (auto& v : g) std::sort(v.begin(), v.end());
  std::vector<int> match_l(n, NIL), match_r(n_right, NIL), level(n);

  auto bfs = [&]() {
    std::queue<int> q;
    for (int i = 0; i < n; ++i) {
      if (match_l[i] == NIL) { level[i] = 0; q.push(i); }
      else level[i] = -1;
    }
    bool found = false;
    while (!q.empty()) {
      int i = q.front(); q.pop();
      for (int j : g[i]) {
        int next = match_r[j];
        if (next == NIL) found = true;
        else if (level[next] == -1) { level[next] = level[i] + 1; q.push(next); }
      }
    }
    return found;
  };
  auto dfs = [&](auto&& self, int i) -> bool {
    for (int j : g[i]) {
      int next = match_r[j];
      if (next == NIL || (level[next] == level[i] + 1 && self(self, next))) {
        match_l[i] = j;
        match_r[j] = i;
        return true;
      }
    }
    level[i] = -1;
    return false;
  };

  int size = 0;
  while (bfs())
    for (int i = 0; i < n; ++i)
      if (match_l[i] == NIL && dfs(dfs, i)) ++size;

  Matching<Int> out;
  out.kind = MatchKind::injection;
  out.cost = size;
  for (int i = 0; i < n; ++i)
    if (match_l[i] != NIL) out.pairs.emplace_back(i, match_l[i]);
  return out;
}

}  // namespace ovemd
