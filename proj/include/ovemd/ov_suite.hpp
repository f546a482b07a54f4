#pragma once

// Boolean-side problems and solvers: orthogonal-vector and hitting-set
// oracles, a sampling algorithm for Find-OV with additive error n/2, the
// phased reduction from hitting set to Find-OV, and the promise-Find-OV
// routes to both decision problems.
//
// Every threshold of the sampling algorithms is an exact integer comparison
// against a fractional power of n, so runs are reproducible bit for bit from
// the seed alone.

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/gadgets.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/rational.hpp"
#include "ovemd/rng.hpp"
#include "ovemd/vectors.hpp"

namespace ovemd {

// ---- oracles ---------------------------------------------------------------

// First orthogonal pair in row-major order, if any.
inline std::optional<std::pair<int, int>> ov_oracle(const BinaryPair& p) {
  check_pair_shape(p);
  for (std::size_t i = 0; i < p.left.size(); ++i)
    for (std::size_t j = 0; j < p.right.size(); ++j)
      if (dot(p.left[i], p.right[j]) == 0)
        return std::make_pair(static_cast<int>(i), static_cast<int>(j));
  return std::nullopt;
}

// Smallest left id orthogonal to nothing on the right (a "hitting vector").
inline std::optional<int> hs_oracle(const BinaryPair& p) {
  check_pair_shape(p);
  for (std::size_t i = 0; i < p.left.size(); ++i) {
    bool hit_all = true;
    for (const auto& b : p.right)
      if (dot(p.left[i], b) == 0) {
        hit_all = false;
        break;
      }
    if (hit_all) return static_cast<int>(i);
  }
  return std::nullopt;
}

struct FindOvResult {
  std::vector<int> found;    // ascending left ids with a certified witness
  std::vector<int> witness;  // parallel right ids, dot == 0 guaranteed
  long long missed_budget = 0;
};

// Exhaustive Find-OV: every left id with an orthogonal partner, no misses.
inline FindOvResult find_ov_oracle(const BinaryPair& p) {
  check_pair_shape(p);
  FindOvResult res;
  for (std::size_t i = 0; i < p.left.size(); ++i)
    for (std::size_t j = 0; j < p.right.size(); ++j)
      if (dot(p.left[i], p.right[j]) == 0) {
        res.found.push_back(static_cast<int>(i));
        res.witness.push_back(static_cast<int>(j));
        break;
      }
  return res;
}

struct MomOracleResult {
  int m_opt = 0;                                      // maximum number of orthogonal pairs
  std::vector<std::pair<int, int>> orthogonal_pairs;  // one optimal matching
  std::vector<std::pair<int, int>> injection;         // extended to cover every left id
};

// Exact maximum orthogonal matching over the bipartite orthogonality graph,
// extended to a full injection by assigning leftover lefts arbitrary unused
// rights in ascending order.
inline MomOracleResult mom_oracle(const BinaryPair& p) {
  check_pair_shape(p);
  if (p.left.size() > p.right.size()) throw shape_error("mom_oracle needs |left| <= |right|");
  std::vector<std::vector<int>> adj(p.left.size());
  for (std::size_t i = 0; i < p.left.size(); ++i)
    for (std::size_t j = 0; j < p.right.size(); ++j)
      if (dot(p.left[i], p.right[j]) == 0) adj[i].push_back(static_cast<int>(j));
  Matching<Int> max_match = max_cardinality_matching(adj, static_cast<int>(p.right.size()));

  MomOracleResult res;
  res.m_opt = max_match.cost.convert_to<int>();
  res.orthogonal_pairs = max_match.pairs;
  std::vector<char> right_used(p.right.size(), 0);
  std::vector<int> left_to(p.left.size(), -1);
  for (auto [l, r] : max_match.pairs) {
    right_used[r] = 1;
    left_to[l] = r;
  }
  int next_free = 0;
  for (std::size_t l = 0; l < p.left.size(); ++l) {
    if (left_to[l] < 0) {
      while (right_used[next_free]) ++next_free;
      left_to[l] = next_free;
      right_used[next_free] = 1;
    }
    res.injection.emplace_back(static_cast<int>(l), left_to[l]);
  }
  return res;
}

// Exact MOM solver for use where a MomSolver is expected.
inline MomSolver exact_mom_solver() {
  return [](const BinaryPair& p) { return mom_oracle(p).orthogonal_pairs; };
}

// ---- sampling Find-OV ------------------------------------------------------

struct FindOvConfig {
  Ratio alpha{1, 2};             // degree-split exponent, in (0, 1)
  std::uint64_t seed = 0;
  int brute_force_floor = 64;    // below this |right|, fall back to the oracle
};

// Three-stage Find-OV with additive error at most n/2 (n = |right|):
//   1. per-left sampling marks lefts whose estimated degree reaches n^(alpha/2),
//   2. per-right sampling finds high-degree rights (>= n^alpha) and scans them
//      exhaustively against the surviving lefts,
//   3. a maximum orthogonal matching against 2*ceil(n^alpha) copies of each
//      surviving right covers the lefts whose witnesses are all low-degree.
// Degree estimates scale hit counts by n over the sample size, matching the
// regime where both sides have n vectors; with a shrunken left pool this only
// overestimates, which adds exhaustive scans but never costs correctness.
inline FindOvResult find_ov_sampling(const BinaryPair& p, const FindOvConfig& cfg,
                                     const MomSolver& mom_solver) {
  check_pair_shape(p);
  if (p.left.size() > p.right.size())
    throw shape_error("find_ov_sampling needs |left| <= |right|");
  if (!cfg.alpha.positive() || cfg.alpha.num >= cfg.alpha.den)
    throw param_error("alpha must lie in (0, 1)");
  const int na = static_cast<int>(p.left.size());
  const int n = static_cast<int>(p.right.size());
  if (n <= cfg.brute_force_floor) return find_ov_oracle(p);

  const Ratio alpha = cfg.alpha;
  std::vector<int> found_witness(na, -1);
  std::vector<char> alive_a(na, 1), alive_b(n, 1);

  // stage 1: estimate each left's degree from ceil(n^(1-alpha/4)) samples
  {
    Rng rng(stage_seed(cfg.seed, 1));
    Int s1_big = ceil_scaled_pow(n, Ratio(4 * alpha.den - alpha.num, 4 * alpha.den));
    int s1 = s1_big > n ? n : static_cast<int>(s1_big);
    for (int a = 0; a < na; ++a) {
      auto sample = rng.sample_indices(n, s1);
      long long hits = 0;
      int first_hit = -1;
      for (int j : sample)
        if (dot(p.left[a], p.right[j]) == 0) {
          ++hits;
          if (first_hit < 0) first_hit = j;
        }
      if (hits > 0 && ratio_ge_pow(Int(hits) * n, Int(s1), n, Ratio(alpha.num, 2 * alpha.den))) {
        found_witness[a] = first_hit;
        alive_a[a] = 0;
      }
    }
  }

  // stage 2: estimate each right's degree into the surviving lefts from
  // ceil(n^(1-alpha/2)) samples; scan and retire rights at degree >= n^alpha
  {
    Rng rng(stage_seed(cfg.seed, 2));
    Int s2_big = ceil_scaled_pow(n, Ratio(2 * alpha.den - alpha.num, 2 * alpha.den));
    for (int b = 0; b < n; ++b) {
      std::vector<int> pool;
      for (int a = 0; a < na; ++a)
        if (alive_a[a]) pool.push_back(a);
      if (pool.empty()) break;
      int s2 = s2_big > static_cast<int>(pool.size()) ? static_cast<int>(pool.size())
                                                      : static_cast<int>(s2_big);
      auto sample = rng.sample_indices(static_cast<int>(pool.size()), s2);
      long long hits = 0;
      for (int idx : sample)
        if (dot(p.left[pool[idx]], p.right[b]) == 0) ++hits;
      if (hits > 0 && ratio_ge_pow(Int(hits) * n, Int(s2), n, alpha)) {
        for (int a : pool)
          if (dot(p.left[a], p.right[b]) == 0) {
            found_witness[a] = b;
            alive_a[a] = 0;
          }
        alive_b[b] = 0;
      }
    }
  }

  // stage 3: maximum orthogonal matching against duplicated surviving rights.
  // Vertices with no orthogonal partner in the surviving pools touch no edge
  // of the matching, so dropping them first leaves the optimum unchanged and
  // keeps the solver instance proportional to the orthogonality structure.
  {
    std::vector<int> cand_a, cand_b;
    for (int a = 0; a < na; ++a)
      if (alive_a[a]) cand_a.push_back(a);
    for (int b = 0; b < n; ++b)
      if (alive_b[b]) cand_b.push_back(b);
    std::vector<char> keep_a(cand_a.size(), 0), keep_b(cand_b.size(), 0);
    for (std::size_t i = 0; i < cand_a.size(); ++i)
      for (std::size_t j = 0; j < cand_b.size(); ++j)
        if (dot(p.left[cand_a[i]], p.right[cand_b[j]]) == 0) keep_a[i] = keep_b[j] = 1;
    std::vector<int> pool_a, pool_b;
    for (std::size_t i = 0; i < cand_a.size(); ++i)
      if (keep_a[i]) pool_a.push_back(cand_a[i]);
    for (std::size_t j = 0; j < cand_b.size(); ++j)
      if (keep_b[j]) pool_b.push_back(cand_b[j]);
    if (!pool_a.empty() && !pool_b.empty()) {
      Int copies_big = 2 * ceil_scaled_pow(n, alpha);
      // each right can serve at most |pool_a| lefts, so extra copies cannot
      // change the optimum
      int copies = copies_big > static_cast<int>(pool_a.size())
                       ? static_cast<int>(pool_a.size())
                       : static_cast<int>(copies_big);
      BinaryPair stage3;
      stage3.dim = p.dim;
      for (int a : pool_a) stage3.left.push_back(p.left[a]);
      std::vector<int> parent;
      for (int b : pool_b)
        for (int t = 0; t < copies; ++t) {
          stage3.right.push_back(p.right[b]);
          parent.push_back(b);
        }
      for (auto [l, r] : mom_solver(stage3)) {
        int a = pool_a.at(l), b = parent.at(r);
        require(dot(p.left[a], p.right[b]) == 0, "mom solver returned a non-orthogonal pair");
        if (found_witness[a] < 0) found_witness[a] = b;
      }
    }
  }

  FindOvResult res;
  res.missed_budget = n / 2;
  for (int a = 0; a < na; ++a)
    if (found_witness[a] >= 0) {
      res.found.push_back(a);
      res.witness.push_back(found_witness[a]);
    }
  return res;
}

// ---- phased hitting set ----------------------------------------------------

enum class HsVerdict { hitting_vector_exists, no_hitting_vector };

struct HsPhaseTrace {
  int phase = 0;
  int r_size = 0;      // survivors entering the phase
  int p_multi = 0;     // found ids on the duplicated instance
  int p_distinct = 0;  // distinct survivors found
  const char* verdict = "continue";
};

// A Find-OV solver as consumed by the phased driver: instance plus a
// per-phase seed.
using FindOvSolver =
    std::function<FindOvResult(const BinaryPair&, std::uint64_t phase_seed)>;

inline FindOvSolver oracle_findov_solver() {
  return [](const BinaryPair& p, std::uint64_t) { return find_ov_oracle(p); };
}

inline FindOvSolver sampling_findov_solver(Ratio alpha, int brute_force_floor,
                                           MomSolver mom_solver) {
  return [alpha, brute_force_floor, mom_solver](const BinaryPair& p, std::uint64_t phase_seed) {
    FindOvConfig cfg;
    cfg.alpha = alpha;
    cfg.seed = phase_seed;
    cfg.brute_force_floor = brute_force_floor;
    return find_ov_sampling(p, cfg, mom_solver);
  };
}

// Hitting set via ceil(log2 n) + 1 Find-OV rounds.  Phase i duplicates every
// survivor 2^(i-1) times, which shrinks the solver's additive error to
// n / 2^i distinct survivors; if more survive, a hitting vector must exist.
// Survivors after the last phase would exceed the bound, so reaching it means
// every left id was certified non-hitting.
inline std::pair<HsVerdict, std::vector<HsPhaseTrace>> hitting_set_phased(
    const BinaryPair& p, const FindOvSolver& solver, std::uint64_t seed) {
  check_pair_shape(p);
  if (p.left.size() != p.right.size()) throw shape_error("hitting set needs equal sides");
  const int n = static_cast<int>(p.left.size());
  if (n == 0) return {HsVerdict::no_hitting_vector, {}};
  int t = 1;
  while ((1 << (t - 1)) < n) ++t;  // t = ceil(log2 n) + 1

  std::vector<int> survivors(n);
  for (int i = 0; i < n; ++i) survivors[i] = i;
  std::vector<HsPhaseTrace> trace;

  for (int phase = 1; phase <= t; ++phase) {
    const long long dup = 1LL << (phase - 1);
    BinaryPair inst;
    inst.dim = p.dim;
    inst.right = p.right;
    for (int id : survivors)
      for (long long c = 0; c < dup; ++c) inst.left.push_back(p.left[id]);

    FindOvResult res = solver(inst, stage_seed(seed, static_cast<std::uint64_t>(phase)));
    std::vector<char> caught(survivors.size(), 0);
    for (int idx : res.found) caught[idx / dup] = 1;

    std::vector<int> next;
    for (std::size_t i = 0; i < survivors.size(); ++i)
      if (!caught[i]) next.push_back(survivors[i]);

    HsPhaseTrace row;
    row.phase = phase;
    row.r_size = static_cast<int>(survivors.size());
    row.p_multi = static_cast<int>(res.found.size());
    row.p_distinct = static_cast<int>(survivors.size() - next.size());
    if (static_cast<long long>(next.size()) * (1LL << phase) > n) {
      row.verdict = "hitting-vector-exists";
      trace.push_back(row);
      return {HsVerdict::hitting_vector_exists, trace};
    }
    survivors = std::move(next);
    if (phase == t) {
      require(survivors.empty(), "survivors after the final phase");
      row.verdict = "no-hitting-vector";
    }
    trace.push_back(row);
  }
  return {HsVerdict::no_hitting_vector, trace};
}

// ---- promise Find-OV and its consumers -------------------------------------

struct PromiseResult {
  std::vector<std::pair<int, int>> pairs;
  bool promise_met = false;  // k pairs were delivered
};

// Reference promise solver: row-major scan, stopping at k pairs.
inline PromiseResult find_ov_promise(const BinaryPair& p, long long k) {
  check_pair_shape(p);
  if (k < 1) throw param_error("k must be positive");
  PromiseResult res;
  for (std::size_t i = 0; i < p.left.size(); ++i)
    for (std::size_t j = 0; j < p.right.size(); ++j)
      if (dot(p.left[i], p.right[j]) == 0) {
        res.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        if (static_cast<long long>(res.pairs.size()) == k) {
          res.promise_met = true;
          return res;
        }
      }
  res.promise_met = static_cast<long long>(res.pairs.size()) == k;
  return res;
}

using PromiseSolver = std::function<PromiseResult(const BinaryPair&, long long k)>;

inline PromiseSolver scan_promise_solver() {
  return [](const BinaryPair& p, long long k) { return find_ov_promise(p, k); };
}

// OV through promise Find-OV: duplicate both sides ceil(2 n^(delta/(2-delta)))
// times, ask for k = ceil(N^delta) pairs on the N-point duplicate, project any
// returned pair.  One original orthogonal pair yields copies^2 >= 2k
// duplicated pairs, so the promise regime covers every instance.
inline std::optional<std::pair<int, int>> ov_via_promise_findov(const BinaryPair& p, Ratio delta,
                                                               const PromiseSolver& solver) {
  check_pair_shape(p);
  if (p.left.size() != p.right.size()) throw shape_error("ov needs equal sides");
  if (!delta.positive() || delta.num >= delta.den) throw param_error("delta must lie in (0, 1)");
  const int n = static_cast<int>(p.left.size());
  if (n == 0) return std::nullopt;
  Int copies_big = ceil_scaled_pow(n, Ratio(delta.num, 2 * delta.den - delta.num), 2);
  if (copies_big * n > 20000) throw capacity_error("ov_via_promise_findov: instance too large");
  const int copies = static_cast<int>(copies_big);

  BinaryPair dup;
  dup.dim = p.dim;
  for (const auto& a : p.left)
    for (int t = 0; t < copies; ++t) dup.left.push_back(a);
  for (const auto& b : p.right)
    for (int t = 0; t < copies; ++t) dup.right.push_back(b);

  Int k = ceil_scaled_pow(static_cast<long long>(n) * copies, delta);
  require(Int(copies) * copies >= 2 * k, "duplication too small for the promise regime");
  PromiseResult res = solver(dup, static_cast<long long>(k));
  if (res.pairs.empty()) return std::nullopt;
  int a = res.pairs.front().first / copies, b = res.pairs.front().second / copies;
  require(dot(p.left[a], p.right[b]) == 0, "projected pair not orthogonal");
  return std::make_pair(a, b);
}

// Hitting set through promise Find-OV with exponent alpha = epsilon / 7:
//   0. any all-zero right vector hits nothing, so no hitting vector exists;
//      all-zero lefts are marked immediately and replaced by all-ones
//   1. ceil(n^(1-alpha)) samples per left mark the high-degree lefts
//   2. split both sides into ceil(n^(1/3-alpha)) blocks and drain each block
//      pair through the promise solver with k = ceil(sqrt(n/k_blocks)),
//      replacing marked lefts by all-ones so they stop producing pairs
//   3. more than 2 n^(1-3*alpha/2) unmarked lefts only happens (w.h.p.) when
//      some left hits everything
//   4. exhaustively certify the few remaining lefts
inline HsVerdict hs_via_promise_findov(const BinaryPair& p, Ratio epsilon, std::uint64_t seed,
                                       const PromiseSolver& solver, int brute_force_floor = 64) {
  check_pair_shape(p);
  if (p.left.size() != p.right.size()) throw shape_error("hitting set needs equal sides");
  if (!epsilon.positive() || epsilon.num > epsilon.den)
    throw param_error("epsilon must lie in (0, 1]");
  const int n = static_cast<int>(p.left.size());
  if (n == 0) return HsVerdict::no_hitting_vector;
  if (n <= brute_force_floor)
    return hs_oracle(p) ? HsVerdict::hitting_vector_exists : HsVerdict::no_hitting_vector;
  const Ratio alpha(epsilon.num, 7 * epsilon.den);

  for (const auto& b : p.right)
    if (b.is_zero()) return HsVerdict::no_hitting_vector;

  BinaryVector ones(p.dim);
  for (int i = 0; i < p.dim; ++i) ones.set_bit(i);
  std::vector<BinaryVector> work = p.left;
  std::vector<char> marked(n, 0);
  auto mark = [&](int a) {
    if (!marked[a]) {
      marked[a] = 1;
      work[a] = ones;
    }
  };
  for (int a = 0; a < n; ++a)
    if (p.left[a].is_zero()) mark(a);

  // step 1: high-degree lefts fall to sampling
  {
    Rng rng(stage_seed(seed, 1));
    Int s_big = ceil_scaled_pow(n, Ratio(alpha.den - alpha.num, alpha.den));
    int s = s_big > n ? n : static_cast<int>(s_big);
    for (int a = 0; a < n; ++a) {
      if (marked[a]) continue;
      for (int j : rng.sample_indices(n, s))
        if (dot(p.left[a], p.right[j]) == 0) {
          mark(a);
          break;
        }
    }
  }

  // step 2: drain block pairs through the promise solver
  {
    Int kb_big = ceil_scaled_pow(n, Ratio(7 * alpha.den - 21 * alpha.num, 21 * alpha.den));
    int k_blocks = kb_big > n ? n : static_cast<int>(kb_big);
    long long k = 1;
    while (k * k * k_blocks < n) ++k;  // k = ceil(sqrt(n / k_blocks))
    auto block = [&](int t) {
      long long lo = static_cast<long long>(t) * n / k_blocks;
      long long hi = static_cast<long long>(t + 1) * n / k_blocks;
      return std::make_pair(static_cast<int>(lo), static_cast<int>(hi));
    };
    for (int bi = 0; bi < k_blocks; ++bi) {
      auto [alo, ahi] = block(bi);
      if (alo == ahi) continue;
      for (int bj = 0; bj < k_blocks; ++bj) {
        auto [blo, bhi] = block(bj);
        if (blo == bhi) continue;
        while (true) {
          BinaryPair sub;
          sub.dim = p.dim;
          sub.left.assign(work.begin() + alo, work.begin() + ahi);
          sub.right.assign(p.right.begin() + blo, p.right.begin() + bhi);
          PromiseResult res = solver(sub, k);
          for (auto [l, r] : res.pairs) {
            require(dot(sub.left[l], sub.right[r]) == 0,
                    "promise solver returned a non-orthogonal pair");
            mark(alo + l);
          }
          if (static_cast<long long>(res.pairs.size()) < k) break;
        }
      }
    }
  }

  // step 3: too many unmarked lefts certifies a hitting vector
  long long unmarked = std::count(marked.begin(), marked.end(), 0);
  if (unmarked > 0 &&
      int_gt_scaled_pow(Int(unmarked), n,
                        Ratio(2 * alpha.den - 3 * alpha.num, 2 * alpha.den), 2))
    return HsVerdict::hitting_vector_exists;

  // step 4: certify stragglers exhaustively
  for (int a = 0; a < n; ++a) {
    if (marked[a]) continue;
    for (const auto& b : p.right)
      if (dot(p.left[a], b) == 0) {
        mark(a);
        break;
      }
  }
  for (int a = 0; a < n; ++a)
    if (!marked[a]) return HsVerdict::hitting_vector_exists;
  return HsVerdict::no_hitting_vector;
}

}  // namespace ovemd
