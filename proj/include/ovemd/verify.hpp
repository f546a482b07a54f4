#pragma once

// Self-verification harness: each named check draws seeded random instances,
// runs a reduction or solver, and compares against an independent reference
// (brute force, exhaustive oracle, or an algebraic identity).  The CLI's
// verify command and the acceptance runner share this registry, so they can
// never drift apart.

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ovemd/exact_reduction.hpp"
#include "ovemd/gadgets.hpp"
#include "ovemd/generate.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/ov_suite.hpp"
#include "ovemd/pipeline.hpp"
#include "ovemd/square_decomp.hpp"

namespace ovemd {

struct VerificationReport {
  std::string check;
  int instances = 0;
  int failures = 0;
  long double max_deviation = 0;  // check-specific: relative error, count gap, ...
  long long runtime_ms = 0;
  std::vector<std::uint64_t> failing_seeds;  // at most 10 retained
  std::string note;
};

using CheckFn = std::function<VerificationReport(int trials, std::uint64_t seed)>;

struct CheckEntry {
  std::string name;
  std::string summary;
  int default_trials = 0;
  CheckFn run;
};

namespace detail {

inline void record_failure(VerificationReport& rep, std::uint64_t seed) {
  ++rep.failures;
  if (rep.failing_seeds.size() < 10) rep.failing_seeds.push_back(seed);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

inline IntPair random_reduction_input(Rng& rng, int n, int d) {
  IntPair p;
  p.dim = d;
  auto point = [&] {
    std::vector<Int> coords(d);
    for (auto& x : coords) x = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
    return IntVector(std::move(coords));
  };
  for (int i = 0; i < n; ++i) p.left.push_back(point());
  for (int i = 0; i < n; ++i) p.right.push_back(point());
  return p;
}

inline Int min_cross_sq(const IntPair& p) {
  Int best = sq_dist(p.left[0], p.right[0]);
  for (const auto& a : p.left)
    for (const auto& b : p.right) best = std::min(best, sq_dist(a, b));
  return best;
}

inline BinaryPair random_binary(Rng& rng, int na, int nb, int d, Ratio density = {1, 2}) {
  BinaryPair p;
  p.dim = d;
  for (int i = 0; i < na; ++i) p.left.push_back(random_bits(rng, d, density));
  for (int i = 0; i < nb; ++i) p.right.push_back(random_bits(rng, d, density));
  return p;
}

}  // namespace detail

// ---- individual checks -----------------------------------------------------

// Round trip: closest-pair distance recovered from the Euclidean matching of
// the reduced instance matches brute force, and the optimal matching uses
// exactly one original-original edge, which attains the minimum.
inline VerificationReport check_exact_reduction_identity(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "exact-reduction-identity";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    int n = rng.range(2, 10), d = rng.range(1, 3);
    IntPair input = detail::random_reduction_input(rng, n, d);
    ++rep.instances;
    bool ok = true;
    try {
      ReducedExactInstance inst = build_exact_reduction(input, Ratio(1, 1));
      Matching<long double> m = emd(inst.pair);
      long double recovered = recover_closest_pair(m.cost, inst);
      Int min_sq = detail::min_cross_sq(input);
      long double expected = 2.0L * sqrtl(to_ld(min_sq));  // lifted distance
      long double dev = fabsl(recovered - expected) / std::max<long double>(1.0L, expected);
      rep.max_deviation = std::max(rep.max_deviation, dev);
      if (dev > 1e-6L) ok = false;
      if (count_original_pairs(m, n) != 1) ok = false;
      for (auto [l, r] : m.pairs)
        if (l < n && r < n && sq_dist(input.left[l], input.right[r]) != min_sq) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Squared-cost route: the assignment on the reduced instance, its low-rank
// factorization, and brute force all agree exactly, and the factorization
// reproduces the squared-distance matrix at the stated rank.
inline VerificationReport check_sqemd_lowrank(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "sqemd-lowrank";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    int n = rng.range(2, 10), d = rng.range(1, 3);
    IntPair input = detail::random_reduction_input(rng, n, d);
    ++rep.instances;
    bool ok = true;
    try {
      auto [fact, inst] = build_lowrank_assignment(input, Ratio(1, 1));
      Matching<Int> direct = sqemd(inst.pair);
      Matching<Int> viarank =
          min_cost_matching(FactorizedCosts{fact.u, fact.v}, MatchKind::bijection);
      if (direct.cost != viarank.cost) ok = false;
      if (recover_closest_pair_sq(direct.cost, inst) != 4 * detail::min_cross_sq(input))
        ok = false;
      const int side = static_cast<int>(inst.pair.left.size());
      FactorizedCosts fc{fact.u, fact.v};
      for (int i = 0; i < side && ok; ++i)
        for (int j = 0; j < side; ++j)
          if (fc.cost(i, j) != sq_dist(inst.pair.left[i], inst.pair.right[j])) {
            ok = false;
            break;
          }
      if (fact.rank != inst.pair.dim + 2 || fact.rank > 2 * inst.d + 2 * inst.c + 4) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Every m in [1, trials] splits into at most 9 squares at rho = 1/16, sums
// verified exactly; max_deviation reports the largest part count seen.
inline VerificationReport check_square_decomposition(int trials, std::uint64_t) {
  VerificationReport rep;
  rep.check = "square-decomposition";
  detail::Timer timer;
  const Ratio rho(1, 16);
  for (long long m = 1; m <= trials; ++m) {
    ++rep.instances;
    bool ok = true;
    try {
      std::vector<Int> parts = decompose_squares(Int(m), rho);
      Int sum = 0;
      for (const Int& p : parts) sum += p * p;
      if (sum != m) ok = false;
      rep.max_deviation = std::max(rep.max_deviation, static_cast<long double>(parts.size()));
      if (parts.size() > 9) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, static_cast<std::uint64_t>(m));
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Pointwise identities of the Boolean embeddings: product negation, the
// symmetrizing embedding, and the MOM gadget's norms and distance spectrum.
inline VerificationReport check_embedding_identities(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "embedding-identities";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    int d = rng.range(1, 64);
    BinaryVector a = detail::random_bits(rng, d, Ratio(1, 2));
    BinaryVector b = detail::random_bits(rng, d, Ratio(1, 2));
    ++rep.instances;
    bool ok = true;
    try {
      int ip = dot(a, b);
      if (dot(negate_product(a, Side::left), negate_product(b, Side::right)) != d - ip) ok = false;

      BinaryPair p;
      p.dim = d;
      p.left.push_back(a);
      p.right.push_back(b);
      SymmetrizedInstance s = symmetrize(p);
      if (s.pair.left[0].weight() != d || s.pair.right[0].weight() != d) ok = false;
      if (sq_dist(s.pair.left[0], s.pair.right[0]) != 2 * sq_dist(a, b)) ok = false;

      MomGadget g = build_mom_gadget(p);
      const auto& ga = g.pair.left[0];
      const auto& gb = g.pair.right[0];
      if (ga.weight() != 3 * d + 1 || gb.weight() != 3 * d + 1 || g.v.weight() != 3 * d + 1)
        ok = false;
      if (dot(ga, gb) != d - ip) ok = false;
      if (sq_dist(ga, gb) != 4 * d + 2 + 2 * ip) ok = false;
      if (sq_dist(ga, g.v) != 4 * d + 4) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Geometric MOM: decoding the min-cost injection on the gadget yields exactly
// the maximum number of orthogonal pairs on every desk-size instance.
inline VerificationReport check_mom_exact_emd(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "mom-exact-emd";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    int na = rng.range(1, 8);
    int nb = rng.range(na, 8);
    int d = rng.range(1, 6);
    BinaryPair p = detail::random_binary(rng, na, nb, d, Ratio(1, rng.range(2, 3)));
    ++rep.instances;
    bool ok = true;
    try {
      MomGadget g = build_mom_gadget(p);
      MomDecode dec = decode_mom(g, asymmetric_emd(g.pair));
      int opt = mom_oracle(p).m_opt;
      rep.max_deviation =
          std::max(rep.max_deviation, fabsl(static_cast<long double>(dec.orthogonal_count - opt)));
      if (dec.orthogonal_count != opt) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Sampling Find-OV on planted instances: sound on every run, within the
// additive budget on every run, and recovers the planted set exactly in at
// least 95% of runs.
inline VerificationReport check_findov_sampling(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "findov-sampling";
  detail::Timer timer;
  const int n = 256, d = 32, planted = 16;
  int exact = 0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    GeneratorSpec spec;
    spec.family = "planted-orthogonal";
    spec.n = n;
    spec.d = d;
    spec.planted_count = planted;
    spec.seed = stage_seed(ts, 0);
    BinaryPair p = std::get<BinaryPair>(generate(spec));
    ++rep.instances;
    bool ok = true;
    try {
      FindOvConfig cfg;
      cfg.alpha = Ratio(1, 2);
      cfg.seed = stage_seed(ts, 1);
      FindOvResult res = find_ov_sampling(p, cfg, exact_mom_solver());
      bool sound = true;
      for (std::size_t i = 0; i < res.found.size(); ++i) {
        if (res.found[i] >= planted) sound = false;
        if (dot(p.left[res.found[i]], p.right[res.witness[i]]) != 0) sound = false;
      }
      if (!sound) ok = false;
      long double missing = static_cast<long double>(planted) - res.found.size();
      rep.max_deviation = std::max(rep.max_deviation, missing);
      if (static_cast<long long>(res.found.size()) < planted - res.missed_budget) ok = false;
      if (static_cast<int>(res.found.size()) == planted) ++exact;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.note = "planted set recovered exactly in " + std::to_string(exact) + "/" +
             std::to_string(trials) + " runs";
  if (100LL * exact < 95LL * trials) ++rep.failures;
  rep.runtime_ms = timer.ms();
  return rep;
}

namespace detail {

inline BinaryPair mixed_hs_instance(Rng& rng, std::uint64_t ts, int t, int max_n, int d) {
  GeneratorSpec spec;
  spec.n = rng.range(2, max_n);
  spec.d = d;
  spec.seed = stage_seed(ts, 0);
  switch (t % 3) {
    case 0: spec.family = "uniform-binary"; break;
    case 1: spec.family = "planted-hitting"; break;
    default: spec.family = "complement-matched"; break;
  }
  return std::get<BinaryPair>(generate(spec));
}

}  // namespace detail

// Phased hitting set against the exhaustive oracle on mixed instance families,
// with the phase count bounded by ceil(log2 n) + 1.
inline VerificationReport check_phased_hitting_set(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "phased-hitting-set";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    BinaryPair p = detail::mixed_hs_instance(rng, ts, t, 256, rng.range(8, 32));
    ++rep.instances;
    bool ok = true;
    try {
      auto [verdict, trace] = hitting_set_phased(p, oracle_findov_solver(), stage_seed(ts, 1));
      bool expected = hs_oracle(p).has_value();
      if ((verdict == HsVerdict::hitting_vector_exists) != expected) ok = false;
      int n = static_cast<int>(p.left.size());
      int t_max = 1;
      while ((1 << (t_max - 1)) < n) ++t_max;
      if (static_cast<int>(trace.size()) > t_max) ok = false;
      if (verdict == HsVerdict::no_hitting_vector) {
        long long covered = 0;
        for (const auto& row : trace) covered += row.p_distinct;
        if (covered != n) ok = false;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Both promise-Find-OV consumers against their oracles: orthogonal-pair
// presence on even trials, hitting-set verdicts on odd trials.
inline VerificationReport check_promise_findov_routes(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "promise-findov-routes";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    ++rep.instances;
    bool ok = true;
    try {
      if (t % 2 == 0) {
        GeneratorSpec spec;
        spec.n = rng.range(2, 128);
        spec.d = rng.range(4, 24);
        spec.seed = stage_seed(ts, 0);
        if (t % 4 == 0) {
          spec.family = "planted-orthogonal";
          spec.planted_count = rng.range(0, std::min(3, spec.n));
        } else {
          spec.family = "uniform-binary";
        }
        BinaryPair p = std::get<BinaryPair>(generate(spec));
        auto got = ov_via_promise_findov(p, Ratio(1, 2), scan_promise_solver());
        if (got.has_value() != ov_oracle(p).has_value()) ok = false;
      } else {
        BinaryPair p = detail::mixed_hs_instance(rng, ts, t / 2, 256, rng.range(8, 16));
        HsVerdict got = hs_via_promise_findov(p, Ratio(7, 10), stage_seed(ts, 1),
                                              scan_promise_solver());
        bool expected = hs_oracle(p).has_value();
        if ((got == HsVerdict::hitting_vector_exists) != expected) ok = false;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// End-to-end chain (hitting set -> Find-OV -> MOM -> Euclidean matching)
// against the exhaustive hitting-set oracle.
inline VerificationReport check_pipeline(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "pipeline";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    BinaryPair p = detail::mixed_hs_instance(rng, ts, t, 64, 16);
    ++rep.instances;
    bool ok = true;
    try {
      PipelineResult res = pipeline_hs_via_emd(p, stage_seed(ts, 1));
      bool expected = hs_oracle(p).has_value();
      if ((res.verdict == HsVerdict::hitting_vector_exists) != expected) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// Production matching solver against the exhaustive one: exact cost and pair
// agreement for integer costs, cost agreement within 1e-9 for Euclidean costs
// (float near-ties make pair identity meaningless there).
inline VerificationReport check_solver_oracle_equivalence(int trials, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "solver-oracle-equivalence";
  detail::Timer timer;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t ts = stage_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    int na = rng.range(1, 7), nb = rng.range(na, 9), d = rng.range(1, 4);
    IntPair p;
    p.dim = d;
    auto point = [&] {
      std::vector<Int> coords(d);
      for (auto& x : coords) x = static_cast<std::int64_t>(rng.below(21));
      return IntVector(std::move(coords));
    };
    for (int i = 0; i < na; ++i) p.left.push_back(point());
    for (int i = 0; i < nb; ++i) p.right.push_back(point());
    ++rep.instances;
    bool ok = true;
    try {
      SquaredEuclideanCosts<IntVector> sq{&p};
      Matching<Int> fast = min_cost_matching(sq, MatchKind::injection);
      Matching<Int> slow = brute_force_min_matching(sq, MatchKind::injection);
      if (fast.cost != slow.cost || fast.pairs != slow.pairs) ok = false;

      EuclideanCosts<IntVector> eu{&p};
      Matching<long double> f2 = min_cost_matching(eu, MatchKind::injection);
      Matching<long double> s2 = brute_force_min_matching(eu, MatchKind::injection);
      long double dev = fabsl(f2.cost - s2.cost) / std::max<long double>(1.0L, s2.cost);
      rep.max_deviation = std::max(rep.max_deviation, dev);
      if (dev > 1e-9L) ok = false;

      if (na == nb) {
        Matching<Int> fb = min_cost_matching(sq, MatchKind::bijection);
        Matching<Int> sb = brute_force_min_matching(sq, MatchKind::bijection);
        if (fb.cost != sb.cost || fb.pairs != sb.pairs) ok = false;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) detail::record_failure(rep, ts);
  }
  rep.runtime_ms = timer.ms();
  return rep;
}

// ---- registry --------------------------------------------------------------

inline const std::vector<CheckEntry>& verification_checks() {
  static const std::vector<CheckEntry> entries = {
      {"exact-reduction-identity", "closest pair round trip through Euclidean matching", 100,
       check_exact_reduction_identity},
      {"sqemd-lowrank", "squared-cost route, low-rank factorization, brute force agree", 100,
       check_sqemd_lowrank},
      {"square-decomposition", "sum-of-squares split for every m up to the trial bound", 1000000,
       check_square_decomposition},
      {"embedding-identities", "pointwise identities of the Boolean embeddings", 1000,
       check_embedding_identities},
      {"mom-exact-emd", "geometric maximum orthogonal matching vs exhaustive", 200,
       check_mom_exact_emd},
      {"findov-sampling", "sampling Find-OV on planted instances", 100, check_findov_sampling},
      {"phased-hitting-set", "phased hitting set vs exhaustive oracle", 500,
       check_phased_hitting_set},
      {"promise-findov-routes", "promise-Find-OV consumers vs their oracles", 400,
       check_promise_findov_routes},
      {"pipeline", "full hitting-set-to-EMD chain vs exhaustive oracle", 100, check_pipeline},
      {"solver-oracle-equivalence", "matching solver vs brute force", 200,
       check_solver_oracle_equivalence},
  };
  return entries;
}

inline VerificationReport run_check(const std::string& name, int trials, std::uint64_t seed) {
  for (const auto& entry : verification_checks())
    if (entry.name == name) return entry.run(trials > 0 ? trials : entry.default_trials, seed);
  throw param_error("unknown check: " + name);
}

}  // namespace ovemd
