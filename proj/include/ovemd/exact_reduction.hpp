#pragma once

// Closest pair as a matching problem.  The construction embeds two integer
// point sets into a higher-dimensional pair whose min-cost perfect matching
// cost encodes the minimum cross distance: adjuster coordinates give every
// original point the same squared distance S^2 to a fixed anchor on the other
// side, copies of two anchor vectors u/v absorb all but one original pair, and
// a large separator coordinate N forces exactly one original-original edge in
// any optimal matching.
//
// Constants.  After the parity lift, coordinates are bounded by C = 2*floor(n^k),
// so the per-edge anchor cost is S = C^2 * d (d the lifted dimension) and the
// common adjuster target is S^2; for inputs whose entries stay below half the
// coordinate bound this collapses to the familiar n^(2k) * d shape.  The
// separator N is either ceil(n^(16k)) ("paper" scale, structurally faithful but
// far beyond float range) or the smallest power of two with
// N^2 d > 4 (2n)^2 (S^2 + max cross squared distance) ("desk" scale, which
// keeps every radicand well inside the 64-bit mantissa of long double while
// preserving the same optimal-matching structure).

#include <cmath>
#include <utility>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/rational.hpp"
#include "ovemd/square_decomp.hpp"
#include "ovemd/vectors.hpp"

namespace ovemd {

enum class ScaleMode { paper, desk };

struct ReducedExactInstance {
  PointSetPair<IntVector> pair;  // left = n embedded + (n-1) v; right = n embedded + (n-1) u
  int n = 0;                     // input point count per side
  int d = 0;                     // lifted input dimension
  Ratio k;                       // coordinate-bound exponent
  int c = 0;                     // adjuster slots beyond index 0
  Int big_n;                     // separator N
  IntVector u, v;
  Int adj_norm_sq;               // S^2: squared distance from any embedded point to its anchor
  Int edge_unit;                 // S
  Int coord_bound;               // floor(n^k): allowed input entry range is [1, coord_bound]
};

namespace detail {

inline IntVector adjuster(const IntVector& lifted, const Int& target_sq, const Ratio& rho, int c) {
  Int norm = lifted.norm_sq();
  require(norm % 2 == 1, "lifted norm must be odd");
  Int head = (norm + 1) / 2;
  Int residual = target_sq - head * head;
  require(residual >= 0, "adjuster residual negative");
  std::vector<Int> parts = decompose_squares(residual, rho);
  require(static_cast<int>(parts.size()) <= c, "adjuster parts exceed slot count");
  std::vector<Int> entries;
  entries.reserve(c + 1);
  entries.push_back(head);
  for (Int& p : parts) entries.push_back(std::move(p));
  entries.resize(c + 1, 0);
  return IntVector(std::move(entries));
}

}  // namespace detail

inline ReducedExactInstance build_exact_reduction(const PointSetPair<IntVector>& input,
                                                  const Ratio& k, ScaleMode mode = ScaleMode::desk) {
  check_pair_shape(input);
  const int n = static_cast<int>(input.left.size());
  if (n < 1 || static_cast<int>(input.right.size()) != n)
    throw shape_error("exact reduction needs equal nonempty sides");
  if (input.dim < 1) throw shape_error("exact reduction needs dimension >= 1");
  if (!k.positive()) throw param_error("k must be positive");

  const Int bound = floor_pow(n, k);
  for (const auto* side : {&input.left, &input.right})
    for (const IntVector& z : *side)
      for (int i = 0; i < z.dim(); ++i)
        if (z[i] < 1 || z[i] > bound)
          throw shape_error("exact reduction entries must lie in [1, floor(n^k)]");

  ReducedExactInstance inst;
  inst.n = n;
  inst.d = input.dim + 1;
  inst.k = k;
  inst.coord_bound = bound;

  std::vector<IntVector> la, lb;
  la.reserve(n);
  lb.reserve(n);
  for (const auto& z : input.left) la.push_back(parity_lift(z));
  for (const auto& z : input.right) lb.push_back(parity_lift(z));

  const Int c_bound = 2 * bound;
  inst.edge_unit = c_bound * c_bound * inst.d;
  inst.adj_norm_sq = inst.edge_unit * inst.edge_unit;

  const Ratio rho(k.den, 16 * k.num);
  inst.c = decompose_parts_bound(rho);

  Int max_cross = 0;
  for (const auto& a : la)
    for (const auto& b : lb) max_cross = std::max(max_cross, sq_dist(a, b));

  if (mode == ScaleMode::paper) {
    inst.big_n = ceil_scaled_pow(n, Ratio(16 * k.num, k.den));
  } else {
    Int gap = 4 * Int(2 * n) * (2 * n) * (inst.adj_norm_sq + max_cross);
    inst.big_n = 1;
    while (inst.big_n * inst.big_n * inst.d <= gap) inst.big_n <<= 1;
  }
  require(Int(n) * n * inst.adj_norm_sq < inst.big_n * inst.big_n * inst.d,
          "separator too small for anchor cost");

  const int d = inst.d, c = inst.c;
  const int dim = 2 * d + 2 * c + 2;
  auto assemble = [&](bool left_side, const IntVector* adj, const IntVector* tail) {
    std::vector<Int> coords(dim, 0);
    if (!left_side)
      for (int i = 0; i < d; ++i) coords[i] = inst.big_n;
    int adj_off = left_side ? d : d + c + 1;
    if (adj)
      for (int i = 0; i <= c; ++i) coords[adj_off + i] = (*adj)[i];
    else
      coords[adj_off] = 1;  // anchors carry a single 1 where the adjuster head sits
    if (tail)
      for (int i = 0; i < d; ++i) coords[d + 2 * c + 2 + i] = (*tail)[i];
    return IntVector(std::move(coords));
  };

  // u pairs with embedded left points, so it uses the left adjuster block but
  // lives on the right side (no separator); v is the mirror image.
  inst.u = assemble(true, nullptr, nullptr);
  inst.v = assemble(false, nullptr, nullptr);

  inst.pair.dim = dim;
  for (const auto& a : la) {
    IntVector adj = detail::adjuster(a, inst.adj_norm_sq, rho, c);
    inst.pair.left.push_back(assemble(true, &adj, &a));
  }
  for (int i = 0; i < n - 1; ++i) inst.pair.left.push_back(inst.v);
  for (const auto& b : lb) {
    IntVector adj = detail::adjuster(b, inst.adj_norm_sq, rho, c);
    inst.pair.right.push_back(assemble(false, &adj, &b));
  }
  for (int i = 0; i < n - 1; ++i) inst.pair.right.push_back(inst.u);
  return inst;
}

// Euclidean matching cost -> closest pair distance in the lifted space (the
// pre-lift distance is this divided by 2).  The radicand is integral by
// construction, so values within 0.25 of an integer snap to it; this makes the
// recovery exact whenever the matching value carries enough precision, in
// particular for zero distances.
inline long double recover_closest_pair(long double emd_value, const ReducedExactInstance& inst) {
  long double base = 2.0L * (inst.n - 1) * to_ld(inst.edge_unit);
  long double rem = emd_value - base;
  if (rem < 0) throw inconsistency_error("matching value below anchor baseline");
  long double radicand =
      rem * rem - to_ld(inst.big_n * inst.big_n * inst.d + 2 * inst.adj_norm_sq);
  long double snapped = roundl(radicand);
  if (fabsl(radicand - snapped) <= 0.25L) radicand = snapped;
  if (radicand < 0) {
    if (radicand < -0.5L) throw inconsistency_error("negative radicand: matching value inconsistent");
    radicand = 0;
  }
  return sqrtl(radicand);
}

// Exact integer counterpart for the squared-cost route; returns the lifted
// minimum squared distance (4x the pre-lift value).
inline Int recover_closest_pair_sq(const Int& assignment_cost, const ReducedExactInstance& inst) {
  Int base = 2 * Int(inst.n - 1) * inst.adj_norm_sq + inst.big_n * inst.big_n * inst.d +
             2 * inst.adj_norm_sq;
  Int rem = assignment_cost - base;
  if (rem < 0) throw inconsistency_error("assignment cost below structural baseline");
  return rem;
}

struct LowRankFactorization {
  std::vector<std::vector<Int>> u, v;  // M = u * v^T, M_ij the squared distance
  int rank = 0;
};

// Factorizes the reduced instance's squared-distance matrix with one column
// per coordinate plus two norm columns: rank = dim + 2 = 2d + 2c + 4.
inline std::pair<LowRankFactorization, ReducedExactInstance> build_lowrank_assignment(
    const PointSetPair<IntVector>& input, const Ratio& k, ScaleMode mode = ScaleMode::desk) {
  ReducedExactInstance inst = build_exact_reduction(input, k, mode);
  const int dim = inst.pair.dim;
  LowRankFactorization f;
  f.rank = dim + 2;
  for (const IntVector& a : inst.pair.left) {
    std::vector<Int> row;
    row.reserve(f.rank);
    row.push_back(a.norm_sq());
    row.push_back(1);
    for (int t = 0; t < dim; ++t) row.push_back(-2 * a[t]);
    f.u.push_back(std::move(row));
  }
  for (const IntVector& b : inst.pair.right) {
    std::vector<Int> row;
    row.reserve(f.rank);
    row.push_back(1);
    row.push_back(b.norm_sq());
    for (int t = 0; t < dim; ++t) row.push_back(b[t]);
    f.v.push_back(std::move(row));
  }
  return {std::move(f), std::move(inst)};
}

// Number of matched pairs joining two embedded originals (ids below n on both
// sides); optimal matchings of a reduced instance have exactly one.
template <class Cost>
inline int count_original_pairs(const Matching<Cost>& m, int n) {
  int count = 0;
  for (auto [l, r] : m.pairs)
    if (l < n && r < n) ++count;
  return count;
}

}  // namespace ovemd
