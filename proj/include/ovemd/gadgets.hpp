#pragma once

// Boolean-side gadgets: embeddings that turn orthogonality questions into
// distance questions, plus the decoders that translate matchings back.
//
// The MOM gadget's coordinate budget (dimension 12d+1) splits into a product
// region carrying the inner-product embedding, two disjoint padding regions
// that equalize norms, and a v-region holding the absorber vector v.  Each
// transformed left point places exactly d-1 of its padding ones inside the
// v-region (in slots disjoint from the right side's), which pins
// sq_dist(a'', v) = 4d+4 for every a and every d >= 1 while keeping
// left-right inner products untouched.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/rational.hpp"
#include "ovemd/vectors.hpp"

namespace ovemd {

enum class Side { left, right };

// Coordinate i maps to the block [3i, 3i+3): (a_i, 1-a_i, 1-a_i) on the left,
// (1-b_i, b_i, 1-b_i) on the right, so dot(f(a), g(b)) = d - dot(a, b).
inline BinaryVector negate_product(const BinaryVector& x, Side side) {
  BinaryVector out(3 * x.dim());
  for (int i = 0; i < x.dim(); ++i) {
    bool bit = x.bit(i);
    if (side == Side::left) {
      out.set_bit(3 * i, bit);
      out.set_bit(3 * i + 1, !bit);
      out.set_bit(3 * i + 2, !bit);
    } else {
      out.set_bit(3 * i, !bit);
      out.set_bit(3 * i + 1, bit);
      out.set_bit(3 * i + 2, !bit);
    }
  }
  return out;
}

// ---- symmetrization (injection -> bijection) -------------------------------

struct SymmetrizedInstance {
  BinaryPair pair;        // square: both sides of size |B|
  int original_left = 0;  // left ids below this are originals, the rest zero padding
  int input_dim = 0;
};

// x -> (x, complement(x)) gives every embedded point squared norm d and doubles
// every left-right squared distance; zero vectors pad the left side, each at
// squared distance exactly d from any embedded right point.
inline SymmetrizedInstance symmetrize(const BinaryPair& p) {
  check_pair_shape(p);
  if (p.left.size() > p.right.size()) throw shape_error("symmetrize needs |left| <= |right|");
  auto embed = [&](const BinaryVector& x) {
    BinaryVector out(2 * p.dim);
    for (int i = 0; i < p.dim; ++i) {
      out.set_bit(i, x.bit(i));
      out.set_bit(p.dim + i, !x.bit(i));
    }
    return out;
  };
  SymmetrizedInstance s;
  s.original_left = static_cast<int>(p.left.size());
  s.input_dim = p.dim;
  s.pair.dim = 2 * p.dim;
  for (const auto& a : p.left) s.pair.left.push_back(embed(a));
  for (std::size_t i = p.left.size(); i < p.right.size(); ++i)
    s.pair.left.push_back(BinaryVector(2 * p.dim));
  for (const auto& b : p.right) s.pair.right.push_back(embed(b));
  return s;
}

struct SymmetrizeDecodeReport {
  long double total = 0;       // bijection cost on the symmetrized instance
  long double expected = 0;    // pad_count * sqrt(d) + sqrt(2) * projected
  long double projected = 0;   // injection cost on the original instance
  long double rel_dev = 0;
};

// Strips the zero-padding pairs out of a bijection and checks the cost
// identity the embedding guarantees for it.
inline std::pair<Matching<long double>, SymmetrizeDecodeReport> decode_symmetrized(
    const SymmetrizedInstance& s, const Matching<long double>& m) {
  if (m.kind != MatchKind::bijection || m.pairs.size() != s.pair.left.size())
    throw inconsistency_error("decode_symmetrized needs a full bijection");
  Matching<long double> projected;
  projected.kind = MatchKind::injection;
  long double proj_cost = 0;
  for (auto [l, r] : m.pairs) {
    if (l >= s.original_left) continue;
    long double d2 = to_ld(sq_dist(s.pair.left[l], s.pair.right[r]));
    proj_cost += sqrtl(d2 / 2.0L);
    projected.pairs.emplace_back(l, r);
  }
  projected.cost = proj_cost;

  SymmetrizeDecodeReport rep;
  rep.total = m.cost;
  rep.projected = proj_cost;
  int pads = static_cast<int>(s.pair.left.size()) - s.original_left;
  rep.expected = pads * sqrtl(static_cast<long double>(s.input_dim)) + sqrtl(2.0L) * proj_cost;
  long double scale = std::max<long double>(1.0L, fabsl(rep.total));
  rep.rel_dev = fabsl(rep.total - rep.expected) / scale;
  if (rep.rel_dev > 1e-9L)
    throw inconsistency_error("symmetrized cost identity violated");
  return {std::move(projected), rep};
}

// ---- maximum orthogonal matching gadget ------------------------------------

struct MomLayout {
  int d = 0;
  int dim = 0;            // 12d + 1
  int product_begin = 0;  // [0, 3d)
  int a_pad_begin = 0;    // [3d, 6d)
  int b_pad_begin = 0;    // [6d, 9d)
  int v_begin = 0;        // [9d, 12d+1), all-ones coordinates of v
  int a_slots_begin = 0;  // d-1 in-v slots for left points
  int b_slots_begin = 0;  // d-1 in-v slots for right points
};

struct MomGadget {
  BinaryPair pair;  // right side: transformed B, then a_count copies of v
  int d = 0;
  int a_count = 0;
  int b_count = 0;
  BinaryVector v;
  MomLayout layout;
};

// Every left-right squared distance is 4d+2+2*dot(a,b) for original pairs and
// exactly 4d+4 against v; all norms are 3d+1.
inline MomGadget build_mom_gadget(const BinaryPair& p) {
  check_pair_shape(p);
  if (p.left.size() > p.right.size()) throw shape_error("mom gadget needs |left| <= |right|");
  if (p.dim < 1) throw shape_error("mom gadget needs dimension >= 1");
  const int d = p.dim;

  MomGadget g;
  g.d = d;
  g.a_count = static_cast<int>(p.left.size());
  g.b_count = static_cast<int>(p.right.size());
  g.layout = MomLayout{d, 12 * d + 1, 0, 3 * d, 6 * d, 9 * d, 9 * d, 9 * d + (d - 1)};
  g.pair.dim = g.layout.dim;

  auto transform = [&](const BinaryVector& x, Side side) {
    BinaryVector prod = negate_product(x, side);
    BinaryVector out(g.layout.dim);
    for (int i = 0; i < 3 * d; ++i) out.set_bit(i, prod.bit(i));
    int pad = x.weight() + 2;  // brings the norm to 3d+1 together with the d-1 v-slots
    int pad_begin = side == Side::left ? g.layout.a_pad_begin : g.layout.b_pad_begin;
    for (int i = 0; i < pad; ++i) out.set_bit(pad_begin + i);
    int slot_begin = side == Side::left ? g.layout.a_slots_begin : g.layout.b_slots_begin;
    for (int i = 0; i < d - 1; ++i) out.set_bit(slot_begin + i);
    return out;
  };

  g.v = BinaryVector(g.layout.dim);
  for (int i = g.layout.v_begin; i < g.layout.dim; ++i) g.v.set_bit(i);

  for (const auto& a : p.left) g.pair.left.push_back(transform(a, Side::left));
  for (const auto& b : p.right) g.pair.right.push_back(transform(b, Side::right));
  for (int i = 0; i < g.a_count; ++i) g.pair.right.push_back(g.v);
  return g;
}

struct MomDecode {
  std::vector<int> assignment;                       // left id -> right id, or -1 (absorbed by v)
  std::vector<std::pair<int, int>> orthogonal_pairs;  // squared distance exactly 4d+2
  int orthogonal_count = 0;
};

// Canonicalizes an injection on the gadget: pairs beyond the v-distance move
// to unused v-copies, pairs at exactly 4d+2 are certified orthogonal.
inline MomDecode decode_mom(const MomGadget& g, const Matching<long double>& m) {
  if (m.kind != MatchKind::injection || static_cast<int>(m.pairs.size()) != g.a_count)
    throw inconsistency_error("decode_mom needs an injection covering the left side");
  const int v_threshold = 4 * g.d + 4;
  std::vector<char> right_used(g.b_count + g.a_count, 0);
  std::vector<int> target(g.a_count, -2);
  for (auto [l, r] : m.pairs) {
    if (l < 0 || l >= g.a_count || r < 0 || r >= g.b_count + g.a_count || right_used[r] ||
        target[l] != -2)
      throw inconsistency_error("decode_mom: malformed injection");
    right_used[r] = 1;
    target[l] = r;
  }

  MomDecode out;
  out.assignment.assign(g.a_count, -1);
  std::vector<int> spare_v;
  for (int r = g.b_count; r < g.b_count + g.a_count; ++r)
    if (!right_used[r]) spare_v.push_back(r);

  for (int l = 0; l < g.a_count; ++l) {
    int r = target[l];
    int d2 = sq_dist(g.pair.left[l], g.pair.right[r]);
    if (r >= g.b_count) {
      require(d2 == v_threshold, "v-copy at unexpected distance");
      continue;  // absorbed
    }
    if (d2 > v_threshold) {
      require(!spare_v.empty(), "no spare v-copy for reassignment");
      spare_v.pop_back();
      continue;  // reassigned to a v-copy, leaves assignment[l] = -1
    }
    out.assignment[l] = r;
    if (d2 == 4 * g.d + 2) {
      // norms 3d+1 and squared distance 4d+2 force dot(a'', b'') = d,
      // which the embedding only produces when dot(a, b) = 0
      require(dot(g.pair.left[l], g.pair.right[r]) == g.d,
              "orthogonal-distance pair with wrong inner product");
      out.orthogonal_pairs.emplace_back(l, r);
    }
  }
  out.orthogonal_count = static_cast<int>(out.orthogonal_pairs.size());
  return out;
}

// A MOM solver consumes a pair with |left| <= |right| and returns claimed
// orthogonal pairs, at most one per left id.
using MomSolver = std::function<std::vector<std::pair<int, int>>(const BinaryPair&)>;

// Exact MOM through the geometric route: gadget, symmetrize, Euclidean
// matching, then both decoders.
inline MomSolver emd_mom_solver() {
  return [](const BinaryPair& p) {
    MomGadget g = build_mom_gadget(p);
    SymmetrizedInstance s = symmetrize(g.pair);
    Matching<long double> m = emd(s.pair);
    auto [injection, report] = decode_symmetrized(s, m);
    MomDecode dec = decode_mom(g, injection);
    return dec.orthogonal_pairs;
  };
}

// Orthogonal pair through a MOM solver on the duplicated instance
// (ceil(2 n^(delta/(1-delta))) copies of every vector on both sides).
inline std::optional<std::pair<int, int>> mom_to_ov(const BinaryPair& p, const Ratio& delta,
                                                    const MomSolver& solver) {
  check_pair_shape(p);
  if (p.left.size() != p.right.size()) throw shape_error("mom_to_ov needs equal sides");
  if (!delta.positive() || delta.num >= delta.den) throw param_error("delta must lie in (0, 1)");
  const int n = static_cast<int>(p.left.size());
  if (n == 0) return std::nullopt;
  Int copies_big = ceil_scaled_pow(n, Ratio(delta.num, delta.den - delta.num), 2);
  if (copies_big * n > 20000) throw capacity_error("mom_to_ov: duplicated instance too large");
  const int copies = static_cast<int>(copies_big);

  BinaryPair dup;
  dup.dim = p.dim;
  for (const auto& a : p.left)
    for (int t = 0; t < copies; ++t) dup.left.push_back(a);
  for (const auto& b : p.right)
    for (int t = 0; t < copies; ++t) dup.right.push_back(b);

  auto pairs = solver(dup);
  if (pairs.empty()) return std::nullopt;
  int a = pairs.front().first / copies, b = pairs.front().second / copies;
  require(dot(p.left[a], p.right[b]) == 0, "mom_to_ov: projected pair not orthogonal");
  return std::make_pair(a, b);
}

}  // namespace ovemd
