#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "ovemd/exact_reduction.hpp"
#include "ovemd/gadgets.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/ov_suite.hpp"
#include "ovemd/rng.hpp"

using namespace ovemd;

namespace {

IntPair random_input(Rng& rng, int n, int d) {
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

Int min_cross_sq(const IntPair& p) {
  Int best = sq_dist(p.left[0], p.right[0]);
  for (const auto& a : p.left)
    for (const auto& b : p.right) best = std::min(best, sq_dist(a, b));
  return best;
}

BinaryPair random_binary(Rng& rng, int na, int nb, int d) {
  BinaryPair p;
  p.dim = d;
  auto vec = [&] {
    BinaryVector v(d);
    for (int i = 0; i < d; ++i)
      if (rng.chance(1, 2)) v.set_bit(i);
    return v;
  };
  for (int i = 0; i < na; ++i) p.left.push_back(vec());
  for (int i = 0; i < nb; ++i) p.right.push_back(vec());
  return p;
}

}  // namespace

TEST_CASE("reduced instance geometry", "[exact]") {
  IntPair input;
  input.dim = 2;
  input.left = {IntVector{1, 2}, IntVector{3, 1}, IntVector{2, 2}};
  input.right = {IntVector{3, 3}, IntVector{1, 1}, IntVector{2, 3}};
  ReducedExactInstance inst = build_exact_reduction(input, Ratio(1, 1));

  CHECK(inst.n == 3);
  CHECK(inst.d == 3);  // lifted dimension
  CHECK(inst.c == 11);
  CHECK(inst.pair.dim == 2 * inst.d + 2 * inst.c + 2);
  CHECK(inst.pair.left.size() == 5);  // n embedded + (n-1) anchors
  CHECK(inst.pair.right.size() == 5);
  CHECK(inst.coord_bound == 3);
  CHECK(inst.edge_unit == Int(6 * 6) * 3);  // (2*floor(n^k))^2 * d
  CHECK(inst.adj_norm_sq == inst.edge_unit * inst.edge_unit);

  SECTION("anchor distances are uniform") {
    for (int i = 0; i < inst.n; ++i) {
      CHECK(sq_dist(inst.pair.left[i], inst.u) == inst.adj_norm_sq);
      CHECK(sq_dist(inst.v, inst.pair.right[i]) == inst.adj_norm_sq);
    }
    CHECK(sq_dist(inst.v, inst.u) == inst.big_n * inst.big_n * inst.d + 2);
  }

  SECTION("cross distances carry the lifted input distances") {
    Int base = inst.big_n * inst.big_n * inst.d + 2 * inst.adj_norm_sq;
    for (int i = 0; i < inst.n; ++i)
      for (int j = 0; j < inst.n; ++j) {
        Int lifted = sq_dist(parity_lift(input.left[i]), parity_lift(input.right[j]));
        CHECK(sq_dist(inst.pair.left[i], inst.pair.right[j]) == base + lifted);
      }
  }

  SECTION("separator dominates the anchor cost") {
    CHECK(Int(inst.n) * inst.n * inst.adj_norm_sq < inst.big_n * inst.big_n * inst.d);
  }

  SECTION("anchor copies sit beyond the originals") {
    for (std::size_t i = inst.n; i < inst.pair.left.size(); ++i)
      CHECK(inst.pair.left[i] == inst.v);
    for (std::size_t j = inst.n; j < inst.pair.right.size(); ++j)
      CHECK(inst.pair.right[j] == inst.u);
  }
}

TEST_CASE("reduction input validation", "[exact]") {
  IntPair p;
  p.dim = 1;
  p.left = {IntVector{1}};
  p.right = {IntVector{1}};
  CHECK_NOTHROW(build_exact_reduction(p, Ratio(1, 1)));  // n = 1 is legal

  IntPair zero = p;
  zero.left = {IntVector{0}};
  CHECK_THROWS_AS(build_exact_reduction(zero, Ratio(1, 1)), shape_error);

  IntPair big = p;
  big.left = {IntVector{2}};  // exceeds floor(1^1)
  CHECK_THROWS_AS(build_exact_reduction(big, Ratio(1, 1)), shape_error);

  CHECK_THROWS_AS(build_exact_reduction(p, Ratio(0, 1)), param_error);
  CHECK_THROWS_AS(build_exact_reduction(p, Ratio(-1, 2)), param_error);

  IntPair uneven = p;
  uneven.right.push_back(IntVector{1});
  CHECK_THROWS_AS(build_exact_reduction(uneven, Ratio(1, 1)), shape_error);

  IntPair empty;
  empty.dim = 1;
  CHECK_THROWS_AS(build_exact_reduction(empty, Ratio(1, 1)), shape_error);
}

TEST_CASE("adjusters hit the common target", "[exact]") {
  const Ratio rho(1, 16);
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    int d = rng.range(1, 4);
    std::vector<Int> coords(d);
    for (auto& x : coords) x = rng.range(1, 9);
    IntVector lifted = parity_lift(IntVector(coords));
    Int target = Int(1000) * 1000;
    const int c = decompose_parts_bound(rho);
    IntVector adj = detail::adjuster(lifted, target, rho, c);
    CHECK(adj.dim() == c + 1);
    CHECK(adj[0] == (lifted.norm_sq() + 1) / 2);
    CHECK(adj.norm_sq() == target);
  }
}

TEST_CASE("closest pair round trip through the Euclidean matching", "[exact]") {
  Rng rng(13);
  for (int t = 0; t < 40; ++t) {
    int n = rng.range(2, 6), d = rng.range(1, 3);
    IntPair input = random_input(rng, n, d);
    ReducedExactInstance inst = build_exact_reduction(input, Ratio(1, 1));
    Matching<long double> m = emd(inst.pair);
    long double lifted = recover_closest_pair(m.cost, inst);
    long double expected = 2.0L * sqrtl(to_ld(min_cross_sq(input)));
    CHECK(lifted == Catch::Approx(expected).epsilon(1e-6).margin(1e-6));
    CHECK(count_original_pairs(m, n) == 1);
  }
}

TEST_CASE("squared route is exact and matches brute force", "[exact]") {
  Rng rng(19);
  for (int t = 0; t < 30; ++t) {
    int n = rng.range(2, 4), d = rng.range(1, 3);  // sides 2n-1 <= 7 keep brute force quick
    IntPair input = random_input(rng, n, d);
    ReducedExactInstance inst = build_exact_reduction(input, Ratio(1, 1));
    Matching<Int> m = sqemd(inst.pair);
    SquaredEuclideanCosts<IntVector> costs{&inst.pair};
    Matching<Int> ref = brute_force_min_matching(costs, MatchKind::bijection);
    CHECK(m.cost == ref.cost);
    CHECK(recover_closest_pair_sq(m.cost, inst) == 4 * min_cross_sq(input));
  }
}

TEST_CASE("recovery snaps integral radicands", "[exact]") {
  IntPair input;
  input.dim = 1;
  input.left = {IntVector{1}, IntVector{2}};
  input.right = {IntVector{1}, IntVector{2}};
  ReducedExactInstance inst = build_exact_reduction(input, Ratio(1, 1));
  Int base_sq = inst.big_n * inst.big_n * inst.d + 2 * inst.adj_norm_sq;
  for (Int x : {Int(0), Int(1), Int(5)}) {
    long double value =
        2.0L * (inst.n - 1) * to_ld(inst.edge_unit) + sqrtl(to_ld(base_sq + x * x));
    CHECK(recover_closest_pair(value, inst) == Catch::Approx(to_ld(x)).margin(1e-9));
  }
  CHECK_THROWS_AS(recover_closest_pair(0.0L, inst), inconsistency_error);
  CHECK_THROWS_AS(recover_closest_pair_sq(Int(0), inst), inconsistency_error);
}

TEST_CASE("paper-scale separator", "[exact]") {
  IntPair input;
  input.dim = 1;
  input.left = {IntVector{1}, IntVector{2}};
  input.right = {IntVector{2}, IntVector{1}};
  ReducedExactInstance inst = build_exact_reduction(input, Ratio(1, 1), ScaleMode::paper);
  CHECK(inst.big_n == int_pow(Int(2), 16));
  Matching<Int> m = sqemd(inst.pair);
  CHECK(recover_closest_pair_sq(m.cost, inst) == 0);  // duplicate point across sides

  IntPair shifted;
  shifted.dim = 1;
  shifted.left = {IntVector{1}, IntVector{1}, IntVector{1}};
  shifted.right = {IntVector{3}, IntVector{3}, IntVector{3}};
  ReducedExactInstance far = build_exact_reduction(shifted, Ratio(1, 1), ScaleMode::paper);
  CHECK(far.big_n == int_pow(Int(3), 16));
  CHECK(recover_closest_pair_sq(sqemd(far.pair).cost, far) == 16);  // lifted (2*2)^2
}

TEST_CASE("low-rank factorization reproduces the cost matrix", "[lowrank]") {
  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    int n = rng.range(1, 5), d = rng.range(1, 3);
    IntPair input = random_input(rng, n, d);
    auto [fact, inst] = build_lowrank_assignment(input, Ratio(1, 1));
    CHECK(fact.rank == inst.pair.dim + 2);
    CHECK(fact.rank <= 2 * inst.d + 2 * inst.c + 4);
    FactorizedCosts fc{fact.u, fact.v};
    const int side = static_cast<int>(inst.pair.left.size());
    CHECK(fc.rows() == side);
    CHECK(fc.cols() == side);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j)
        CHECK(fc.cost(i, j) == sq_dist(inst.pair.left[i], inst.pair.right[j]));
    CHECK(min_cost_matching(fc, MatchKind::bijection).cost == sqemd(inst.pair).cost);
  }
}

TEST_CASE("product negation flips inner products", "[gadgets]") {
  BinaryVector a = BinaryVector::from_bits({1, 0});
  BinaryVector b = BinaryVector::from_bits({1, 1});
  CHECK(negate_product(a, Side::left).bits() == std::vector<int>{1, 0, 0, 0, 1, 1});
  CHECK(negate_product(b, Side::right).bits() == std::vector<int>{0, 1, 0, 0, 1, 0});
  CHECK(dot(negate_product(a, Side::left), negate_product(b, Side::right)) == 1);  // d - a.b

  Rng rng(37);
  for (int t = 0; t < 100; ++t) {
    int d = rng.range(1, 40);
    BinaryVector x(d), y(d);
    for (int i = 0; i < d; ++i) {
      if (rng.chance(1, 2)) x.set_bit(i);
      if (rng.chance(1, 2)) y.set_bit(i);
    }
    CHECK(dot(negate_product(x, Side::left), negate_product(y, Side::right)) == d - dot(x, y));
  }
}

TEST_CASE("symmetrization pads and doubles distances", "[gadgets]") {
  BinaryPair p;
  p.dim = 3;
  p.left = {BinaryVector::from_bits({1, 0, 1})};
  p.right = {BinaryVector::from_bits({1, 1, 0}), BinaryVector::from_bits({0, 0, 1})};
  SymmetrizedInstance s = symmetrize(p);
  CHECK(s.pair.dim == 6);
  CHECK(s.pair.left.size() == 2);
  CHECK(s.pair.right.size() == 2);
  CHECK(s.original_left == 1);
  CHECK(s.pair.left[0].bits() == std::vector<int>{1, 0, 1, 0, 1, 0});
  CHECK(s.pair.left[1].is_zero());
  CHECK(s.pair.left[0].weight() == 3);
  CHECK(s.pair.right[0].weight() == 3);
  CHECK(sq_dist(s.pair.left[0], s.pair.right[0]) == 2 * sq_dist(p.left[0], p.right[0]));
  CHECK(sq_dist(s.pair.left[1], s.pair.right[0]) == 3);  // zero pad to any embedded point

  BinaryPair tall;
  tall.dim = 1;
  tall.left = {BinaryVector(1), BinaryVector(1)};
  tall.right = {BinaryVector(1)};
  CHECK_THROWS_AS(symmetrize(tall), shape_error);
}

TEST_CASE("symmetrized decode recovers the injection", "[gadgets]") {
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    int na = rng.range(1, 6), nb = rng.range(na, 7), d = rng.range(1, 8);
    BinaryPair p = random_binary(rng, na, nb, d);
    SymmetrizedInstance s = symmetrize(p);
    auto [projected, report] = decode_symmetrized(s, emd(s.pair));
    CHECK(report.rel_dev <= 1e-9L);
    CHECK(projected.kind == MatchKind::injection);
    CHECK(projected.pairs.size() == static_cast<std::size_t>(na));
    Matching<long double> direct = asymmetric_emd(p);
    CHECK(projected.cost == Catch::Approx(direct.cost).epsilon(1e-9).margin(1e-9));
    std::vector<char> used(nb, 0);
    for (auto [l, r] : projected.pairs) {
      CHECK(l < na);
      CHECK(!used[r]);
      used[r] = 1;
    }
  }
}

TEST_CASE("mom gadget layout and spectrum", "[gadgets]") {
  BinaryPair p;
  p.dim = 2;
  p.left = {BinaryVector::from_bits({1, 0})};
  p.right = {BinaryVector::from_bits({0, 1}), BinaryVector::from_bits({1, 0})};
  MomGadget g = build_mom_gadget(p);
  CHECK(g.pair.dim == 25);  // 12d + 1
  CHECK(g.pair.left.size() == 1);
  CHECK(g.pair.right.size() == 3);  // two rights plus one v copy
  CHECK(g.pair.right[2] == g.v);
  CHECK(g.pair.left[0].weight() == 7);
  CHECK(g.pair.right[0].weight() == 7);
  CHECK(g.v.weight() == 7);
  CHECK(sq_dist(g.pair.left[0], g.pair.right[0]) == 10);  // orthogonal: 4d+2
  CHECK(sq_dist(g.pair.left[0], g.pair.right[1]) == 12);  // dot 1: 4d+2+2
  CHECK(sq_dist(g.pair.left[0], g.v) == 12);              // 4d+4

  SECTION("one-dimensional gadget still works") {
    BinaryPair q;
    q.dim = 1;
    q.left = {BinaryVector::from_bits({1})};
    q.right = {BinaryVector::from_bits({0})};
    MomGadget h = build_mom_gadget(q);
    CHECK(h.pair.dim == 13);
    CHECK(h.pair.left[0].weight() == 4);
    CHECK(sq_dist(h.pair.left[0], h.pair.right[0]) == 6);  // orthogonal: 4d+2
    CHECK(sq_dist(h.pair.left[0], h.v) == 8);              // 4d+4
  }

  SECTION("norm identity over random vectors") {
    Rng rng(47);
    for (int t = 0; t < 50; ++t) {
      int d = rng.range(1, 20);
      BinaryPair r = random_binary(rng, 1, 1, d);
      MomGadget h = build_mom_gadget(r);
      CHECK(h.pair.left[0].weight() == 3 * d + 1);
      CHECK(h.pair.right[0].weight() == 3 * d + 1);
      CHECK(sq_dist(h.pair.left[0], h.pair.right[0]) ==
            4 * d + 2 + 2 * dot(r.left[0], r.right[0]));
      CHECK(sq_dist(h.pair.left[0], h.v) == 4 * d + 4);
    }
  }
}

TEST_CASE("mom decode counts exactly the orthogonal pairs", "[gadgets]") {
  SECTION("planted orthogonal pair is certified") {
    BinaryPair p;
    p.dim = 2;
    p.left = {BinaryVector::from_bits({1, 0})};
    p.right = {BinaryVector::from_bits({0, 1})};
    MomGadget g = build_mom_gadget(p);
    MomDecode dec = decode_mom(g, asymmetric_emd(g.pair));
    CHECK(dec.orthogonal_count == 1);
    CHECK(dec.orthogonal_pairs == std::vector<std::pair<int, int>>{{0, 0}});
    CHECK(dec.assignment == std::vector<int>{0});
  }

  SECTION("non-orthogonal lefts are absorbed by v") {
    BinaryPair p;
    p.dim = 2;
    p.left = {BinaryVector::from_bits({1, 1})};
    p.right = {BinaryVector::from_bits({1, 1})};
    MomGadget g = build_mom_gadget(p);
    MomDecode dec = decode_mom(g, asymmetric_emd(g.pair));
    CHECK(dec.orthogonal_count == 0);
    CHECK(dec.assignment == std::vector<int>{-1});  // v is cheaper than a dot-2 partner
  }

  SECTION("matches the exhaustive optimum on random instances") {
    Rng rng(53);
    for (int t = 0; t < 60; ++t) {
      int na = rng.range(1, 6), nb = rng.range(na, 7), d = rng.range(1, 5);
      BinaryPair p = random_binary(rng, na, nb, d);
      MomGadget g = build_mom_gadget(p);
      MomDecode dec = decode_mom(g, asymmetric_emd(g.pair));
      CHECK(dec.orthogonal_count == mom_oracle(p).m_opt);
      for (auto [l, r] : dec.orthogonal_pairs) CHECK(dot(p.left[l], p.right[r]) == 0);
    }
  }

  SECTION("malformed injections are rejected") {
    BinaryPair p;
    p.dim = 1;
    p.left = {BinaryVector::from_bits({1})};
    p.right = {BinaryVector::from_bits({1})};
    MomGadget g = build_mom_gadget(p);
    Matching<long double> bad;
    bad.kind = MatchKind::bijection;
    CHECK_THROWS_AS(decode_mom(g, bad), inconsistency_error);
  }
}

TEST_CASE("duplication reduces orthogonal-pair search to mom", "[gadgets]") {
  BinaryPair p;
  p.dim = 6;
  for (int i = 0; i < 16; ++i) {
    BinaryVector v(6);
    v.set_bit(i % 6);
    p.left.push_back(v);
    BinaryVector w(6);
    w.set_bit(i % 6);
    p.right.push_back(w);
  }
  // left 3 sees only bit 3; make right 5 its orthogonal partner
  p.right[5] = BinaryVector::from_bits({1, 1, 1, 0, 1, 1});
  p.left[3] = BinaryVector::from_bits({0, 0, 0, 1, 0, 0});
  for (int i = 0; i < 16; ++i)
    if (i != 5) {
      BinaryVector w(6);
      w.set_bit(i % 6);
      w.set_bit(3);  // collide with left 3's single bit
      p.right[i] = w;
    }
  for (int i = 0; i < 16; ++i)
    if (i != 3) {
      BinaryVector v(6);
      v.set_bit(3);
      v.set_bit(i % 6);
      p.left[i] = v;
    }

  auto got = mom_to_ov(p, Ratio(1, 2), exact_mom_solver());
  REQUIRE(got.has_value());
  CHECK(dot(p.left[got->first], p.right[got->second]) == 0);

  SECTION("no orthogonal pair yields nothing") {
    BinaryPair q;
    q.dim = 2;
    q.left = {BinaryVector::from_bits({1, 1}), BinaryVector::from_bits({1, 0})};
    q.right = {BinaryVector::from_bits({1, 1}), BinaryVector::from_bits({1, 0})};
    CHECK(!mom_to_ov(q, Ratio(1, 2), exact_mom_solver()).has_value());
  }

  SECTION("parameter validation") {
    BinaryPair q;
    q.dim = 1;
    q.left = {BinaryVector(1)};
    q.right = {BinaryVector(1)};
    CHECK_THROWS_AS(mom_to_ov(q, Ratio(1, 1), exact_mom_solver()), param_error);
    CHECK_THROWS_AS(mom_to_ov(q, Ratio(0, 2), exact_mom_solver()), param_error);
    BinaryPair uneven = q;
    uneven.right.push_back(BinaryVector(1));
    CHECK_THROWS_AS(mom_to_ov(uneven, Ratio(1, 2), exact_mom_solver()), shape_error);
  }
}

TEST_CASE("geometric mom solver equals the exhaustive one", "[gadgets]") {
  Rng rng(61);
  MomSolver geometric = emd_mom_solver();
  for (int t = 0; t < 25; ++t) {
    int na = rng.range(1, 5), nb = rng.range(na, 6), d = rng.range(1, 4);
    BinaryPair p = random_binary(rng, na, nb, d);
    auto pairs = geometric(p);
    CHECK(static_cast<int>(pairs.size()) == mom_oracle(p).m_opt);
    std::vector<char> seen_l(na, 0), seen_r(nb, 0);
    for (auto [l, r] : pairs) {
      CHECK(dot(p.left[l], p.right[r]) == 0);
      CHECK(!seen_l[l]);
      CHECK(!seen_r[r]);
      seen_l[l] = seen_r[r] = 1;
    }
  }
}
