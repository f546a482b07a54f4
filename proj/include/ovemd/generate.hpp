#pragma once

// Seeded instance families for tests, benchmarks, and the CLI.  Every family
// is a pure function of (parameters, seed); the planted families make their
// advertised structure certain, not just likely:
//   uniform-binary       independent biased bits on both sides
//   planted-orthogonal   exactly the first planted_count lefts have orthogonal
//                        partners (coordinate 0 blocks everyone else)
//   planted-hitting      left 0 is all-ones and every right is nonzero, so a
//                        hitting vector certainly exists
//   complement-matched   rights are a shuffle of the lefts' complements, so
//                        every left has a witness and no hitting vector exists
//   clustered-integer    integer points around a few cluster centres, entries
//                        in [1, coord_bound]

#include <string>
#include <variant>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/rational.hpp"
#include "ovemd/rng.hpp"
#include "ovemd/vectors.hpp"

namespace ovemd {

struct GeneratorSpec {
  std::string family = "uniform-binary";
  int n = 8;
  int d = 8;
  std::uint64_t seed = 0;
  Ratio density{1, 2};     // per-bit one-probability for the binary families
  int planted_count = 1;   // planted-orthogonal only
  std::int64_t coord_bound = 16;  // clustered-integer only
};

using Instance = std::variant<BinaryPair, IntPair>;

namespace detail {

inline BinaryVector random_bits(Rng& rng, int d, const Ratio& density) {
  BinaryVector v(d);
  for (int i = 0; i < d; ++i)
    if (rng.chance(density.num, density.den)) v.set_bit(i);
  return v;
}

}  // namespace detail

inline Instance generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw param_error("generator needs n >= 1");
  if (spec.d < 1) throw param_error("generator needs d >= 1");
  if (!spec.density.positive() || spec.density.num > spec.density.den)
    throw param_error("density must lie in (0, 1]");
  Rng rng(stage_seed(spec.seed, 0));

  if (spec.family == "uniform-binary") {
    BinaryPair p;
    p.dim = spec.d;
    for (int i = 0; i < spec.n; ++i) p.left.push_back(detail::random_bits(rng, spec.d, spec.density));
    for (int i = 0; i < spec.n; ++i) p.right.push_back(detail::random_bits(rng, spec.d, spec.density));
    return p;
  }

  if (spec.family == "planted-orthogonal") {
    if (spec.d < 2) throw param_error("planted-orthogonal needs d >= 2");
    if (spec.planted_count < 0 || spec.planted_count > spec.n)
      throw param_error("planted_count must lie in [0, n]");
    // Coordinate 0 is set on every right and every unplanted left, so only
    // lefts 0..planted_count-1 can have orthogonal partners; left i gets the
    // dedicated witness right i with the overlapping bits cleared.
    BinaryPair p;
    p.dim = spec.d;
    for (int i = 0; i < spec.n; ++i) {
      BinaryVector a = detail::random_bits(rng, spec.d, spec.density);
      a.set_bit(0, i >= spec.planted_count);
      p.left.push_back(a);
    }
    for (int i = 0; i < spec.n; ++i) {
      BinaryVector b = detail::random_bits(rng, spec.d, spec.density);
      b.set_bit(0);
      if (i < spec.planted_count)
        for (int t = 1; t < spec.d; ++t)
          if (p.left[i].bit(t)) b.set_bit(t, false);
      p.right.push_back(b);
    }
    return p;
  }

  if (spec.family == "planted-hitting") {
    BinaryPair p;
    p.dim = spec.d;
    p.left.push_back([&] {
      BinaryVector ones(spec.d);
      for (int i = 0; i < spec.d; ++i) ones.set_bit(i);
      return ones;
    }());
    for (int i = 1; i < spec.n; ++i) p.left.push_back(detail::random_bits(rng, spec.d, spec.density));
    for (int i = 0; i < spec.n; ++i) {
      BinaryVector b = detail::random_bits(rng, spec.d, spec.density);
      if (b.is_zero()) b.set_bit(rng.range(0, spec.d - 1));
      p.right.push_back(b);
    }
    return p;
  }

  if (spec.family == "complement-matched") {
    BinaryPair p;
    p.dim = spec.d;
    for (int i = 0; i < spec.n; ++i) p.left.push_back(detail::random_bits(rng, spec.d, spec.density));
    std::vector<int> order(spec.n);
    for (int i = 0; i < spec.n; ++i) order[i] = i;
    rng.shuffle(order);
    for (int i : order) {
      BinaryVector b(spec.d);
      for (int t = 0; t < spec.d; ++t) b.set_bit(t, !p.left[i].bit(t));
      p.right.push_back(b);
    }
    return p;
  }

  if (spec.family == "clustered-integer") {
    if (spec.coord_bound < 1) throw param_error("clustered-integer needs coord_bound >= 1");
    IntPair p;
    p.dim = spec.d;
    int centres = 1;
    while (centres * centres < spec.n) ++centres;
    std::vector<std::vector<std::int64_t>> centre(centres, std::vector<std::int64_t>(spec.d));
    for (auto& c : centre)
      for (auto& x : c) x = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.coord_bound)));
    std::int64_t jitter = std::max<std::int64_t>(1, spec.coord_bound / 8);
    auto point = [&] {
      const auto& c = centre[rng.below(static_cast<std::uint64_t>(centres))];
      std::vector<Int> coords(spec.d);
      for (int t = 0; t < spec.d; ++t) {
        std::int64_t x = c[t] + rng.range(static_cast<int>(-jitter), static_cast<int>(jitter));
        coords[t] = std::clamp<std::int64_t>(x, 1, spec.coord_bound);
      }
      return IntVector(std::move(coords));
    };
    for (int i = 0; i < spec.n; ++i) p.left.push_back(point());
    for (int i = 0; i < spec.n; ++i) p.right.push_back(point());
    return p;
  }

  throw param_error("unknown generator family");
}

}  // namespace ovemd
