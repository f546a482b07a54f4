#pragma once

// Seeding scheme: one global 64-bit seed; stage s draws its own seed as
// splitmix64(global + GOLDEN * (s+1)).  Stages never share an engine, so
// inserting a new stage or reordering calls inside one stage cannot disturb
// the randomness of the others.  Bounded draws use rejection sampling on
// mt19937_64 output, which keeps generated instances identical across
// standard library implementations.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ovemd/errors.hpp"

namespace ovemd {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t stage_seed(std::uint64_t global, std::uint64_t stage) {
  return splitmix64(global + 0x9E3779B97F4A7C15ull * (stage + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw param_error("Rng::below(0)");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do { v = eng_(); } while (v >= limit);
    return v % n;
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(std::int64_t num, std::int64_t den) {  // true with probability num/den
    return below(static_cast<std::uint64_t>(den)) < static_cast<std::uint64_t>(num);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // k distinct indices from [0, n), ascending (Floyd's sampling).
  std::vector<int> sample_indices(int n, int k) {
    if (k > n) throw param_error("sample_indices: k > n");
    std::set<int> chosen;
    for (int j = n - k; j < n; ++j) {
      int t = static_cast<int>(below(static_cast<std::uint64_t>(j) + 1));
      chosen.insert(chosen.count(t) ? j : t);
    }
    return {chosen.begin(), chosen.end()};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ovemd
