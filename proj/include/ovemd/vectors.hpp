#pragma once

// Point types shared by every reduction: packed 0/1 vectors for the Boolean
// problems and exact big-integer vectors for the geometric ones.  All squared
// quantities stay in exact integer arithmetic; square roots happen only inside
// the matching solvers.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "ovemd/errors.hpp"
#include "ovemd/rational.hpp"

namespace ovemd {

class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(int dim) : dim_(dim), w_((dim + 63) / 64, 0) {
    if (dim < 0) throw shape_error("negative dimension");
  }

  static BinaryVector from_bits(const std::vector<int>& bits) {
    BinaryVector v(static_cast<int>(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != 0 && bits[i] != 1) throw shape_error("binary coordinate not 0/1");
      if (bits[i]) v.set_bit(static_cast<int>(i));
    }
    return v;
  }

  int dim() const { return dim_; }
  bool bit(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set_bit(int i, bool value = true) {
    std::uint64_t mask = 1ull << (i & 63);
    if (value) w_[i >> 6] |= mask; else w_[i >> 6] &= ~mask;
  }

  int weight() const {
    int s = 0;
    for (auto w : w_) s += std::popcount(w);
    return s;
  }

  bool is_zero() const {
    for (auto w : w_) if (w) return false;
    return true;
  }

  std::vector<int> bits() const {
    std::vector<int> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = bit(i) ? 1 : 0;
    return out;
  }

  bool operator==(const BinaryVector&) const = default;

  friend int dot(const BinaryVector& a, const BinaryVector& b) {
    if (a.dim_ != b.dim_) throw shape_error("dot: dimension mismatch");
    int s = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) s += std::popcount(a.w_[i] & b.w_[i]);
    return s;
  }

  // (a_i - b_i)^2 is just the XOR bit for 0/1 entries.
  friend int sq_dist(const BinaryVector& a, const BinaryVector& b) {
    if (a.dim_ != b.dim_) throw shape_error("sq_dist: dimension mismatch");
    int s = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) s += std::popcount(a.w_[i] ^ b.w_[i]);
    return s;
  }

 private:
  int dim_ = 0;
  std::vector<std::uint64_t> w_;
};

// Exact integer point.  Coordinates are capped at |x| < 2^127 so that any
// squared distance fits in 255 bits; out-of-range input is a capacity error,
// not silent wraparound (the backing type itself is arbitrary precision).
class IntVector {
 public:
  static constexpr int kCoordBits = 127;

  IntVector() = default;
  explicit IntVector(std::vector<Int> coords) : c_(std::move(coords)) {
    for (const Int& x : c_) check_coord(x);
  }
  IntVector(std::initializer_list<Int> coords) : IntVector(std::vector<Int>(coords)) {}

  int dim() const { return static_cast<int>(c_.size()); }
  const Int& operator[](int i) const { return c_[i]; }
  Int& operator[](int i) { return c_[i]; }
  const std::vector<Int>& coords() const { return c_; }

  void push_back(Int x) {
    check_coord(x);
    c_.push_back(std::move(x));
  }

  Int norm_sq() const {
    Int s = 0;
    for (const Int& x : c_) s += x * x;
    return s;
  }

  bool operator==(const IntVector&) const = default;

  static void check_coord(const Int& x) {
    static const Int bound = Int(1) << kCoordBits;
    if (x >= bound || x <= -bound) throw capacity_error("coordinate exceeds 127 bits");
  }

 private:
  std::vector<Int> c_;
};

inline Int dot(const IntVector& a, const IntVector& b) {
  if (a.dim() != b.dim()) throw shape_error("dot: dimension mismatch");
  Int s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline Int sq_dist(const IntVector& a, const IntVector& b) {
  if (a.dim() != b.dim()) throw shape_error("sq_dist: dimension mismatch");
  Int s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    Int diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// z -> (2z, 1): forces an odd squared norm and scales every squared distance
// by exactly 4.  Applied uniformly, even when the input norm is already odd.
inline IntVector parity_lift(const IntVector& z) {
  std::vector<Int> out;
  out.reserve(z.dim() + 1);
  for (int i = 0; i < z.dim(); ++i) out.push_back(2 * z[i]);
  out.push_back(1);
  return IntVector(std::move(out));  // doubling past 127 bits surfaces as capacity_error
}

template <class V>
struct PointSetPair {
  std::vector<V> left, right;
  int dim = 0;
};

using BinaryPair = PointSetPair<BinaryVector>;
using IntPair = PointSetPair<IntVector>;

template <class V>
inline void check_pair_shape(const PointSetPair<V>& p) {
  for (const auto& v : p.left)
    if (v.dim() != p.dim) throw shape_error("left vector dimension mismatch");
  for (const auto& v : p.right)
    if (v.dim() != p.dim) throw shape_error("right vector dimension mismatch");
}

}  // namespace ovemd
