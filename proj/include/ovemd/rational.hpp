#pragma once

// Exact rational exponents.  The sampling thresholds and duplication counts all
// have the form  s * n^(p/q)  compared against integers; doing those comparisons
// in floating point would make marking decisions depend on libm rounding, so
// everything here reduces to big-integer power comparisons.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "ovemd/errors.hpp"

namespace ovemd {

using Int = boost::multiprecision::cpp_int;

struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Ratio() = default;
  Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw param_error("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  bool positive() const { return num > 0; }
  bool operator==(const Ratio&) const = default;
};

// Accepts "p/q", plain integers, and decimal literals ("0.7" -> 7/10), all exact.
inline Ratio parse_ratio(const std::string& text) {
  if (text.empty()) throw param_error("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Ratio(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Ratio(std::stoll(text), 1);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::int64_t den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) {
    if (den > std::numeric_limits<std::int64_t>::max() / 10) throw param_error("rational literal too long");
    den *= 10;
  }
  return Ratio(std::stoll(digits), den);
}

inline std::string to_string(const Ratio& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

inline Int int_pow(Int base, std::uint64_t e) {
  Int r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// floor(sqrt(v)) by Newton iteration; exact for any nonnegative cpp_int.
inline Int isqrt(const Int& v) {
  if (v < 0) throw param_error("isqrt of negative value");
  if (v < 2) return v;
  Int x = Int(1) << (msb(v) / 2 + 1);
  for (;;) {
    Int y = (x + v / x) / 2;
    if (y >= x) break;
    x = y;
  }
  return x;
}

// smallest c with c >= scale * n^(p/q); exact (c >= x  iff  c^q >= x^q for x >= 0).
inline Int ceil_scaled_pow(const Int& n, const Ratio& e, const Int& scale = 1) {
  if (n < 0 || scale < 0 || e.num < 0) throw param_error("ceil_scaled_pow needs nonnegative inputs");
  Int target = int_pow(scale, static_cast<std::uint64_t>(e.den)) * int_pow(n, static_cast<std::uint64_t>(e.num));
  if (target == 0) return 0;
  Int lo = 0, hi = 1;
  auto ok = [&](const Int& c) { return int_pow(c, static_cast<std::uint64_t>(e.den)) >= target; };
  while (!ok(hi)) { lo = hi; hi *= 2; }
  while (lo + 1 < hi) {
    Int mid = (lo + hi) / 2;
    if (ok(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

// largest b with b <= n^(p/q).
inline Int floor_pow(const Int& n, const Ratio& e) {
  Int c = ceil_scaled_pow(n, e);
  Int target = int_pow(n, static_cast<std::uint64_t>(e.num));
  if (int_pow(c, static_cast<std::uint64_t>(e.den)) == target) return c;
  return c - 1;
}

// a/b >= n^(p/q), all terms nonnegative, b > 0.
inline bool ratio_ge_pow(const Int& a, const Int& b, const Int& n, const Ratio& e) {
  if (b <= 0) throw param_error("ratio_ge_pow with nonpositive denominator");
  auto q = static_cast<std::uint64_t>(e.den);
  return int_pow(a, q) >= int_pow(b, q) * int_pow(n, static_cast<std::uint64_t>(e.num));
}

// v > scale * n^(p/q), all nonnegative.
inline bool int_gt_scaled_pow(const Int& v, const Int& n, const Ratio& e, const Int& scale = 1) {
  auto q = static_cast<std::uint64_t>(e.den);
  return int_pow(v, q) > int_pow(scale, q) * int_pow(n, static_cast<std::uint64_t>(e.num));
}

}  // namespace ovemd
