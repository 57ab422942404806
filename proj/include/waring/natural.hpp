#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace waring {

// Arbitrary-precision non-negative integer. All pipeline arithmetic is exact;
// callers must not rely on wraparound anywhere.
using Natural = boost::multiprecision::cpp_int;

// Exact rational, used for the feasibility calculus and window arithmetic.
using Rational = boost::multiprecision::cpp_rational;

inline bool fits_u64(const Natural& n) {
  return n >= 0 && n <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_u64(const Natural& n) {
  return static_cast<std::uint64_t>(n);
}

// floor(sqrt(n))
inline Natural isqrt(const Natural& n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative argument");
  return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const Natural& n, Natural* root = nullptr) {
  if (n < 0) return false;
  Natural r = isqrt(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

inline Natural pow_nat(const Natural& base, unsigned long exp) {
  Natural result = 1;
  Natural b = base;
  unsigned long e = exp;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

// floor(n^(1/k)) via Newton iteration.
inline Natural ikroot(const Natural& n, unsigned long k) {
  if (n < 0) throw std::invalid_argument("ikroot: negative argument");
  if (k == 0) throw std::invalid_argument("ikroot: zero index");
  if (n <= 1 || k == 1) return n;
  // initial guess from bit length
  const unsigned long bits = boost::multiprecision::msb(n) + 1;
  Natural x = Natural(1) << (bits / k + 1);
  while (true) {
    // x_{next} = ((k-1)x + n / x^(k-1)) / k
    Natural xk1 = pow_nat(x, k - 1);
    Natural next = (Natural(k - 1) * x + n / xk1) / k;
    if (next >= x) break;
    x = next;
  }
  while (pow_nat(x, k) > n) --x;
  while (pow_nat(x + 1, k) <= n) ++x;
  return x;
}

// splitmix64: the fixed PRNG used for deterministic seed schedules.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Low 64 bits of a Natural, for seeding.
inline std::uint64_t low_bits(const Natural& n) {
  return static_cast<std::uint64_t>(n & std::numeric_limits<std::uint64_t>::max());
}

inline std::string dec(const Natural& n) { return n.str(); }

inline Natural parse_natural(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_natural: empty string");
  for (char c : s)
    if (c < '0' || c > '9')
      throw std::invalid_argument("parse_natural: non-digit in \"" + s + "\"");
  return Natural(s);
}

}  // namespace waring
