#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "waring/natural.hpp"

namespace waring {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = m == 1 ? 0 : 1;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

inline bool miller_rabin_u64(std::uint64_t n, std::uint64_t base) {
  if (base % n == 0) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod_u64(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Deterministic for all n < 2^64 with this witness set.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                          19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  for (std::uint64_t base : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL,
                             9780504ULL, 1795265022ULL}) {
    if (!miller_rabin_u64(n, base)) return false;
  }
  return true;
}

inline bool miller_rabin_big(const Natural& n, const Natural& base) {
  if (base % n == 0) return true;
  Natural d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  Natural x = boost::multiprecision::powm(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = [] {
    constexpr std::uint32_t limit = 10000;
    std::vector<bool> sieve(limit + 1, true);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (!sieve[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= limit; j += i)
        sieve[static_cast<std::size_t>(j)] = false;
    }
    return primes;
  }();
  return table;
}

}  // namespace detail

// Deterministic below 2^64 (fixed witness set); 40-round strong probable-prime
// test above, with bases drawn from a splitmix64 stream seeded by n itself so
// the answer is a pure function of n.
inline bool is_prime(const Natural& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return detail::is_prime_u64(to_u64(n));
  for (std::uint32_t p : detail::small_primes())
    if (n % p == 0) return false;
  std::uint64_t seed = low_bits(n) ^ 0xd1b54a32d192ed03ULL;
  for (int round = 0; round < 40; ++round) {
    Natural base = 2 + Natural(splitmix64(seed)) % (n - 3);
    if (!detail::miller_rabin_big(n, base)) return false;
  }
  return true;
}

// Smallest prime strictly greater than n. Unbounded ascending search.
inline Natural next_prime(Natural n) {
  if (n < 2) return 2;
  ++n;
  if ((n & 1) == 0) ++n;
  while (!is_prime(n)) n += 2;
  return n;
}

}  // namespace waring
