#pragma once

#include "waring/errors.hpp"
#include "waring/modular.hpp"
#include "waring/natural.hpp"
#include "waring/primality.hpp"

namespace waring {

// Odd prime varpi <= cap with (m*D, varpi) = 1, varpi not dividing k, and m a
// k-th power residue mod varpi, so y^k = m (mod varpi^h) is soluble for every
// h. Odd k: ascending primes = 2 (mod k), where gcd(varpi-1, k) = 1 makes
// every coprime m a residue. Even k: plain ascending search testing the
// residue condition directly (unconditional stand-in for the conditional
// small-prime bound).
inline Natural find_residue_prime(const Natural& m, unsigned long k,
                                  const Natural& avoid, const Natural& cap) {
  if (m < 2) throw input_error("find_residue_prime: m must be >= 2");
  if (k % 2 == 1) {
    for (Natural c = 2 + k; c <= cap; c += k) {
      if (c % 2 == 0) continue;
      if (!is_prime(c)) continue;
      if (m % c == 0 || avoid % c == 0 || Natural(k) % c == 0) continue;
      if (!kth_power_residue(m, k, c)) continue;  // holds by Fermat; re-checked
      return c;
    }
  } else {
    Natural p = 2;
    while (true) {
      p = next_prime(p);
      if (p > cap) break;
      if (m % p == 0 || avoid % p == 0 || Natural(k) % p == 0) continue;
      if (!kth_power_residue(m, k, p)) continue;
      return p;
    }
  }
  throw construction_error("find_residue_prime",
                           "no admissible prime up to " + dec(cap) +
                               " for exponent " + std::to_string(k));
}

}  // namespace waring
