#pragma once

#include <optional>

#include "waring/modular.hpp"
#include "waring/natural.hpp"
#include "waring/primality.hpp"

namespace waring {

// Smallest prime p in (lo, hi] with p = sys and gcd(p, avoid) = 1, stepping
// through the combined progression. Absence is a legitimate outcome.
inline std::optional<Natural> find_prime_in_ap(const CongruenceSystem& sys,
                                               const Natural& lo, const Natural& hi,
                                               const Natural& avoid = 1) {
  if (lo >= hi) throw input_error("find_prime_in_ap: empty range");
  Natural a = 1, mod = 1;
  if (!sys.empty()) {
    a = crt_solve(sys);  // in [1, mod]
    for (const auto& c : sys) mod *= c.modulus;
    a %= mod;            // progression offset in [0, mod)
  }
  Natural g = boost::multiprecision::gcd(a, mod);
  if (g != 1) {
    // Every progression member is divisible by g; only g itself can be prime.
    if (g > lo && g <= hi && g % mod == a && is_prime(g) &&
        boost::multiprecision::gcd(g, avoid) == 1)
      return g;
    return std::nullopt;
  }
  Natural x = lo + 1;
  Natural r = x % mod;
  if (r != a) x += (a + mod - r) % mod;
  for (; x <= hi; x += mod) {
    if (x < 2) continue;
    if (boost::multiprecision::gcd(x, avoid) != 1) continue;
    if (is_prime(x)) return x;
  }
  return std::nullopt;
}

}  // namespace waring
