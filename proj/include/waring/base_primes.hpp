#pragma once

#include <vector>

#include "waring/exponent_tuple.hpp"
#include "waring/natural.hpp"
#include "waring/policy.hpp"
#include "waring/primality.hpp"

namespace waring {

// The pool primes varpi_1 < ... < varpi_{t-1}: each coprime to 30K, the last
// not dividing n. Omega(u) = varpi_1 ... varpi_u with Omega(0) = 1.
struct BasePrimes {
  std::vector<Natural> primes;

  std::size_t count() const { return primes.size(); }

  const Natural& at(std::size_t i) const { return primes.at(i - 1); }  // 1-based

  Natural omega(std::size_t u) const {
    Natural prod = 1;
    for (std::size_t i = 0; i < u; ++i) prod *= primes.at(i);
    return prod;
  }
};

// t-1 smallest admissible primes above the policy floor (paper-faithful:
// above K^10), skipping `skip` admissible candidates first so retries draw a
// fresh set. The last slot additionally avoids divisors of n.
inline BasePrimes select_base_primes(const Natural& n, const ExponentTuple& k,
                                     const BoundPolicy& policy, unsigned skip = 0) {
  BasePrimes base;
  if (k.t() <= 1) return base;
  const Natural K = k.K();
  Natural floor = policy.base_prime_floor;
  if (policy.mode == PolicyMode::paper_faithful) {
    Natural k10 = 1;
    for (int i = 0; i < 10; ++i) k10 *= K;
    if (k10 > floor) floor = k10;
  }
  const Natural avoid = 30 * K;
  Natural p = floor;
  unsigned skipped = 0;
  while (base.count() < k.t() - 1) {
    p = next_prime(p);
    if (boost::multiprecision::gcd(p, avoid) != 1) continue;
    if (skipped < skip) {
      ++skipped;
      continue;
    }
    if (base.count() == k.t() - 2 && n % p == 0) continue;  // last slot
    base.primes.push_back(p);
  }
  return base;
}

}  // namespace waring
