#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "waring/errors.hpp"
#include "waring/natural.hpp"
#include "waring/primality.hpp"

namespace waring {

struct FactorEntry {
  Natural prime;
  unsigned multiplicity = 0;
};

// Complete factorization unless `unfactored` is set, in which case the listed
// part times the cofactor equals the input value.
struct Factorization {
  std::vector<FactorEntry> factors;  // primes strictly increasing
  std::optional<Natural> unfactored;

  bool complete() const { return !unfactored.has_value(); }

  Natural value() const {
    Natural v = 1;
    for (const auto& f : factors) v *= pow_nat(f.prime, f.multiplicity);
    if (unfactored) v *= *unfactored;
    return v;
  }
};

// Thrown when the rho iteration cap is hit; carries what was found so far.
class FactorBudgetError : public Error {
 public:
  FactorBudgetError(Factorization partial, const std::string& what)
      : Error(Errc::budget, "factorize", what), partial_(std::move(partial)) {}

  const Factorization& partial() const { return partial_; }

 private:
  Factorization partial_;
};

// Total Brent-rho iterations allowed per factorize() call.
inline constexpr std::uint64_t kDefaultRhoBudget = std::uint64_t(1) << 32;

namespace detail {

inline std::uint64_t brent_rho_u64(std::uint64_t n, std::uint64_t& budget) {
  // n odd composite, no factor below the trial-division bound.
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1, q = 1, ys = 0;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    while (d == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && d == 1; k += m) {
        ys = y;
        const std::uint64_t bound = std::min(m, r - k);
        for (std::uint64_t i = 0; i < bound; ++i) {
          y = f(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        if (budget < bound) return 0;
        budget -= bound;
        d = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (d == n) {
      // backtrack one step at a time
      do {
        ys = f(ys);
        d = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

inline Natural brent_rho_big(const Natural& n, std::uint64_t& budget) {
  for (std::uint64_t c = 1;; ++c) {
    Natural x = 2, y = 2, d = 1, q = 1, ys = 0;
    const std::uint64_t m = 64;
    std::uint64_t r = 1;
    auto f = [&](const Natural& v) { return (v * v + c) % n; };
    while (d == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && d == 1; k += m) {
        ys = y;
        const std::uint64_t bound = std::min(m, r - k);
        for (std::uint64_t i = 0; i < bound; ++i) {
          y = f(y);
          q = (q * boost::multiprecision::abs(x - y)) % n;
        }
        if (budget < bound) return 0;
        budget -= bound;
        d = boost::multiprecision::gcd(q, n);
      }
      r <<= 1;
    }
    if (d == n) {
      do {
        ys = f(ys);
        d = boost::multiprecision::gcd(boost::multiprecision::abs(x - ys), n);
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

inline void factor_rec(const Natural& n, std::map<Natural, unsigned>& out,
                       std::uint64_t& budget, bool& exhausted,
                       std::vector<Natural>& leftovers) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Natural d;
  if (fits_u64(n)) {
    std::uint64_t d64 = brent_rho_u64(to_u64(n), budget);
    d = d64;
  } else {
    d = brent_rho_big(n, budget);
  }
  if (d == 0) {
    exhausted = true;
    leftovers.push_back(n);
    return;
  }
  factor_rec(d, out, budget, exhausted, leftovers);
  if (exhausted) {
    leftovers.push_back(n / d);
    return;
  }
  factor_rec(n / d, out, budget, exhausted, leftovers);
}

}  // namespace detail

// Trial division by primes < 10^4, then Brent rho with a fixed seed schedule
// (c = 1, 2, ... from x0 = 2), each factor certified by is_prime. Throws
// FactorBudgetError carrying the partial result if the iteration cap is hit.
inline Factorization factorize(const Natural& n,
                               std::uint64_t rho_budget = kDefaultRhoBudget) {
  if (n < 1) throw input_error("factorize: argument must be >= 1");
  std::map<Natural, unsigned> found;
  Natural rest = n;
  for (std::uint32_t p : detail::small_primes()) {
    if (Natural(p) * p > rest) break;
    while (rest % p == 0) {
      rest /= p;
      ++found[p];
    }
  }
  bool exhausted = false;
  std::vector<Natural> leftovers;
  if (rest > 1) {
    if (rest < Natural(10000) * 10000) {
      ++found[rest];  // below trial bound squared, must be prime
    } else {
      detail::factor_rec(rest, found, rho_budget, exhausted, leftovers);
    }
  }
  Factorization result;
  for (auto& [p, e] : found) result.factors.push_back({p, e});
  if (exhausted) {
    Natural cof = 1;
    for (const Natural& l : leftovers) cof *= l;
    result.unfactored = cof;
    throw FactorBudgetError(result, "factorize: rho iteration budget exhausted");
  }
  return result;
}

// n = t * m^2 with m^2 the largest square divisor, so t is squarefree.
inline std::pair<Natural, Natural> square_split(
    const Natural& n, std::uint64_t rho_budget = kDefaultRhoBudget) {
  Factorization f = factorize(n, rho_budget);
  Natural t = 1, m = 1;
  for (const auto& e : f.factors) {
    if (e.multiplicity % 2 == 1) t *= e.prime;
    m *= pow_nat(e.prime, e.multiplicity / 2);
  }
  return {t, m};
}

}  // namespace waring
