#pragma once

#include <optional>
#include <utility>

#include "waring/factorization.hpp"
#include "waring/modular.hpp"
#include "waring/natural.hpp"

namespace waring {

namespace detail {

// a^2 + b^2 = p for prime p = 1 (mod 4): descend from a square root of -1.
inline std::pair<Natural, Natural> gaussian_prime_split(const Natural& p) {
  auto s = sqrt_mod_prime(p - 1, p);
  if (!s) throw internal_error("two_squares", "-1 not a QR mod p = 1 (mod 4)");
  Natural u0 = p, u1 = *s;
  const Natural bound = isqrt(p);
  while (u1 > bound) {
    Natural r = u0 % u1;
    u0 = u1;
    u1 = r;
  }
  Natural a = u1;
  Natural b = isqrt(p - a * a);
  return {a, b};
}

}  // namespace detail

// Decomposes n = x^2 + y^2 with x >= y via the Gaussian-integer product over
// the factorization of n; the fixed construction makes the output a pure
// function of n. With require_positive, only solutions with y >= 1 qualify
// (such a solution exists iff n has a prime factor = 1 (mod 4) or v2(n) is
// odd; otherwise the representation is unique with y = 0).
inline std::optional<std::pair<Natural, Natural>> two_squares(
    const Natural& n, bool require_positive,
    std::uint64_t rho_budget = kDefaultRhoBudget) {
  if (n == 0) {
    if (require_positive) return std::nullopt;
    return std::make_pair(Natural(0), Natural(0));
  }
  Factorization f = factorize(n, rho_budget);
  for (const auto& e : f.factors)
    if (e.prime % 4 == 3 && e.multiplicity % 2 == 1) return std::nullopt;

  // Gaussian product; cpp_int is signed, so track (re, im) directly.
  Natural re = 1, im = 0;
  auto cmul = [&](const Natural& a, const Natural& b) {
    Natural nre = re * a - im * b;
    Natural nim = re * b + im * a;
    re = nre;
    im = nim;
  };
  for (const auto& e : f.factors) {
    if (e.prime == 2) {
      for (unsigned i = 0; i < e.multiplicity; ++i) cmul(1, 1);
    } else if (e.prime % 4 == 1) {
      auto [a, b] = detail::gaussian_prime_split(e.prime);
      for (unsigned i = 0; i < e.multiplicity; ++i) cmul(a, b);
    } else {
      Natural scale = pow_nat(e.prime, e.multiplicity / 2);
      re *= scale;
      im *= scale;
    }
  }
  Natural x = boost::multiprecision::abs(re);
  Natural y = boost::multiprecision::abs(im);
  if (x < y) std::swap(x, y);
  if (require_positive && y == 0) return std::nullopt;
  return std::make_pair(x, y);
}

}  // namespace waring
