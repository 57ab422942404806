#pragma once

#include <optional>
#include <vector>

#include "waring/errors.hpp"
#include "waring/natural.hpp"
#include "waring/primality.hpp"

namespace waring {

// b^e mod q, q >= 1.
inline Natural mod_pow(const Natural& b, const Natural& e, const Natural& q) {
  if (q < 1) throw input_error("mod_pow: modulus must be >= 1");
  if (q == 1) return 0;
  return boost::multiprecision::powm(b % q, e, q);
}

// Inverse of a modulo m, gcd(a, m) = 1.
inline Natural mod_inverse(const Natural& a, const Natural& m) {
  using boost::multiprecision::cpp_int;
  cpp_int old_r = a % m, r = m;
  cpp_int old_s = 1, s = 0;
  while (r != 0) {
    cpp_int quot = old_r / r;
    cpp_int tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw input_error("mod_inverse: arguments not coprime");
  cpp_int res = old_s % cpp_int(m);
  if (res < 0) res += m;
  return Natural(res);
}

// True iff y^k = m (mod varpi) is soluble, by the power-residue criterion
// m^((varpi-1)/d) = 1 with d = gcd(k, varpi - 1). Requires varpi prime, varpi
// coprime to m.
inline bool kth_power_residue(const Natural& m, unsigned long k, const Natural& varpi) {
  if (varpi < 2) throw input_error("kth_power_residue: modulus must be prime");
  if (m % varpi == 0)
    throw input_error("kth_power_residue: varpi divides m");
  if (varpi == 2) return true;
  Natural d = boost::multiprecision::gcd(Natural(k), varpi - 1);
  return mod_pow(m, (varpi - 1) / d, varpi) == 1;
}

// Smallest root of z^k = m (mod varpi), or nullopt. Enumeration; varpi is a
// small prime in every caller.
inline std::optional<Natural> kth_root_mod_prime(const Natural& m, unsigned long k,
                                                 const Natural& varpi) {
  Natural target = m % varpi;
  for (Natural z = target == 0 ? 0 : 1; z < varpi; ++z)
    if (mod_pow(z, k, varpi) == target) return z;
  return std::nullopt;
}

// Lifts z0 with z0^k = m (mod varpi) to the unique z in [1, varpi^l] with
// z^k = m (mod varpi^l) and z = z0 (mod varpi). Requires the derivative
// k*z0^(k-1) to be a unit mod varpi.
inline Natural hensel_lift_power(const Natural& z0, unsigned long k, const Natural& m,
                                 const Natural& varpi, unsigned long l) {
  if (l < 1) throw input_error("hensel_lift_power: level must be >= 1");
  if (z0 % varpi == 0 || Natural(k) % varpi == 0)
    throw input_error("hensel_lift_power: derivative k*z0^(k-1) vanishes mod varpi");
  if (mod_pow(z0, k, varpi) != m % varpi)
    throw input_error("hensel_lift_power: z0^k != m (mod varpi)");
  // derivative inverse mod varpi, reused at every level
  Natural deriv = (Natural(k) * mod_pow(z0, k - 1, varpi)) % varpi;
  Natural dinv = mod_inverse(deriv, varpi);
  Natural z = z0 % varpi;
  if (z == 0) z = varpi;  // unreachable given preconditions
  Natural mod = varpi;
  for (unsigned long level = 1; level < l; ++level) {
    Natural next_mod = mod * varpi;
    Natural f = (mod_pow(z, k, next_mod) + next_mod - m % next_mod) % next_mod;
    // f is divisible by varpi^level; correct z by t*varpi^level
    Natural t = ((f / mod) % varpi) * dinv % varpi;
    z = (z + next_mod - t % varpi * mod % next_mod) % next_mod;
    mod = next_mod;
  }
  if (z == 0) z = mod;
  return z;
}

struct Congruence {
  Natural residue;
  Natural modulus;  // >= 2
};

using CongruenceSystem = std::vector<Congruence>;

// Unique x in [1, prod moduli] satisfying every congruence. Moduli must be
// pairwise coprime. The representative lands in [1, M] rather than [0, M-1].
inline Natural crt_solve(const CongruenceSystem& sys) {
  if (sys.empty()) throw input_error("crt_solve: empty system");
  Natural x = 0, m = 1;
  for (const auto& c : sys) {
    if (c.modulus < 2) throw input_error("crt_solve: modulus must be >= 2");
    if (c.residue >= c.modulus) throw input_error("crt_solve: residue not reduced");
    Natural g = boost::multiprecision::gcd(m, c.modulus);
    if (g != 1) throw input_error("crt_solve: moduli not pairwise coprime");
    // x + m*t = residue (mod modulus)
    Natural t = ((c.residue + c.modulus - x % c.modulus) % c.modulus) *
                mod_inverse(m % c.modulus, c.modulus) % c.modulus;
    x += m * t;
    m *= c.modulus;
  }
  return x == 0 ? m : x;
}

// Square root of a modulo odd prime p (a a quadratic residue), Tonelli-Shanks
// with the non-residue found by ascending search so the output is fixed.
inline std::optional<Natural> sqrt_mod_prime(const Natural& a_in, const Natural& p) {
  Natural a = a_in % p;
  if (a == 0) return Natural(0);
  if (p == 2) return a;
  if (mod_pow(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) {
    Natural r = mod_pow(a, (p + 1) / 4, p);
    return std::min(r, Natural(p - r));
  }
  Natural q = p - 1;
  unsigned long s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  Natural z = 2;
  while (mod_pow(z, (p - 1) / 2, p) != p - 1) ++z;
  Natural c = mod_pow(z, q, p);
  Natural r = mod_pow(a, (q + 1) / 2, p);
  Natural t = mod_pow(a, q, p);
  unsigned long m = s;
  while (t != 1) {
    Natural tt = t;
    unsigned long i = 0;
    while (tt != 1) {
      tt = (tt * tt) % p;
      ++i;
    }
    Natural b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = (b * b) % p;
    r = (r * b) % p;
    c = (b * b) % p;
    t = (t * c) % p;
    m = i;
  }
  return std::min(r, Natural(p - r));
}

}  // namespace waring
