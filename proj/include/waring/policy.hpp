#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "waring/errors.hpp"
#include "waring/natural.hpp"

namespace waring {

enum class PolicyMode { desk_scale, paper_faithful };

inline std::string policy_mode_name(PolicyMode m) {
  return m == PolicyMode::desk_scale ? "desk-scale" : "paper-faithful";
}

// Window and budget knobs. Paper-faithful keeps the asymptotic shapes
// (log-power window factors, K^10 prime floor, h >= 1 mandatory). Desk-scale
// swaps the log factors for the slack exponent `s`, floors base primes just
// above 5, and degrades a step to h = 0 when no h >= 1 fits the window --
// at accessible n the modulus varpi^(6K) alone exceeds n^(1/k_t), so without
// that degradation no step exists at all.
struct BoundPolicy {
  PolicyMode mode = PolicyMode::desk_scale;
  Rational c_base = Rational(2);      // 2 (GRH flavour) or 12/5 (unconditional)
  Rational epsilon = Rational(1, 1000);
  Rational omega = Rational(1);       // exponent-window scaling, (0, 1]
  Rational nu = Rational(1, 1000);    // target offset for gamma(k; omega)
  Rational slack = Rational(1, 2);    // desk-scale exponent budget s in (0, 1]

  Natural base_prime_floor = 5;       // desk-scale: primes above this
  Natural residue_prime_cap = 1000000;
  unsigned retries = 8;
  Natural min_n = Natural("10000000000");  // 1e10

  std::uint64_t budget_z = 1000000;   // ternary sweep: z values tried
  std::uint64_t budget_rho = std::uint64_t(1) << 32;
  std::uint64_t rho_per_candidate = std::uint64_t(1) << 22;
  unsigned workers = 1;

  bool allow_degenerate_steps() const { return mode == PolicyMode::desk_scale; }

  // c = c_base + 2*epsilon
  Rational c() const { return c_base + 2 * epsilon; }

  static BoundPolicy desk() { return BoundPolicy{}; }

  static BoundPolicy paper() {
    BoundPolicy p;
    p.mode = PolicyMode::paper_faithful;
    p.slack = 1;
    return p;
  }
};

// ln of a Natural via its top 63 bits; only used to size windows, never in a
// congruence or feasibility decision.
inline long double ln_natural(const Natural& n) {
  if (n <= 0) throw input_error("ln_natural: argument must be positive");
  const unsigned long b = boost::multiprecision::msb(n);
  if (b <= 62) return std::log(static_cast<long double>(to_u64(n)));
  const std::uint64_t top = to_u64(n >> (b - 62));
  return std::log(static_cast<long double>(top)) +
         static_cast<long double>(b - 62) * 0.6931471805599453094L;
}

// Largest h >= 0 with varpi^(6K h) below the step budget.
//   desk-scale:      varpi^(6K h) <= m^(omega * s / k_u), exact powering
//                    (omega*s/k_u snapped to denominator <= 64 first);
//   paper-faithful:  varpi^(6K h) <= m^(omega / k_u) * (ln m)^(-logpow),
//                    sized through long-double logs.
// y_factor bounds the CRT-shift inflation y <= y_factor * varpi^(6Kh); the
// guard (y_factor * varpi^(6Kh))^(k_u) < m keeps the residual positive, the
// role the asymptotic log-power factor plays in the size condition.
inline unsigned long step_h_max(const Natural& varpi, const Natural& sixK,
                                const Natural& m, unsigned long k_u,
                                unsigned long logpow, const BoundPolicy& policy,
                                const Natural& y_factor = 32) {
  if (!fits_u64(sixK)) throw construction_error("h-window", "6K too large");
  const std::uint64_t sk = to_u64(sixK);
  auto guard_ok = [&](unsigned long h) {
    return pow_nat(y_factor * pow_nat(varpi, sk * h), k_u) < m;
  };
  if (policy.mode == PolicyMode::paper_faithful) {
    const long double lm = ln_natural(m);
    const long double omega = static_cast<long double>(
        boost::multiprecision::numerator(policy.omega).convert_to<double>() /
        boost::multiprecision::denominator(policy.omega).convert_to<double>());
    const long double budget_ln =
        omega / k_u * lm - logpow * std::log(lm);
    const long double denom = sk * ln_natural(varpi);
    if (budget_ln <= 0 || denom <= 0) return 0;
    long double hf = std::floor(budget_ln / denom);
    unsigned long h = hf < 0 ? 0ul : static_cast<unsigned long>(hf);
    while (h > 0 && !guard_ok(h)) --h;
    return h;
  }
  Rational expo = policy.omega * policy.slack / k_u;
  Natural num = boost::multiprecision::numerator(expo);
  Natural den = boost::multiprecision::denominator(expo);
  if (den > 64) {  // snap, shrinking the window slightly
    num = num * 64 / den;
    den = 64;
  }
  if (num == 0 || !fits_u64(num) || !fits_u64(den)) return 0;
  unsigned long h = 0;
  const Natural rhs = pow_nat(m, to_u64(num));
  while (h < 4096) {
    Natural lhs = pow_nat(varpi, sk * (h + 1) * to_u64(den));
    if (lhs > rhs || !guard_ok(h + 1)) break;
    ++h;
  }
  return h;
}

}  // namespace waring
