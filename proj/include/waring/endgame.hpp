#pragma once

#include <optional>
#include <string>

#include "waring/descent.hpp"
#include "waring/errors.hpp"
#include "waring/factorization.hpp"
#include "waring/modular.hpp"
#include "waring/natural.hpp"
#include "waring/policy.hpp"
#include "waring/prime_search.hpp"
#include "waring/ternary.hpp"

namespace waring {

// Output of the 5-adic endgame: the residual m_0 is rewritten as
// m_0 = N + 2 lambda^2 p^3 with 5^(2h) || N, setting up the ternary instance
// N = T M^2, M = 5^h.
struct EndgameData {
  Natural lambda;     // Upsilon_0, an odd perfect square coprime to 30 m
  unsigned long h = 0;
  Natural B;          // cube-root lift: 2 lambda^2 B^3 = m (mod 5^(2h))
  unsigned nu = 0;    // branch: p = B + nu * 5^(2h)  (mod 5^(2h+1))
  Natural p;
  Natural T, M, N;    // N = m - 2 lambda^2 p^3 = T M^2, M = 5^h, (T, M) = 1
};

namespace detail {

// Largest h >= 1 with lambda * (5^(2h+1))^c < (n/6)^(1/3), decided exactly:
// cube and clear the rational exponent c = a/d. Zero when even h = 1 fails.
inline unsigned long endgame_h_max(const Natural& lambda, const Rational& c,
                                   const Natural& n) {
  const Natural a = boost::multiprecision::numerator(c);
  const Natural d = boost::multiprecision::denominator(c);
  if (!fits_u64(a) || !fits_u64(d))
    throw internal_error("endgame", "unreasonable c");
  unsigned long h = 0;
  while (h < 64) {
    // (lambda^3 * 6)^d * 5^(3*(2h+3)*a) < n^d  for h+1?
    Natural lhs = pow_nat(lambda * lambda * lambda * 6, to_u64(d)) *
                  pow_nat(5, 3 * (2 * (h + 1) + 1) * to_u64(a));
    Natural rhs = pow_nat(n, to_u64(d));
    if (lhs < rhs)
      ++h;
    else
      break;
  }
  return h;
}

}  // namespace detail

// Runs the endgame on a completed descent: solve B^3 = (2 lambda^2)^(-1) m
// (mod 5), lift to 5^(2h), pick the branch with exact 5-adic valuation, then
// search p = 1 (mod 3) in the window (n/6)^(1/3) < lambda p < (n/3)^(1/3).
inline EndgameData run_endgame(const DescentState& st, const Natural& n,
                               const BoundPolicy& policy) {
  if (st.r != 0) throw input_error("run_endgame: descent not at r = 0");
  const Natural m = st.m;
  const Natural lambda = st.upsilon();
  if (m % 5 == 0 || m % 2 == 0)
    throw internal_error("endgame", "(m, 10) != 1 at r = 0");
  if (m % 3 == 2) throw internal_error("endgame", "m = 2 (mod 3) at r = 0");
  if (boost::multiprecision::gcd(lambda, 30 * m) != 1)
    throw internal_error("endgame", "(lambda, 30m) != 1");

  EndgameData eg;
  eg.lambda = lambda;

  unsigned long h = detail::endgame_h_max(lambda, policy.c(), n);
  if (h == 0) {
    if (policy.mode == PolicyMode::paper_faithful)
      throw construction_error("endgame", "empty h window");
    h = 1;  // desk-scale floor
  }
  eg.h = h;
  const Natural five_2h = pow_nat(5, 2 * h);
  const Natural five_2h1 = five_2h * 5;

  // cube roots mod 5 are a bijection: (a^3)^3 = a^9 = a (mod 5)
  const Natural target = mod_inverse(2 * lambda * lambda % 5, 5) * m % 5;
  const Natural b0 = mod_pow(target, 3, 5);
  const Natural inv2l2 = mod_inverse(2 * lambda * lambda % five_2h, five_2h);
  eg.B = hensel_lift_power(b0, 3, inv2l2 * (m % five_2h) % five_2h, 5, 2 * h);

  // window: (n/6)^(1/3) < lambda p < (n/3)^(1/3), exact cube comparisons
  const Natural l3 = lambda * lambda * lambda;
  Natural p_lo = ikroot(n / (6 * l3), 3);  // smallest p with 6 (lambda p)^3 > n
  while (6 * l3 * pow_nat(p_lo, 3) <= n) ++p_lo;
  Natural p_hi = ikroot(n / (3 * l3), 3);
  while (p_hi > 0 && 3 * l3 * pow_nat(p_hi, 3) >= n) --p_hi;
  if (p_lo > p_hi)
    throw construction_error("endgame", "empty p window (" + dec(p_lo) + ", " +
                                            dec(p_hi) + ")");

  std::optional<Natural> found;
  unsigned found_nu = 0;
  for (unsigned nu = 0; nu <= 1; ++nu) {
    const Natural r = (eg.B + nu * five_2h) % five_2h1;
    // the branch must miss the mod-5^(2h+1) root so that v5 is exactly 2h
    if (2 * lambda * lambda % five_2h1 * mod_pow(r, 3, five_2h1) % five_2h1 ==
        m % five_2h1)
      continue;
    CongruenceSystem sys{{r, five_2h1}, {1, 3}};
    auto p = find_prime_in_ap(sys, p_lo - 1, p_hi, m);
    if (p && (!found || *p < *found)) {
      found = *p;
      found_nu = nu;
    }
  }
  if (!found)
    throw construction_error("endgame",
                             "no prime in window (" + dec(p_lo) + ", " + dec(p_hi) +
                                 ") for the 5-adic progressions");
  eg.p = *found;
  eg.nu = found_nu;

  // exact valuation and the ternary instance
  const Natural shift = 2 * lambda * lambda * pow_nat(eg.p, 3);
  if (shift >= m) throw construction_error("endgame", "N = m - 2 lambda^2 p^3 <= 0");
  eg.N = m - shift;
  if (eg.N % five_2h != 0 || eg.N % five_2h1 == 0)
    throw internal_error("endgame", "5-adic valuation of N is not exactly 2h");
  eg.M = pow_nat(5, h);
  eg.T = eg.N / five_2h;
  if (boost::multiprecision::gcd(eg.N, 6 * eg.p) != 1)
    throw internal_error("endgame", "(N, 6p) != 1");
  if (!check_mod16(eg.N, eg.p))
    throw internal_error("endgame", "mod-16 solubility fails");
  return eg;
}

// Hypothesis report for the ternary existence theorems: (i) coprimality,
// (ii) local solubility mod 16, (iii) the size ratios N m^12 / p^21 and
// N / p^5 as exact rationals (the theorems' constants are ineffective, so the
// judgment stays with the caller).
struct HypothesisReport {
  bool coprime_6p = false;
  bool mod16_soluble = false;
  std::optional<Rational> ratio_21;  // N * m^12 / p^21 with N = t m^2
  Rational ratio_5;                  // N / p^5
  bool factorization_complete = false;
};

inline HypothesisReport check_theorem21_hypotheses(
    const Natural& N, const Natural& p,
    std::uint64_t rho_budget = kDefaultRhoBudget) {
  HypothesisReport rep;
  rep.coprime_6p = boost::multiprecision::gcd(N, 6 * p) == 1;
  rep.mod16_soluble = check_mod16(N, p);
  rep.ratio_5 = Rational(N, pow_nat(p, 5));
  try {
    auto [t, msq] = square_split(N, rho_budget);
    (void)t;
    rep.ratio_21 = Rational(N * pow_nat(msq, 12), pow_nat(p, 21));
    rep.factorization_complete = true;
  } catch (const FactorBudgetError&) {
    rep.factorization_complete = false;
  }
  return rep;
}

}  // namespace waring
