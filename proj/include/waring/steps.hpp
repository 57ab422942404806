#pragma once

#include <optional>
#include <string>
#include <vector>

#include "waring/base_primes.hpp"
#include "waring/checks.hpp"
#include "waring/errors.hpp"
#include "waring/exponent_tuple.hpp"
#include "waring/modular.hpp"
#include "waring/natural.hpp"
#include "waring/policy.hpp"
#include "waring/residue_prime.hpp"
#include "waring/weil.hpp"

namespace waring {

enum class StepKind { top, mid, pair };

inline std::string step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::top: return "top";
    case StepKind::mid: return "mid";
    case StepKind::pair: return "pair";
  }
  return "?";
}

// One level-lowering step. The modulus is
// prime^(6K h); h = 0 is the desk-scale degenerate step where the CRT
// placement machinery still runs but no level is lowered.
struct StepWitness {
  StepKind kind = StepKind::top;
  unsigned stage = 0;                // stage index u; pair occupies t-1
  std::vector<unsigned> consumes;    // 1-based working-tuple stages consumed
  Natural prime;                     // the step's modulus prime
  unsigned long h = 0;
  Natural z;                         // Hensel component (0 when h = 0, top/mid)
  Natural g;                         // CRT shift: y = z + g * prime^(6Kh)
  std::optional<WeilPair> weil;      // places y mod the next pool prime
  std::optional<WeilPair> weil2;     // pair route, t >= 3
  Natural y1;                        // top/mid: the y; pair: y1
  Natural y2;                        // pair route only
  Natural m_in;
  Natural m_out;

  Natural modulus(const Natural& sixK) const {
    if (!fits_u64(sixK * h)) throw internal_error("step", "6Kh overflow");
    return pow_nat(prime, to_u64(sixK * h));
  }

  Natural consumed_amount(const ExponentTuple& k) const {
    if (kind == StepKind::pair)
      return pow_nat(y1, k.k(consumes.at(0))) + pow_nat(y2, k.k(consumes.at(1)));
    return pow_nat(y1, k.k(consumes.at(0)));
  }
};

namespace detail {

// Placement residue for y mod q: 1 exactly when the residual m - y^k would
// otherwise collide with q (q | m), except q = 3 guards m - y^k != 2 (mod 3).
inline Natural gadget_residue(const Natural& q, const Natural& value) {
  if (q == 3) return value % 3 == 2 ? 1 : 0;
  return value % q == 0 ? 1 : 0;
}

struct CrtTarget {
  Natural q;
  Natural residue;  // desired y mod q
};

// g with z + g*varpi_l = target (mod q) for every target; g in [1, prod q].
inline Natural solve_shift(const std::vector<CrtTarget>& targets, const Natural& z,
                           const Natural& varpi_l) {
  CongruenceSystem sys;
  for (const auto& t : targets) {
    Natural inv = mod_inverse(varpi_l % t.q, t.q);
    Natural r = (t.residue + t.q - z % t.q) % t.q * inv % t.q;
    sys.push_back({r, t.q});
  }
  return crt_solve(sys);
}

inline unsigned long h_to_ul(const Natural& sixK, unsigned long h) {
  if (!fits_u64(sixK * h)) throw construction_error("step", "6Kh overflow");
  return to_u64(sixK * h);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Independent condition re-check. Computes everything from the witness and
// its inputs with fresh arithmetic; constructors call it before returning and
// the certificate verifier reuses it on hostile input.
// ---------------------------------------------------------------------------
inline CheckReport recheck_step(const StepWitness& w, const ExponentTuple& k,
                                const BasePrimes& base, const BoundPolicy& policy,
                                const std::string& tag) {
  CheckReport rep;
  const Natural sixK = 6 * k.K();
  const std::size_t t = k.t();
  Natural varpi_l;
  try {
    varpi_l = w.modulus(sixK);
  } catch (const Error&) {
    rep.add(tag + ".modulus", false, "6Kh overflow");
    return rep;
  }

  // structural: y = z + g * varpi^l, prime sanity
  rep.add(tag + ".prime_is_prime", is_prime(w.prime), dec(w.prime));
  if (w.kind != StepKind::pair)
    rep.add(tag + ".y_structure", w.y1 == w.z + w.g * varpi_l);

  const Natural consumed = w.consumed_amount(k);
  const Natural residual =
      w.m_in >= consumed ? Natural(w.m_in - consumed) : Natural(0);

  // (a) congruence + exact divisibility and ladder consistency
  bool cong_ok = false;
  if (w.kind == StepKind::pair) {
    const Natural lhs = (mod_pow(w.y1, k.k(w.consumes.at(0)), varpi_l) +
                         mod_pow(w.y2, k.k(w.consumes.at(1)), varpi_l)) %
                        varpi_l;
    cong_ok = lhs == w.m_in % varpi_l;
  } else {
    cong_ok = mod_pow(w.y1, k.k(w.consumes.at(0)), varpi_l) == w.m_in % varpi_l;
  }
  rep.add(tag + ".condition_a", cong_ok);
  rep.add(tag + ".residual_positive", w.m_in > consumed);
  rep.add(tag + ".divisibility", residual % varpi_l == 0 && w.m_out * varpi_l == residual);

  // (b) size bounds per policy
  const Natural ymin = w.kind == StepKind::pair ? std::min(w.y1, w.y2) : w.y1;
  bool size_ok = w.y1 >= 1 && (w.kind != StepKind::pair || w.y2 >= 1);
  if (w.h >= 1) size_ok = size_ok && varpi_l <= ymin;
  if (policy.mode == PolicyMode::paper_faithful) {
    const unsigned long k_top = w.kind == StepKind::mid ? k.k(w.stage)
                                                        : k.k(t);
    const long double lm = ln_natural(w.m_in);
    const unsigned long up = w.kind == StepKind::mid ? w.stage
                                                     : static_cast<unsigned long>(t);
    const Natural ymax = w.kind == StepKind::pair ? std::max(w.y1, w.y2) : w.y1;
    const long double bound = (1.0L / k_top) * lm - up * std::log(lm);
    size_ok = size_ok && ln_natural(ymax) <= bound;
  }
  rep.add(tag + ".condition_b", size_ok);

  // (c) residual coprime to 10*Omega and != 2 (mod 3)
  std::size_t omega_idx = 0;
  if (w.kind == StepKind::top) omega_idx = t - 1;
  if (w.kind == StepKind::mid) omega_idx = w.stage - 1;
  if (w.kind == StepKind::pair) omega_idx = t - 2;
  const Natural comod = 10 * base.omega(omega_idx);
  rep.add(tag + ".condition_c",
          residual > 0 && boost::multiprecision::gcd(residual, comod) == 1 &&
              residual % 3 != 2);

  // (d) next-stage power-residue condition
  unsigned next_stage = 0;
  if (w.kind == StepKind::top && t >= 2) next_stage = static_cast<unsigned>(t - 1);
  if (w.kind == StepKind::mid && w.stage >= 2) next_stage = w.stage - 1;
  if (w.kind == StepKind::pair && t >= 3) next_stage = static_cast<unsigned>(t - 2);
  if (next_stage >= 1) {
    const Natural& q = base.at(next_stage);
    bool ok = w.m_out % q != 0 && kth_power_residue(w.m_out, k.k(next_stage), q);
    rep.add(tag + ".condition_d", ok);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Step constructors
// ---------------------------------------------------------------------------

namespace detail {

struct YCandidate {
  Natural y;
  Natural z;
  Natural g;
  std::optional<WeilPair> weil;
};

// Shared tail of the top/mid constructions once the step prime and h are
// fixed: Hensel component, Weil class candidates at the next pool prime,
// CRT shift, then the smallest size-admissible y.
inline StepWitness build_single_step(StepKind kind, unsigned stage,
                                     const Natural& m, const ExponentTuple& k,
                                     const BasePrimes& base, const BoundPolicy& policy,
                                     const Natural& varpi, unsigned long h) {
  const Natural sixK = 6 * k.K();
  const unsigned long k_u = k.k(stage);
  const unsigned long l = h_to_ul(sixK, h);
  const Natural varpi_l = h == 0 ? Natural(1) : pow_nat(varpi, l);

  Natural z = 0;
  if (h >= 1) {
    auto z0 = kth_root_mod_prime(m, k_u, varpi);
    if (!z0 || *z0 == 0)
      throw construction_error("step", "no k-th root of m mod varpi");
    z = hensel_lift_power(*z0, k_u, m % varpi_l, varpi, l);
  }

  // CRT targets common to every candidate
  std::vector<CrtTarget> fixed;
  fixed.push_back({2, gadget_residue(2, m)});
  fixed.push_back({3, gadget_residue(3, m)});
  fixed.push_back({5, gadget_residue(5, m)});
  const std::size_t gadget_count = stage >= 2 ? stage - 2 : 0;
  for (std::size_t i = 1; i <= gadget_count; ++i)
    fixed.push_back({base.at(i), gadget_residue(base.at(i), m)});

  std::vector<std::optional<WeilPair>> classes;
  if (stage >= 2) {
    const Natural& wprime = base.at(stage - 1);
    if (m % wprime == 0)
      throw construction_error("step", "pool prime divides residual input");
    auto cands = weil_v_candidates(varpi_l % wprime, 1, m, k.k(stage - 1), k_u, wprime);
    if (cands.empty())
      throw construction_error("step", "no Weil solution mod " + dec(wprime));
    for (const auto& c : cands) classes.emplace_back(c);
  } else {
    classes.emplace_back(std::nullopt);
  }

  // candidates scan v ascending; the first size-admissible class wins, so
  // the witness records the smallest Weil pair that works
  std::optional<YCandidate> best;
  const bool paper = policy.mode == PolicyMode::paper_faithful;
  const long double paper_bound =
      paper ? (1.0L / k_u) * ln_natural(m) - stage * std::log(ln_natural(m))
            : 0.0L;
  for (const auto& cls : classes) {
    std::vector<CrtTarget> targets = fixed;
    if (cls) targets.push_back({base.at(stage - 1), cls->v});
    Natural g = solve_shift(targets, z, varpi_l);
    Natural y = z + g * varpi_l;
    if (pow_nat(y, k_u) >= m) continue;  // residual must stay positive
    if (paper && ln_natural(y) > paper_bound) continue;
    best = YCandidate{y, z, g, cls};
    break;
  }
  if (!best)
    throw construction_error("step", "no size-admissible y at stage " +
                                         std::to_string(stage));

  StepWitness w;
  w.kind = kind;
  w.stage = stage;
  w.consumes = {stage};
  w.prime = varpi;
  w.h = h;
  w.z = best->z;
  w.g = best->g;
  w.weil = best->weil;
  w.y1 = best->y;
  w.m_in = m;
  const Natural residual = m - pow_nat(w.y1, k_u);
  if (residual % varpi_l != 0)
    throw internal_error("step", "residual not divisible by varpi^l");
  w.m_out = residual / varpi_l;
  return w;
}

}  // namespace detail

// Top of the descent: a fresh prime varpi_t for the largest exponent, then
// the shared Hensel/Weil/CRT assembly. Conditions (a)-(d) re-verified before
// returning. skip_fresh discards that many admissible fresh primes first, so
// retries draw a different top prime (the only knob when t = 1).
inline StepWitness construct_step_top(const Natural& n, const ExponentTuple& k,
                                      const BasePrimes& base, const BoundPolicy& policy,
                                      unsigned skip_fresh = 0) {
  const std::size_t t = k.t();
  const unsigned long k_t = k.k(t);
  const Natural sixK = 6 * k.K();

  Natural avoid = 30 * k.K() * k_t * base.omega(t >= 1 ? t - 1 : 0);
  Natural varpi = find_residue_prime(n, k_t, avoid, policy.residue_prime_cap);
  for (unsigned s = 0; s < skip_fresh; ++s) {
    avoid *= varpi;
    varpi = find_residue_prime(n, k_t, avoid, policy.residue_prime_cap);
  }

  unsigned long h = step_h_max(varpi, sixK, n, k_t,
                               static_cast<unsigned long>(t) + 2, policy,
                               32 * base.omega(t - 1));
  if (h == 0 && !policy.allow_degenerate_steps())
    throw construction_error("step-top",
                             "h-underflow: window admits no h >= 1 at this n");

  StepWitness w = detail::build_single_step(StepKind::top, static_cast<unsigned>(t),
                                            n, k, base, policy, varpi, h);
  CheckReport rep = recheck_step(w, k, base, policy, "top");
  if (!rep.all_ok())
    throw construction_error("step-top", "condition failed: " + rep.first_failure());
  return w;
}

// Stage-u step at the pre-selected pool prime varpi_u; requires m to be a
// k_u-th power residue mod varpi_u (maintained by the previous stage's (d)).
inline StepWitness construct_step_mid(const Natural& m, unsigned stage,
                                      const ExponentTuple& k, const BasePrimes& base,
                                      const BoundPolicy& policy) {
  const std::size_t t = k.t();
  if (stage < 1 || stage > t - 1)
    throw input_error("construct_step_mid: stage out of range");
  const Natural& varpi = base.at(stage);
  const unsigned long k_u = k.k(stage);
  if (m % varpi == 0)
    throw construction_error("step-mid", "varpi_u divides m");
  if (stage >= 2 && m % base.at(stage - 1) == 0)
    throw construction_error("step-mid", "varpi_{u-1} divides m");
  if (!kth_power_residue(m, k_u, varpi))
    throw construction_error("step-mid",
                             "precondition violated: m is not a k_u-th power "
                             "residue mod " + dec(varpi));

  unsigned long h = step_h_max(varpi, 6 * k.K(), m, k_u, stage + 1, policy,
                               32 * base.omega(stage - 1));
  if (h == 0 && !policy.allow_degenerate_steps())
    throw construction_error("step-mid",
                             "h-underflow: window admits no h >= 1 at this m");

  StepWitness w = detail::build_single_step(StepKind::mid, stage, m, k, base,
                                            policy, varpi, h);
  CheckReport rep = recheck_step(w, k, base, policy, "mid");
  if (!rep.all_ok())
    throw construction_error("step-mid", "condition failed: " + rep.first_failure());
  return w;
}

// Pair step consuming k_{t-1} and k_t together at varpi_{t-1}; the all-even
// route that sidesteps the conditional prime selection.
inline StepWitness construct_step_pair(const Natural& n, const ExponentTuple& k,
                                       const BasePrimes& base, const BoundPolicy& policy) {
  const std::size_t t = k.t();
  if (t < 2) throw input_error("construct_step_pair: t >= 2 required");
  const Natural& varpi = base.at(t - 1);
  const unsigned long ka = k.k(t - 1), kb = k.k(t);
  if (n % varpi == 0)
    throw construction_error("step-pair", "varpi_{t-1} divides n");

  const Natural sixK = 6 * k.K();
  unsigned long h = step_h_max(varpi, sixK, n, kb,
                               static_cast<unsigned long>(t) + 2, policy,
                               64 * base.omega(t - 2));
  if (h == 0 && !policy.allow_degenerate_steps())
    throw construction_error("step-pair",
                             "h-underflow: window admits no h >= 1 at this n");
  const unsigned long l = detail::h_to_ul(sixK, h);
  const Natural varpi_l = h == 0 ? Natural(1) : pow_nat(varpi, l);

  auto pairs = weil_v_candidates(1, 1, n, ka, kb, varpi);
  if (pairs.empty())
    throw construction_error("step-pair", "no Weil solution mod " + dec(varpi));

  struct PairCandidate {
    Natural y1, y2, z, g, total;
    WeilPair weil;
    std::optional<WeilPair> weil2;
  };
  std::optional<PairCandidate> best;

  for (const auto& uv : pairs) {
    const Natural& u = uv.w;  // y1's class
    const Natural& v = uv.v;  // y2's class
    Natural y2, z;
    if (h >= 1) {
      // fix w = v's smallest lift above varpi^l, Hensel-solve z against it
      y2 = varpi_l + 1;
      y2 += (v + varpi - y2 % varpi) % varpi;
      const Natural target = n >= pow_nat(y2, kb)
                                 ? Natural((n - pow_nat(y2, kb)) % varpi_l)
                                 : Natural((n + varpi_l - pow_nat(y2, kb) % varpi_l) % varpi_l);
      if (target % varpi == 0) continue;
      z = hensel_lift_power(u, ka, target, varpi, l);
      if (z <= varpi_l) z += varpi_l;  // representative in (varpi^l, 2*varpi^l]
    } else {
      y2 = v;
      z = u;
    }
    const Natural after_w = pow_nat(y2, kb);
    if (after_w >= n) continue;
    const Natural rem_target = n - after_w;

    std::vector<detail::CrtTarget> targets;
    targets.push_back({2, detail::gadget_residue(2, rem_target)});
    targets.push_back({3, detail::gadget_residue(3, rem_target)});
    targets.push_back({5, detail::gadget_residue(5, rem_target)});
    const std::size_t gadget_count = t >= 4 ? t - 4 + 1 : 0;  // varpi_1..varpi_{t-3}
    for (std::size_t i = 1; i <= gadget_count; ++i)
      targets.push_back({base.at(i), detail::gadget_residue(base.at(i), rem_target)});

    std::optional<WeilPair> weil2;
    if (t >= 3) {
      const Natural& q2 = base.at(t - 2);
      if (rem_target % q2 == 0) continue;
      auto w2 = solve_weil(varpi_l % q2, 1, rem_target, k.k(t - 2), ka, q2);
      if (!w2) continue;
      weil2 = *w2;
      targets.push_back({q2, w2->v});
    }
    if (h == 0) targets.push_back({varpi, u});  // keep y1 in u's class

    Natural g = detail::solve_shift(targets, z, varpi_l);
    Natural y1 = z + g * varpi_l;
    Natural total = pow_nat(y1, ka) + after_w;
    if (total >= n) continue;
    best = PairCandidate{y1, y2, z, g, total, uv, weil2};
    break;  // first admissible Weil class in ascending order
  }
  if (!best) throw construction_error("step-pair", "no size-admissible (y1, y2)");

  StepWitness w;
  w.kind = StepKind::pair;
  w.stage = static_cast<unsigned>(t - 1);
  w.consumes = {static_cast<unsigned>(t - 1), static_cast<unsigned>(t)};
  w.prime = varpi;
  w.h = h;
  w.z = best->z;
  w.g = best->g;
  w.weil = best->weil;
  w.weil2 = best->weil2;
  w.y1 = best->y1;
  w.y2 = best->y2;
  w.m_in = n;
  const Natural residual = n - best->total;
  if (residual % varpi_l != 0)
    throw internal_error("step-pair", "residual not divisible by varpi^l");
  w.m_out = residual / varpi_l;

  CheckReport rep = recheck_step(w, k, base, policy, "pair");
  if (!rep.all_ok())
    throw construction_error("step-pair", "condition failed: " + rep.first_failure());
  return w;
}

}  // namespace waring
