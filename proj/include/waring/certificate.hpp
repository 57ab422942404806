#pragma once

#include <string>
#include <vector>

#include "waring/checks.hpp"
#include "waring/descent.hpp"
#include "waring/endgame.hpp"
#include "waring/errors.hpp"
#include "waring/exponent_tuple.hpp"
#include "waring/policy.hpp"
#include "waring/steps.hpp"
#include "waring/ternary.hpp"

namespace waring {

// The complete witness chain: everything the verifier needs to re-derive the
// representation n = x1^2 + x2^2 + x3^3 + x4^3 + sum y_j^(k_j) by exact
// arithmetic alone.
struct RepresentationCertificate {
  unsigned format_version = 1;
  Natural n;
  Mode mode = Mode::grh;
  PolicyMode policy_mode = PolicyMode::desk_scale;
  Rational policy_c;
  Rational policy_omega;
  Rational policy_slack;
  std::uint64_t seed = 0;

  std::vector<unsigned long> exponents_canonical;  // ascending user tuple
  std::vector<unsigned long> exponents_working;    // relabeled order used
  std::vector<unsigned> relabel_perm;              // working pos -> canonical pos

  std::vector<Natural> base_primes;
  std::vector<StepWitness> steps;
  EndgameData endgame;
  TernarySolution ternary;  // v, w, z0 with v^2 + w^2 + 6 p z0^2 = N

  Natural x1, x2, x3, x4;
  std::vector<Natural> y_final_working;  // by working stage 1..t

  // y values presented in the user's (ascending) exponent order
  std::vector<Natural> y_final_canonical() const {
    std::vector<Natural> out(y_final_working.size());
    for (std::size_t i = 0; i < y_final_working.size(); ++i)
      out.at(relabel_perm.at(i)) = y_final_working[i];
    return out;
  }
};

// Assembles the certificate from a finished descent, endgame and ternary
// solution; the final-sum identity is re-verified before returning.
inline RepresentationCertificate reassemble(const DescentState& st,
                                            const EndgameData& eg,
                                            const TernarySolution& tern,
                                            Mode mode, const BoundPolicy& policy,
                                            std::uint64_t seed = 0) {
  const Natural check = tern.x * tern.x + tern.y * tern.y +
                        6 * eg.p * tern.z * tern.z + 2 * eg.lambda * eg.lambda *
                        pow_nat(eg.p, 3);
  if (check != st.m)
    throw internal_error("reassemble", "v^2 + w^2 + 6p z0^2 + 2 lambda^2 p^3 != m0");
  if (tern.z < 1) throw input_error("reassemble: z0 must be >= 1");
  const Natural lp = eg.lambda * eg.p;
  if (tern.z >= lp)
    throw construction_error("reassemble", "z0 >= lambda p would force x4 <= 0");

  RepresentationCertificate cert;
  cert.n = st.n;
  cert.mode = mode;
  cert.policy_mode = policy.mode;
  cert.policy_c = policy.c();
  cert.policy_omega = policy.omega;
  cert.policy_slack = policy.slack;
  cert.seed = seed;
  cert.exponents_canonical = st.tuple.canonical();
  cert.exponents_working = st.tuple.working();
  cert.relabel_perm = st.tuple.perm();
  cert.base_primes = st.base.primes;
  cert.steps = st.steps;
  cert.endgame = eg;
  cert.ternary = tern;

  const Natural sq = st.sqrt_upsilon();
  cert.x1 = sq * tern.x;
  cert.x2 = sq * tern.y;
  cert.x3 = lp + tern.z;
  cert.x4 = lp - tern.z;
  for (const auto& [stage, y] : st.final_tail()) {
    (void)stage;
    cert.y_final_working.push_back(y);
  }

  Natural total = cert.x1 * cert.x1 + cert.x2 * cert.x2 + pow_nat(cert.x3, 3) +
                  pow_nat(cert.x4, 3);
  for (std::size_t j = 0; j < cert.y_final_working.size(); ++j)
    total += pow_nat(cert.y_final_working[j], st.tuple.k(static_cast<unsigned>(j + 1)));
  if (total != st.n)
    throw internal_error("reassemble", "certificate sum does not equal n");
  return cert;
}

namespace detail {

// Full re-verification from primitives; input is untrusted. Stops reporting
// detail after the first failure but always evaluates the full-sum identity
// first so value tampering is named directly.
inline CheckReport verify_certificate_impl(const RepresentationCertificate& cert) {
  CheckReport rep;

  // ---- structural recomputation of the tuple ----
  ExponentTuple tuple(cert.exponents_canonical);
  bool order_ok = cert.exponents_working.size() == cert.exponents_canonical.size() &&
                  cert.relabel_perm.size() == cert.exponents_canonical.size();
  if (order_ok) {
    std::vector<unsigned long> sorted = cert.exponents_working;
    std::sort(sorted.begin(), sorted.end());
    order_ok = sorted == cert.exponents_canonical;
    std::vector<bool> used(cert.relabel_perm.size(), false);
    for (std::size_t i = 0; order_ok && i < cert.relabel_perm.size(); ++i) {
      const unsigned pi = cert.relabel_perm[i];
      order_ok = pi < cert.exponents_canonical.size() && !used[pi] &&
                 cert.exponents_canonical[pi] == cert.exponents_working[i];
      if (order_ok) used[pi] = true;
    }
  }
  rep.add("tuple.relabeling", order_ok);
  if (!order_ok) return rep;

  // working-order tuple for stage arithmetic
  ExponentTuple working = tuple;
  if (cert.exponents_working != tuple.working()) {
    working = tuple.relabel_odd_last();
    if (working.working() != cert.exponents_working) {
      rep.add("tuple.working_order", false, "unrecognised relabeling");
      return rep;
    }
  }
  const std::size_t t = working.t();

  // ---- final sum first: the headline identity ----
  {
    Natural total = cert.x1 * cert.x1 + cert.x2 * cert.x2 + pow_nat(cert.x3, 3) +
                    pow_nat(cert.x4, 3);
    bool shape_ok = cert.y_final_working.size() == t;
    if (shape_ok)
      for (std::size_t j = 0; j < t; ++j)
        total += pow_nat(cert.y_final_working[j], working.k(static_cast<unsigned>(j + 1)));
    rep.add("final_sum", shape_ok && total == cert.n);
    bool positive = cert.x1 >= 1 && cert.x2 >= 1 && cert.x3 >= 1 && cert.x4 >= 1;
    if (shape_ok)
      for (const auto& y : cert.y_final_working) positive = positive && y >= 1;
    rep.add("components_positive", positive);
    if (!shape_ok) return rep;
  }

  // ---- mode admitted ----
  rep.add("mode_admitted", check_feasibility(tuple).admits(cert.mode));

  // ---- base primes ----
  {
    bool ok = cert.base_primes.size() == t - 1 || (t == 1 && cert.base_primes.empty());
    const Natural K = working.K();
    for (std::size_t i = 0; ok && i < cert.base_primes.size(); ++i) {
      const Natural& q = cert.base_primes[i];
      ok = is_prime(q) && boost::multiprecision::gcd(q, 30 * K) == 1;
      for (std::size_t j = 0; ok && j < i; ++j) ok = cert.base_primes[j] != q;
    }
    if (ok && !cert.base_primes.empty())
      ok = cert.n % cert.base_primes.back() != 0;
    rep.add("base_primes", ok);
    if (!ok) return rep;
  }

  BasePrimes base;
  base.primes = cert.base_primes;
  BoundPolicy policy;
  policy.mode = cert.policy_mode;
  policy.omega = cert.policy_omega;
  policy.slack = cert.policy_slack;

  // ---- replay the descent ladder, rechecking each step ----
  DescentState st(working, base, cert.n);
  st.steps.clear();
  st.r = static_cast<unsigned>(t);
  st.m = cert.n;
  {
    bool ladder_ok = !cert.steps.empty();
    for (std::size_t i = 0; ladder_ok && i < cert.steps.size(); ++i) {
      const StepWitness& w = cert.steps[i];
      ladder_ok = w.m_in == st.m;
      // the chain must be: one top step (or one pair step), then mids at the
      // pool primes in descending stage order
      if (i == 0) {
        if (w.kind == StepKind::top) {
          ladder_ok = ladder_ok && w.stage == t &&
                      w.consumes == std::vector<unsigned>{static_cast<unsigned>(t)} &&
                      boost::multiprecision::gcd(w.prime,
                                                 30 * working.K() * cert.n *
                                                     base.omega(t - 1)) == 1;
        } else if (w.kind == StepKind::pair) {
          ladder_ok = ladder_ok && t >= 2 && w.stage == t - 1 &&
                      w.consumes == std::vector<unsigned>{static_cast<unsigned>(t - 1),
                                                          static_cast<unsigned>(t)} &&
                      w.prime == base.at(t - 1);
        } else {
          ladder_ok = false;
        }
      } else {
        ladder_ok = ladder_ok && w.kind == StepKind::mid && w.stage == st.r &&
                    w.consumes == std::vector<unsigned>{st.r} &&
                    w.prime == base.at(st.r);
      }
      if (!ladder_ok) break;
      CheckReport step_rep = recheck_step(w, working, base, policy,
                                          "step" + std::to_string(i));
      for (auto& item : step_rep.items) rep.items.push_back(item);
      if (!step_rep.all_ok()) return rep;
      st.steps.push_back(w);
      st.m = w.m_out;
      st.r -= static_cast<unsigned>(w.consumes.size());
    }
    rep.add("descent.ladder", ladder_ok && st.r == 0);
    if (!ladder_ok || st.r != 0) return rep;
  }

  {
    CheckReport state_rep = recheck_state(st);
    for (auto& item : state_rep.items) rep.items.push_back(item);
    if (!state_rep.all_ok()) return rep;
  }

  // ---- endgame congruences and windows ----
  const EndgameData& eg = cert.endgame;
  const Natural m0 = st.m;
  rep.add("endgame.lambda", eg.lambda == st.upsilon() &&
                                boost::multiprecision::gcd(eg.lambda, 30 * m0) == 1);
  rep.add("endgame.p_prime", is_prime(eg.p));
  rep.add("endgame.p_mod3", eg.p % 3 == 1);
  rep.add("endgame.p_avoids_m", m0 % eg.p != 0);
  const Natural five_2h = pow_nat(5, 2 * eg.h);
  const Natural five_2h1 = five_2h * 5;
  rep.add("endgame.h_positive", eg.h >= 1);
  rep.add("endgame.B_lift",
          eg.B >= 1 && eg.B <= five_2h &&
              2 * eg.lambda * eg.lambda % five_2h * mod_pow(eg.B, 3, five_2h) %
                      five_2h ==
                  m0 % five_2h);
  rep.add("endgame.p_progression",
          eg.nu <= 1 && eg.p % five_2h1 == (eg.B + eg.nu * five_2h) % five_2h1);
  {
    const Natural l3 = eg.lambda * eg.lambda * eg.lambda;
    const Natural lp3 = l3 * pow_nat(eg.p, 3);
    rep.add("endgame.window", 6 * lp3 > cert.n && 3 * lp3 < cert.n);
  }
  {
    const Natural shift = 2 * eg.lambda * eg.lambda * pow_nat(eg.p, 3);
    bool ok = shift < m0 && eg.N == m0 - shift;
    rep.add("endgame.N_value", ok);
    if (!ok) return rep;
  }
  rep.add("endgame.valuation", eg.N % five_2h == 0 && eg.N % five_2h1 != 0);
  rep.add("endgame.TM", eg.M == pow_nat(5, eg.h) && eg.T * five_2h == eg.N &&
                            eg.T % 5 != 0);
  rep.add("endgame.coprime_6p", boost::multiprecision::gcd(eg.N, 6 * eg.p) == 1);
  rep.add("endgame.mod16", check_mod16(eg.N, eg.p));

  // ---- ternary equation ----
  rep.add("ternary.equation",
          cert.ternary.x * cert.ternary.x + cert.ternary.y * cert.ternary.y +
                  6 * eg.p * cert.ternary.z * cert.ternary.z ==
              eg.N);
  rep.add("ternary.positive",
          cert.ternary.x >= 1 && cert.ternary.y >= 1 && cert.ternary.z >= 1);

  // ---- assembly ----
  {
    const Natural sq = st.sqrt_upsilon();
    const Natural lp = eg.lambda * eg.p;
    bool ok = cert.x1 == sq * cert.ternary.x && cert.x2 == sq * cert.ternary.y &&
              cert.x3 == lp + cert.ternary.z && cert.x4 + cert.ternary.z == lp &&
              cert.ternary.z < lp;
    auto tail = st.final_tail();
    for (std::size_t j = 0; ok && j < t; ++j)
      ok = cert.y_final_working[j] == tail[j].second;
    rep.add("assembly", ok);
  }
  return rep;
}

}  // namespace detail

// Hostile input may violate preconditions deep inside the arithmetic; any
// such escape is itself a verification failure, not a crash.
inline CheckReport verify_certificate(const RepresentationCertificate& cert) {
  try {
    return detail::verify_certificate_impl(cert);
  } catch (const std::exception& e) {
    CheckReport rep;
    rep.add("verification_exception", false, e.what());
    return rep;
  }
}

}  // namespace waring
