#pragma once

#include <string>
#include <vector>

#include "waring/base_primes.hpp"
#include "waring/checks.hpp"
#include "waring/errors.hpp"
#include "waring/exponent_tuple.hpp"
#include "waring/policy.hpp"
#include "waring/steps.hpp"

namespace waring {

// State after consuming stages t, t-1, ..., r+1: residual m_r and the
// factored scaling Upsilon_r = prod varpi_l^(6K h_l) over consumed steps.
struct DescentState {
  ExponentTuple tuple;   // working order (relabeled when the route asks)
  BasePrimes base;
  Natural n;
  std::vector<StepWitness> steps;  // consumption order, top first
  unsigned r = 0;
  Natural m;  // m_r

  DescentState(ExponentTuple k, BasePrimes b, Natural n_in)
      : tuple(std::move(k)), base(std::move(b)), n(std::move(n_in)),
        r(static_cast<unsigned>(tuple.t())), m(n) {}

  Natural upsilon() const {
    const Natural sixK = 6 * tuple.K();
    Natural u = 1;
    for (const auto& s : steps) u *= s.modulus(sixK);
    return u;
  }

  // sqrt(Upsilon_0) = prod varpi^(3K h); integral since every exponent is even.
  Natural sqrt_upsilon() const {
    const Natural threeK = 3 * tuple.K();
    Natural u = 1;
    for (const auto& s : steps) {
      if (!fits_u64(threeK * s.h)) throw internal_error("descent", "3Kh overflow");
      u *= pow_nat(s.prime, to_u64(threeK * s.h));
    }
    return u;
  }

  // Final value of the tail variable consumed at step index i (0-based), for
  // working-tuple stage j: y * prod over earlier steps of varpi^(6 h K / k_j).
  Natural y_final(std::size_t step_index, unsigned stage_j, const Natural& y_raw) const {
    const Natural K = tuple.K();
    Natural value = y_raw;
    for (std::size_t e = 0; e < step_index; ++e) {
      const auto& s = steps[e];
      Natural expo = 6 * s.h * K;
      if (expo % tuple.k(stage_j) != 0)
        throw internal_error("descent", "non-integral scaling exponent");
      expo /= tuple.k(stage_j);
      if (!fits_u64(expo)) throw internal_error("descent", "scaling overflow");
      value *= pow_nat(s.prime, to_u64(expo));
    }
    return value;
  }

  // All (stage, y_final) pairs in working-stage order 1..t.
  std::vector<std::pair<unsigned, Natural>> final_tail() const {
    std::vector<std::pair<unsigned, Natural>> out(tuple.t());
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      out.at(s.consumes.at(0) - 1) = {s.consumes.at(0), y_final(i, s.consumes.at(0), s.y1)};
      if (s.kind == StepKind::pair)
        out.at(s.consumes.at(1) - 1) = {s.consumes.at(1), y_final(i, s.consumes.at(1), s.y2)};
    }
    return out;
  }

  // gamma_r = prod over remaining-stage exponents above r of (1 - 1/k_l),
  // the exact-rational ladder the size bounds are phrased in.
  std::vector<Rational> gamma_ladder() const {
    std::vector<Rational> out(tuple.t() + 1);
    Rational g = 1;
    out[tuple.t()] = g;
    for (std::size_t l = tuple.t(); l >= 1; --l) {
      g *= Rational(tuple.k(l) - 1, tuple.k(l));
      out[l - 1] = g;
    }
    return out;
  }

  // Exact conservation: n = Upsilon_r * m_r + sum over consumed stages of
  // (y^final)^k. Checked after every step and again by the verifier.
  bool conservation_holds() const {
    Natural total = upsilon() * m;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      total += pow_nat(y_final(i, s.consumes.at(0), s.y1), tuple.k(s.consumes.at(0)));
      if (s.kind == StepKind::pair)
        total += pow_nat(y_final(i, s.consumes.at(1), s.y2), tuple.k(s.consumes.at(1)));
    }
    return total == n;
  }
};

// Invariants of the state at stage r, re-derived from scratch.
inline CheckReport recheck_state(const DescentState& st) {
  CheckReport rep;
  rep.add("state.conservation", st.conservation_holds());
  const Natural ups = st.upsilon();
  rep.add("state.upsilon_bound", ups * st.m <= st.n);
  rep.add("state.residual_coprime",
          boost::multiprecision::gcd(st.m, 10 * st.base.omega(st.r)) == 1);
  rep.add("state.residual_mod3", st.m % 3 != 2);
  Natural root;
  rep.add("state.upsilon_odd_square", ups % 2 == 1 && is_perfect_square(ups, &root));
  if (st.r >= 1) {
    const Natural& q = st.base.at(st.r);
    rep.add("state.power_residue",
            st.m % q != 0 && kth_power_residue(st.m, st.tuple.k(st.r), q));
  }
  return rep;
}

namespace detail {

inline DescentState run_descent_attempt(const Natural& n, const ExponentTuple& k,
                                        bool pair_route, const BoundPolicy& policy,
                                        unsigned skip) {
  BasePrimes base = select_base_primes(n, k, policy, skip);
  DescentState st(k, base, n);
  const unsigned t = static_cast<unsigned>(k.t());

  if (pair_route) {
    StepWitness w = construct_step_pair(n, k, base, policy);
    st.steps.push_back(w);
    st.r = t - 2;
    st.m = w.m_out;
  } else {
    // for t = 1 the base never changes, so the retry knob is the fresh prime
    const unsigned skip_fresh = t == 1 ? skip : 0;
    StepWitness w = construct_step_top(n, k, base, policy, skip_fresh);
    st.steps.push_back(w);
    st.r = t - 1;
    st.m = w.m_out;
  }

  while (st.r >= 1) {
    StepWitness w = construct_step_mid(st.m, st.r, k, base, policy);
    st.steps.push_back(w);
    st.m = w.m_out;
    --st.r;
  }

  CheckReport rep = recheck_state(st);
  if (!rep.all_ok())
    throw internal_error("descent", "state invariant failed: " + rep.first_failure());
  // the endgame additionally needs (lambda, 30 m) = 1
  if (boost::multiprecision::gcd(st.upsilon(), 30 * st.m) != 1)
    throw construction_error("descent", "upsilon shares a factor with 30*m");
  return st;
}

}  // namespace detail

// Drives stages t -> 0: one top (or pair) step, then mids downward,
// retrying with shifted pool-prime selections when a stage fails.
inline DescentState run_descent(const Natural& n, const ExponentTuple& k_in,
                                Mode mode, const BoundPolicy& policy,
                                unsigned skip_offset = 0) {
  FeasibilityVerdict verdict = check_feasibility(k_in);
  if (!verdict.admits(mode))
    throw input_error("run_descent: mode " + mode_name(mode) +
                      " not admitted for this exponent tuple");
  if (n < policy.min_n)
    throw input_error("run_descent: n below policy minimum " + dec(policy.min_n));

  ExponentTuple k = k_in;
  bool pair_route = false;
  if (mode == Mode::unconditional || mode == Mode::ramanujan) {
    if (!k.all_even())
      k = k.relabel_odd_last();
    else
      pair_route = true;  // the gamma~ route; admits() guarantees t >= 2
  }

  std::string last_error = "no attempt made";
  for (unsigned attempt = 0; attempt < policy.retries; ++attempt) {
    try {
      return detail::run_descent_attempt(n, k, pair_route, policy,
                                         skip_offset + attempt);
    } catch (const Error& e) {
      if (e.code() != Errc::construction) throw;
      last_error = std::string(e.what()) + " [attempt " +
                   std::to_string(attempt + 1) + "]";
    }
  }
  throw construction_error("descent", "retry budget exhausted: " + last_error);
}

}  // namespace waring
