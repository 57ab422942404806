#pragma once

#include <optional>
#include <string>
#include <vector>

#include "waring/certificate.hpp"
#include "waring/descent.hpp"
#include "waring/endgame.hpp"
#include "waring/errors.hpp"
#include "waring/policy.hpp"
#include "waring/ternary.hpp"

namespace waring {

struct RunConfig {
  ExponentTuple exponents{std::vector<unsigned long>{6, 6}};
  std::optional<Mode> mode;  // defaulted from the feasibility verdict
  BoundPolicy policy;
  std::uint64_t seed = 0;
};

// Structured failure reason: stage + error class, as the exit-status contract
// requires every unsuccessful run to carry one.
struct RunFailure {
  Errc code = Errc::construction;
  std::string stage;
  std::string message;
};

struct RepresentResult {
  std::optional<RepresentationCertificate> certificate;
  std::optional<RunFailure> failure;
  unsigned attempts = 0;

  bool ok() const { return certificate.has_value(); }
};

// Preference when --mode is not given: the strongest unconditional claim
// first.
inline Mode default_mode(const FeasibilityVerdict& v) {
  if (v.unconditional) return Mode::unconditional;
  if (v.grh) return Mode::grh;
  if (v.ramanujan) return Mode::ramanujan;
  if (v.ramanujan_grh) return Mode::ramanujan_grh;
  throw input_error("exponent tuple admits no route");
}

// select_base_primes -> run_descent -> run_endgame -> solve_ternary ->
// reassemble, retrying the whole chain with shifted prime choices when a
// stage reports a construction failure.
inline RepresentResult represent(const Natural& n, const RunConfig& config) {
  RepresentResult result;
  FeasibilityVerdict verdict = check_feasibility(config.exponents);
  Mode mode;
  try {
    mode = config.mode ? *config.mode : default_mode(verdict);
    if (!verdict.admits(mode))
      throw input_error("mode " + mode_name(mode) + " not admitted for tuple");
    if (n < config.policy.min_n)
      throw input_error("n below policy minimum " + dec(config.policy.min_n));
  } catch (const Error& e) {
    result.failure = RunFailure{e.code(), e.stage(), e.what()};
    return result;
  }

  // route-appropriate c: GRH flavours take 2 + 2eps, the rest 12/5 + 2eps
  BoundPolicy policy = config.policy;
  if (mode == Mode::unconditional || mode == Mode::ramanujan)
    policy.c_base = Rational(12, 5);
  else
    policy.c_base = Rational(2);
  policy.omega = gamma_omega_solve(config.exponents, policy.nu);

  std::optional<RunFailure> last;
  for (unsigned attempt = 0; attempt < policy.retries; ++attempt) {
    ++result.attempts;
    try {
      BoundPolicy single = policy;
      single.retries = 1;
      DescentState st = run_descent(n, config.exponents, mode, single, attempt);
      EndgameData eg = run_endgame(st, n, policy);
      SolveBudget budget;
      budget.max_z = policy.budget_z;
      budget.rho_per_candidate = policy.rho_per_candidate;
      budget.workers = policy.workers;
      budget.seed = config.seed;
      TernaryResult tern = solve_ternary({eg.N, eg.p, true}, budget);
      if (tern.outcome != TernaryOutcome::found) {
        const bool absent = tern.outcome == TernaryOutcome::proven_absent;
        last = RunFailure{absent ? Errc::construction : Errc::budget, "ternary",
                          absent ? "no ternary solution for this (N, p)"
                                 : "ternary budget exhausted"};
        continue;
      }
      RepresentationCertificate cert =
          reassemble(st, eg, *tern.solution, mode, policy, config.seed);
      CheckReport rep = verify_certificate(cert);
      if (!rep.all_ok())
        throw internal_error("represent",
                             "self-verification failed: " + rep.first_failure());
      result.certificate = cert;
      return result;
    } catch (const Error& e) {
      if (e.code() == Errc::internal) throw;
      last = RunFailure{e.code(), e.stage(), e.what()};
    }
  }
  result.failure = last ? *last
                        : RunFailure{Errc::construction, "represent", "no attempt ran"};
  return result;
}

}  // namespace waring
