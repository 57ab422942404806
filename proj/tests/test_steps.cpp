#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "waring/base_primes.hpp"
#include "waring/residue_prime.hpp"
#include "waring/steps.hpp"
#include "waring/weil.hpp"

using namespace waring;

namespace {

// first base selection (skip ascending) whose top step succeeds
StepWitness top_step_any_base(const Natural& n, const ExponentTuple& k,
                              const BoundPolicy& policy, BasePrimes* base_out) {
  for (unsigned skip = 0; skip < 6; ++skip) {
    BasePrimes base = select_base_primes(n, k, policy, skip);
    try {
      StepWitness w = construct_step_top(n, k, base, policy);
      if (base_out) *base_out = base;
      return w;
    } catch (const Error&) {
      continue;
    }
  }
  throw construction_error("test", "no base selection admits a top step");
}

}  // namespace

TEST_CASE("find_residue_prime examples") {
  CHECK(find_residue_prime(7, 3, 1, 100) == 5);   // 5 = 2 (mod 3), 5 not | 3m
  CHECK(find_residue_prime(4, 2, 1, 100) == 3);   // 4 = 1^2 (mod 3)
  CHECK(find_residue_prime(2, 2, 1, 100) == 7);   // 2 is not a QR mod 3 or 5
  CHECK_THROWS_AS(find_residue_prime(2, 2, 1, 5), Error);  // cap exhausted
  // the returned prime always admits the residue, any m, k
  std::uint64_t seed = 11;
  for (int i = 0; i < 80; ++i) {
    Natural m = 2 + Natural(splitmix64(seed) % 1000000);
    unsigned long k = 2 + splitmix64(seed) % 10;
    Natural p = find_residue_prime(m, k, 30, 100000);
    CHECK(is_prime(p));
    CHECK(p % 2 == 1);
    CHECK(m % p != 0);
    CHECK(Natural(30) % p != 0);
    CHECK(kth_power_residue(m, k, p));
    if (k % 2 == 1) CHECK(p % k == 2);
  }
}

TEST_CASE("solve_weil: examples and verified prime list") {
  auto r = solve_weil(1, 1, 2, 4, 6, 11);
  REQUIRE(r.has_value());
  CHECK(r->w == 1);
  CHECK(r->v == 1);
  // frozen by enumerating the 36-cell grid: lex smallest solution of
  // w^2 + v^3 = 1 (mod 7) is (3, 3)
  auto s = solve_weil(1, 1, 1, 2, 3, 7);
  REQUIRE(s.has_value());
  CHECK(s->w == 3);
  CHECK(s->v == 3);
  CHECK_THROWS_AS(solve_weil(7, 1, 1, 2, 3, 7), Error);

  // exhaustive existence scan producing, per exponent pair, the list of
  // primes where every nonzero target is attainable (the usage domain: the
  // target is always coprime to the prime)
  const std::uint64_t primes[] = {7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                                  53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};
  for (unsigned long k1 = 2; k1 <= 6; ++k1)
    for (unsigned long k2 = k1; k2 <= 6; ++k2) {
      std::set<std::uint64_t> verified;
      for (std::uint64_t p : primes) {
        bool all = true;
        for (std::uint64_t tgt = 1; tgt < p && all; ++tgt) {
          auto w = solve_weil(1, 1, Natural(tgt), k1, k2, Natural(p));
          if (w) {
            CHECK((mod_pow(w->w, k1, p) + mod_pow(w->v, k2, p)) % p == tgt % p);
            CHECK(w->w % p != 0);
            CHECK(w->v % p != 0);
          } else {
            all = false;
          }
        }
        if (all) verified.insert(p);
      }
      INFO("k1=" << k1 << " k2=" << k2);
      CHECK_FALSE(verified.empty());
      if (k1 == 6 && k2 == 6) {
        // sixth powers mod 7 are {1}: only target 2 is attainable
        CHECK(verified.count(7) == 0);
        CHECK(verified.count(11) == 1);  // sixth powers mod 11 are the QRs
        CHECK(verified.count(23) == 1);
      }
      if (k1 == 2 && k2 == 2) CHECK(verified.size() == std::size(primes));
    }
}

TEST_CASE("desk-scale top step, exponents (6,6)") {
  const ExponentTuple k({6, 6});
  const BoundPolicy policy = BoundPolicy::desk();
  const Natural n("1000000000000037");  // ~1e15
  BasePrimes base;
  StepWitness w = top_step_any_base(n, k, policy, &base);
  CHECK(w.kind == StepKind::top);
  CHECK(w.stage == 2);
  CHECK(recheck_step(w, k, base, policy, "t").all_ok());
  // desk scale collapses the window: the degenerate step has h = 0
  CHECK(w.h == 0);
  CHECK(w.m_in == n);
  CHECK(w.m_out == n - pow_nat(w.y1, 6));
  // g_q placement: residual coprime to 10 * Omega_1 and never 2 mod 3
  const Natural residual = n - pow_nat(w.y1, 6);
  CHECK(boost::multiprecision::gcd(residual, 10 * base.omega(1)) == 1);
  CHECK(residual % 3 != 2);
}

TEST_CASE("paper-faithful mode refuses the collapsed window") {
  const ExponentTuple k({6, 6});
  const BoundPolicy policy = BoundPolicy::paper();
  const Natural n("1000000000000037");
  BasePrimes base = select_base_primes(n, k, BoundPolicy::desk(), 0);
  CHECK_THROWS_WITH(construct_step_top(n, k, base, policy),
                    Catch::Matchers::ContainsSubstring("h-underflow"));
}

TEST_CASE("top step with h >= 1 at large n, exponents (6,6)") {
  const ExponentTuple k({6, 6});
  BoundPolicy policy = BoundPolicy::desk();
  policy.slack = 1;  // full exponent budget
  // n ~ 1e250, placed in classes that pin the construction: n = 2 (mod 7)
  // keeps the Weil step at pool prime 7 soluble for sixth powers, and
  // n = 1 (mod 11) makes 11 the fresh top prime; the window then supports
  // h = 1 at both stages
  Natural n = pow_nat(10, 250);
  n += (23 - n % 77 + 77) % 77;
  BasePrimes base;
  StepWitness w = top_step_any_base(n, k, policy, &base);
  CHECK(w.h >= 1);
  const Natural sixK = 6 * k.K();
  const Natural varpi_l = w.modulus(sixK);
  CHECK(varpi_l > 1);
  // condition (a) with a real modulus, exact divisibility
  CHECK(mod_pow(w.y1, 6, varpi_l) == n % varpi_l);
  CHECK((n - pow_nat(w.y1, 6)) % varpi_l == 0);
  // Hensel/CRT composition: the shift only moves y in the coprime moduli
  CHECK(w.y1 % varpi_l == w.z % varpi_l);
  CHECK(w.y1 == w.z + w.g * varpi_l);
  CHECK(w.g >= 1);
  CHECK(w.g <= 30 * base.omega(1));
  CHECK(recheck_step(w, k, base, policy, "t").all_ok());

  // drive the mid stage off the top residual
  StepWitness mid = construct_step_mid(w.m_out, 1, k, base, policy);
  CHECK(mid.h >= 1);
  CHECK(mid.prime == base.at(1));
  CHECK(recheck_step(mid, k, base, policy, "m").all_ok());
  CHECK(mid.m_out >= 1);
}

TEST_CASE("mid step precondition violations are reported") {
  const ExponentTuple k({6, 6});
  const BoundPolicy policy = BoundPolicy::desk();
  BasePrimes base = select_base_primes(Natural("100000000000"), k, policy, 0);
  // m divisible by varpi_1 violates the hypothesis
  CHECK_THROWS_AS(construct_step_mid(base.at(1) * 12345, 1, k, base, policy),
                  Error);
  // m not a k_u-th power residue: find one by search
  const Natural varpi = base.at(1);
  Natural bad = policy.min_n + 1;
  while (kth_power_residue(bad % varpi == 0 ? bad + 1 : bad, 6, varpi)) ++bad;
  CHECK_THROWS_WITH(construct_step_mid(bad, 1, k, base, policy),
                    Catch::Matchers::ContainsSubstring("power"));
}

TEST_CASE("pair step: desk degenerate and h >= 1") {
  const ExponentTuple k({6, 6});
  const BoundPolicy policy = BoundPolicy::desk();
  const Natural n("100000000000541");
  for (unsigned skip = 0; skip < 6; ++skip) {
    BasePrimes base = select_base_primes(n, k, policy, skip);
    try {
      StepWitness w = construct_step_pair(n, k, base, policy);
      CHECK(w.kind == StepKind::pair);
      CHECK(w.consumes == std::vector<unsigned>{1, 2});
      CHECK(recheck_step(w, k, base, policy, "p").all_ok());
      const Natural residual = n - pow_nat(w.y1, 6) - pow_nat(w.y2, 6);
      CHECK(residual % 3 != 2);
      CHECK(residual > 0);
      SUCCEED("pair step constructed");
      break;
    } catch (const Error&) {
      continue;
    }
  }

  // (2,2) at 1e42 with default desk slack: 7^12 <= n^(1/4) admits h = 1
  const ExponentTuple k22({2, 2});
  const Natural big = pow_nat(10, 42) + 11;
  for (unsigned skip = 0; skip < 6; ++skip) {
    BasePrimes base = select_base_primes(big, k22, policy, skip);
    try {
      StepWitness w = construct_step_pair(big, k22, base, policy);
      CHECK(w.h >= 1);
      const Natural varpi_l = w.modulus(6 * k22.K());
      CHECK((pow_nat(w.y1, 2) + pow_nat(w.y2, 2)) % varpi_l == big % varpi_l);
      CHECK(std::min(w.y1, w.y2) > varpi_l);
      CHECK(recheck_step(w, k22, base, policy, "p").all_ok());
      break;
    } catch (const Error&) {
      continue;
    }
  }
}

TEST_CASE("base prime selection") {
  const BoundPolicy desk = BoundPolicy::desk();
  // t = 1: empty list, Omega_0 = 1
  BasePrimes none = select_base_primes(Natural("10000000019"), ExponentTuple({4}), desk, 0);
  CHECK(none.count() == 0);
  CHECK(none.omega(0) == 1);
  // (6,6) desk floor: first admissible prime over 5 coprime to 180 is 7
  BasePrimes b = select_base_primes(Natural("10000000019"), ExponentTuple({6, 6}), desk, 0);
  REQUIRE(b.count() == 1);
  CHECK(b.at(1) == 7);
  // the last slot dodges divisors of n
  BasePrimes dodged = select_base_primes(Natural(7) * 1000003, ExponentTuple({6, 6}), desk, 0);
  CHECK(dodged.at(1) == 11);
  // paper-faithful floor: first admissible prime above K^10 = 6^10,
  // frozen from a sieve: 60466181
  BasePrimes paper = select_base_primes(Natural("10000000019"), ExponentTuple({6, 6}),
                                        BoundPolicy::paper(), 0);
  CHECK(paper.at(1) == 60466181);
}
