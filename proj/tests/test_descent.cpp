#include <catch2/catch_amalgamated.hpp>

#include "waring/certificate.hpp"
#include "waring/descent.hpp"
#include "waring/endgame.hpp"
#include "waring/represent.hpp"

using namespace waring;

TEST_CASE("desk-scale descent and endgame, exponents (6,6)") {
  const ExponentTuple k({6, 6});
  const BoundPolicy policy = BoundPolicy::desk();
  for (const char* ns : {"1000000000037", "20000000000071", "300000000000000103",
                         "999999999999989"}) {
    const Natural n(ns);
    INFO("n = " << ns);
    DescentState st = run_descent(n, k, Mode::grh, policy);
    REQUIRE(st.r == 0);
    CHECK(st.conservation_holds());
    CHECK(recheck_state(st).all_ok());
    CHECK(st.upsilon() * st.m <= n);
    // (3.8) at r = 0 and the endgame preconditions
    CHECK(boost::multiprecision::gcd(st.m, 10) == 1);
    CHECK(st.m % 3 != 2);

    EndgameData eg = run_endgame(st, n, policy);
    CHECK(eg.lambda == st.upsilon());
    // exact 5-adic valuation: 5^(2h) || m - 2 lambda^2 p^3
    const Natural diff = st.m - 2 * eg.lambda * eg.lambda * pow_nat(eg.p, 3);
    CHECK(diff == eg.N);
    CHECK(eg.N % pow_nat(5, 2 * eg.h) == 0);
    CHECK(eg.N % pow_nat(5, 2 * eg.h + 1) != 0);
    CHECK(eg.N == eg.T * eg.M * eg.M);
    CHECK(boost::multiprecision::gcd(eg.T, eg.M) == 1);
    // N = m (mod 2) and N = m - 2 (mod 3)
    CHECK(eg.N % 2 == st.m % 2);
    CHECK(eg.N % 3 == (st.m + 1) % 3);
    CHECK(is_prime(eg.p));
    CHECK(eg.p % 3 == 1);
    // window (n/6)^(1/3) < lambda p < (n/3)^(1/3)
    const Natural lp3 = pow_nat(eg.lambda * eg.p, 3);
    CHECK(6 * lp3 > n);
    CHECK(3 * lp3 < n);
  }
}

TEST_CASE("full pipeline round-trip at desk scale") {
  RunConfig config;
  config.exponents = ExponentTuple({6, 6});
  const Natural n("1000000000000037");
  RepresentResult res = represent(n, config);
  REQUIRE(res.ok());
  const auto& cert = *res.certificate;
  CHECK(cert.x1 * cert.x1 + cert.x2 * cert.x2 + pow_nat(cert.x3, 3) +
            pow_nat(cert.x4, 3) + pow_nat(cert.y_final_working[0], 6) +
            pow_nat(cert.y_final_working[1], 6) ==
        n);
  CHECK(verify_certificate(cert).all_ok());
}

TEST_CASE("relabeled odd route (5,8)") {
  RunConfig config;
  config.exponents = ExponentTuple({5, 8});
  config.mode = Mode::unconditional;
  const Natural n("70000000000057");
  RepresentResult res = represent(n, config);
  REQUIRE(res.ok());
  const auto& cert = *res.certificate;
  // working order puts the odd exponent last: K = 8, k_t = 5
  CHECK(cert.exponents_working == std::vector<unsigned long>{8, 5});
  CHECK(cert.exponents_canonical == std::vector<unsigned long>{5, 8});
  CHECK(cert.relabel_perm == std::vector<unsigned>{1, 0});
  // the canonical y-vector maps back to the user's order: y[0] is the
  // 5th-power variable
  auto ys = cert.y_final_canonical();
  Natural total = cert.x1 * cert.x1 + cert.x2 * cert.x2 + pow_nat(cert.x3, 3) +
                  pow_nat(cert.x4, 3) + pow_nat(ys[0], 5) + pow_nat(ys[1], 8);
  CHECK(total == n);
  CHECK(verify_certificate(cert).all_ok());
  // the top step consumed the odd exponent: its residue prime is 2 (mod 5)
  CHECK(cert.steps.front().kind == StepKind::top);
  CHECK(cert.steps.front().prime % 5 == 2);
}

TEST_CASE("all-even pair route (2,2)") {
  RunConfig config;
  config.exponents = ExponentTuple({2, 2});
  config.mode = Mode::unconditional;
  const Natural n("400000000003001");
  RepresentResult res = represent(n, config);
  REQUIRE(res.ok());
  const auto& cert = *res.certificate;
  REQUIRE(cert.steps.size() == 1);
  CHECK(cert.steps.front().kind == StepKind::pair);
  CHECK(verify_certificate(cert).all_ok());
  Natural total = cert.x1 * cert.x1 + cert.x2 * cert.x2 + pow_nat(cert.x3, 3) +
                  pow_nat(cert.x4, 3);
  for (const auto& y : cert.y_final_working) total += y * y;
  CHECK(total == n);
}

TEST_CASE("t = 1 route (4) under ramanujan+grh") {
  RunConfig config;
  config.exponents = ExponentTuple({4});
  const Natural n("52000000000999");
  RepresentResult res = represent(n, config);
  REQUIRE(res.ok());
  const auto& cert = *res.certificate;
  CHECK(cert.mode == Mode::ramanujan_grh);
  REQUIRE(cert.steps.size() == 1);
  CHECK(cert.steps.front().kind == StepKind::top);
  CHECK(cert.base_primes.empty());
  CHECK(verify_certificate(cert).all_ok());
}

TEST_CASE("descent-only at paper-like scale keeps exact conservation, (6,6)") {
  const ExponentTuple k({6, 6});
  BoundPolicy policy = BoundPolicy::desk();
  policy.slack = 1;
  Natural n = pow_nat(10, 250);
  n += (23 - n % 77 + 77) % 77;  // 2 (mod 7), 1 (mod 11)
  DescentState st = run_descent(n, k, Mode::grh, policy);
  REQUIRE(st.r == 0);
  CHECK(recheck_state(st).all_ok());
  // real level lowering happened: both steps carry h >= 1
  for (const auto& s : st.steps) CHECK(s.h >= 1);
  CHECK(st.upsilon() > 1);
  Natural root;
  CHECK(is_perfect_square(st.upsilon(), &root));
  CHECK(root == st.sqrt_upsilon());
  CHECK(st.upsilon() % 2 == 1);
}

TEST_CASE("full pipeline with genuine level lowering, exponents (4) at 1e30") {
  RunConfig config;
  config.exponents = ExponentTuple({4});
  config.policy.slack = Rational(9, 10);
  const Natural n = pow_nat(10, 30) + 7;  // = 1 (mod 7): 7 is the fresh prime
  RepresentResult res = represent(n, config);
  REQUIRE(res.ok());
  const auto& cert = *res.certificate;
  REQUIRE(cert.steps.size() == 1);
  CHECK(cert.steps.front().h >= 1);
  CHECK(cert.endgame.lambda > 1);
  // lambda = varpi^(6h), an odd square with integral root
  Natural root;
  CHECK(is_perfect_square(cert.endgame.lambda, &root));
  CHECK(verify_certificate(cert).all_ok());
  // v5 exactness survives through the certificate
  const Natural five_2h = pow_nat(5, 2 * cert.endgame.h);
  CHECK(cert.endgame.N % five_2h == 0);
  CHECK(cert.endgame.N % (five_2h * 5) != 0);
}

TEST_CASE("theorem hypothesis report") {
  HypothesisReport rep = check_theorem21_hypotheses(Natural(55 * 25), 5);
  CHECK(rep.mod16_soluble == check_mod16(Natural(55 * 25), 5));
  CHECK(rep.ratio_5 == Rational(1375, 3125));
  REQUIRE(rep.ratio_21.has_value());
  // 1375 = 55 * 5^2: m = 5, so N m^12 / p^21
  CHECK(*rep.ratio_21 == Rational(Natural(1375) * pow_nat(5, 12), pow_nat(5, 21)));
  CHECK_FALSE(rep.coprime_6p);  // 5 | 1375
  HypothesisReport rep2 = check_theorem21_hypotheses(Natural(143), 5);
  CHECK(rep2.coprime_6p);
}

TEST_CASE("run_descent input guards") {
  const ExponentTuple k({6, 6});
  const BoundPolicy policy = BoundPolicy::desk();
  // mode not admitted
  CHECK_THROWS_AS(run_descent(Natural("1000000000037"), k, Mode::unconditional, policy),
                  Error);
  // below the policy minimum
  CHECK_THROWS_AS(run_descent(Natural(1000), k, Mode::grh, policy), Error);
}

TEST_CASE("failures carry structured reasons") {
  RunConfig config;
  config.exponents = ExponentTuple({6, 6});
  config.policy.min_n = 10;
  config.policy.retries = 2;
  // tiny n: descent may run but the endgame prime window is hopeless
  RepresentResult res = represent(Natural(1009), config);
  REQUIRE_FALSE(res.ok());
  REQUIRE(res.failure.has_value());
  CHECK_FALSE(res.failure->stage.empty());
  CHECK_FALSE(res.failure->message.empty());
}
