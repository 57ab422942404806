#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "waring/represent.hpp"
#include "waring/serialize.hpp"

using namespace waring;

namespace {

RepresentationCertificate make_cert(const char* n_str = "1000000000000037") {
  RunConfig config;
  config.exponents = ExponentTuple({6, 6});
  auto res = represent(Natural(n_str), config);
  REQUIRE(res.ok());
  return *res.certificate;
}

}  // namespace

TEST_CASE("JSON round-trip preserves the certificate") {
  RepresentationCertificate cert = make_cert();
  json j = certificate_to_json(cert);
  RepresentationCertificate back = certificate_from_json(j);
  CHECK(certificate_to_json(back) == j);
  CHECK(verify_certificate(back).all_ok());
  // bytes are stable across repeated dumps
  CHECK(certificate_to_string(cert) == certificate_to_string(back));
}

TEST_CASE("file round-trip") {
  RepresentationCertificate cert = make_cert();
  const std::string path = "roundtrip_cert.json";
  write_certificate(cert, path);
  RepresentationCertificate back = read_certificate(path);
  CHECK(verify_certificate(back).all_ok());
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_certificate("does_not_exist.json"), Error);
}

TEST_CASE("malformed files are input errors") {
  const std::string path = "broken_cert.json";
  {
    std::ofstream out(path);
    out << "{ \"format_version\": 1, \"n\": \"12";  // truncated
  }
  CHECK_THROWS_AS(read_certificate(path), Error);
  {
    std::ofstream out(path);
    out << "{ \"format_version\": 1 }";  // missing fields
  }
  CHECK_THROWS_AS(read_certificate(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("single-field mutations are caught and named") {
  RepresentationCertificate cert = make_cert();
  REQUIRE(verify_certificate(cert).all_ok());

  auto mutate = [&](auto&& fn) {
    RepresentationCertificate copy = cert;
    fn(copy);
    CheckReport rep = verify_certificate(copy);
    CHECK_FALSE(rep.all_ok());
    CHECK_FALSE(rep.first_failure().empty());
    return rep.first_failure();
  };

  // x1 perturbed: the final sum breaks first
  CHECK(mutate([](auto& c) { c.x1 += 1; }) == "final_sum");
  mutate([](auto& c) { c.x3 += 1; });
  mutate([](auto& c) { c.n += 2; });
  mutate([](auto& c) { c.y_final_working[0] += 1; });
  mutate([](auto& c) { c.endgame.p = c.endgame.p * 3; });  // composite
  mutate([](auto& c) { c.endgame.B += 1; });
  mutate([](auto& c) { c.endgame.T += 1; });
  mutate([](auto& c) { c.endgame.N += 25; });
  mutate([](auto& c) { c.ternary.x += 1; });
  mutate([](auto& c) { c.steps[0].y1 += 1; });
  mutate([](auto& c) { c.steps[0].m_out += 1; });
  mutate([](auto& c) { c.steps[0].prime = 9; });  // composite pool prime
  mutate([](auto& c) { c.base_primes[0] = 15; });
  mutate([](auto& c) { c.endgame.lambda *= 9; });
}

TEST_CASE("h >= 1 certificates catch y tampering in condition (a)") {
  RunConfig config;
  config.exponents = ExponentTuple({4});
  config.policy.slack = Rational(9, 10);
  auto res = represent(pow_nat(10, 30) + 7, config);
  REQUIRE(res.ok());
  RepresentationCertificate cert = *res.certificate;
  REQUIRE(cert.steps[0].h >= 1);
  // shift y by the CRT modulus times the prime power: conditions (c)-(d)
  // style placement survives but the congruence (a) must fail
  RepresentationCertificate bad = cert;
  bad.steps[0].y1 += 1;
  CheckReport rep = verify_certificate(bad);
  CHECK_FALSE(rep.all_ok());
  bool condition_a_failed = false;
  for (const auto& item : rep.items)
    if (item.name == "step0.condition_a" && !item.ok) condition_a_failed = true;
  // either the structural y = z + g*varpi^l check or (a) names the tamper
  bool structure_failed = false;
  for (const auto& item : rep.items)
    if (item.name == "step0.y_structure" && !item.ok) structure_failed = true;
  CHECK((condition_a_failed || structure_failed));
}

TEST_CASE("verifier rejects ladder shape tampering") {
  RepresentationCertificate cert = make_cert();
  RepresentationCertificate bad = cert;
  bad.steps[0].kind = StepKind::mid;  // top step relabeled as mid
  CHECK_FALSE(verify_certificate(bad).all_ok());
  RepresentationCertificate bad2 = cert;
  bad2.steps.pop_back();
  CHECK_FALSE(verify_certificate(bad2).all_ok());
  RepresentationCertificate bad3 = cert;
  bad3.relabel_perm = {1, 1};
  CHECK_FALSE(verify_certificate(bad3).all_ok());
}
