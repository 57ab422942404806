#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "waring/certificate.hpp"
#include "waring/errors.hpp"

namespace waring {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string rat_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_natural(s));
  return Rational(parse_natural(s.substr(0, slash)),
                  parse_natural(s.substr(slash + 1)));
}

inline json step_to_json(const StepWitness& w) {
  json j;
  j["kind"] = step_kind_name(w.kind);
  j["stage"] = w.stage;
  j["consumes"] = w.consumes;
  j["prime"] = dec(w.prime);
  j["h"] = w.h;
  j["z"] = dec(w.z);
  j["g"] = dec(w.g);
  if (w.weil) j["weil"] = {{"w", dec(w.weil->w)}, {"v", dec(w.weil->v)}};
  if (w.weil2) j["weil2"] = {{"w", dec(w.weil2->w)}, {"v", dec(w.weil2->v)}};
  j["y1"] = dec(w.y1);
  if (w.kind == StepKind::pair) j["y2"] = dec(w.y2);
  j["m_in"] = dec(w.m_in);
  j["m_out"] = dec(w.m_out);
  return j;
}

inline StepWitness step_from_json(const json& j) {
  StepWitness w;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "top")
    w.kind = StepKind::top;
  else if (kind == "mid")
    w.kind = StepKind::mid;
  else if (kind == "pair")
    w.kind = StepKind::pair;
  else
    throw input_error("certificate: unknown step kind \"" + kind + "\"");
  w.stage = j.at("stage").get<unsigned>();
  w.consumes = j.at("consumes").get<std::vector<unsigned>>();
  w.prime = parse_natural(j.at("prime").get<std::string>());
  w.h = j.at("h").get<unsigned long>();
  w.z = parse_natural(j.at("z").get<std::string>());
  w.g = parse_natural(j.at("g").get<std::string>());
  if (j.contains("weil"))
    w.weil = WeilPair{parse_natural(j.at("weil").at("w").get<std::string>()),
                      parse_natural(j.at("weil").at("v").get<std::string>())};
  if (j.contains("weil2"))
    w.weil2 = WeilPair{parse_natural(j.at("weil2").at("w").get<std::string>()),
                       parse_natural(j.at("weil2").at("v").get<std::string>())};
  w.y1 = parse_natural(j.at("y1").get<std::string>());
  if (w.kind == StepKind::pair)
    w.y2 = parse_natural(j.at("y2").get<std::string>());
  w.m_in = parse_natural(j.at("m_in").get<std::string>());
  w.m_out = parse_natural(j.at("m_out").get<std::string>());
  return w;
}

}  // namespace detail

inline json certificate_to_json(const RepresentationCertificate& cert) {
  json j;
  j["format_version"] = cert.format_version;
  j["n"] = dec(cert.n);
  j["mode"] = mode_name(cert.mode);
  j["policy"] = {{"mode", policy_mode_name(cert.policy_mode)},
                 {"c", detail::rat_str(cert.policy_c)},
                 {"omega", detail::rat_str(cert.policy_omega)},
                 {"slack", detail::rat_str(cert.policy_slack)}};
  j["seed"] = cert.seed;
  j["exponents"] = {{"canonical", cert.exponents_canonical},
                    {"working", cert.exponents_working},
                    {"perm", cert.relabel_perm}};
  json primes = json::array();
  for (const auto& p : cert.base_primes) primes.push_back(dec(p));
  j["base_primes"] = primes;
  json steps = json::array();
  for (const auto& s : cert.steps) steps.push_back(detail::step_to_json(s));
  j["steps"] = steps;
  j["endgame"] = {{"lambda", dec(cert.endgame.lambda)},
                  {"h", cert.endgame.h},
                  {"B", dec(cert.endgame.B)},
                  {"nu", cert.endgame.nu},
                  {"p", dec(cert.endgame.p)},
                  {"T", dec(cert.endgame.T)},
                  {"M", dec(cert.endgame.M)},
                  {"N", dec(cert.endgame.N)}};
  j["ternary"] = {{"v", dec(cert.ternary.x)},
                  {"w", dec(cert.ternary.y)},
                  {"z0", dec(cert.ternary.z)}};
  json yf = json::array();
  for (const auto& y : cert.y_final_canonical()) yf.push_back(dec(y));
  j["assembled"] = {{"x1", dec(cert.x1)},
                    {"x2", dec(cert.x2)},
                    {"x3", dec(cert.x3)},
                    {"x4", dec(cert.x4)},
                    {"y", yf}};
  return j;
}

inline RepresentationCertificate certificate_from_json(const json& j) {
  RepresentationCertificate cert;
  cert.format_version = j.at("format_version").get<unsigned>();
  if (cert.format_version != 1)
    throw input_error("certificate: unsupported format_version");
  cert.n = parse_natural(j.at("n").get<std::string>());
  auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw input_error("certificate: unknown mode");
  cert.mode = *mode;
  const auto& pol = j.at("policy");
  cert.policy_mode = pol.at("mode").get<std::string>() == "paper-faithful"
                         ? PolicyMode::paper_faithful
                         : PolicyMode::desk_scale;
  cert.policy_c = detail::parse_rational(pol.at("c").get<std::string>());
  cert.policy_omega = detail::parse_rational(pol.at("omega").get<std::string>());
  cert.policy_slack = detail::parse_rational(pol.at("slack").get<std::string>());
  cert.seed = j.at("seed").get<std::uint64_t>();
  const auto& ex = j.at("exponents");
  cert.exponents_canonical = ex.at("canonical").get<std::vector<unsigned long>>();
  cert.exponents_working = ex.at("working").get<std::vector<unsigned long>>();
  cert.relabel_perm = ex.at("perm").get<std::vector<unsigned>>();
  for (const auto& p : j.at("base_primes"))
    cert.base_primes.push_back(parse_natural(p.get<std::string>()));
  for (const auto& s : j.at("steps"))
    cert.steps.push_back(detail::step_from_json(s));
  const auto& eg = j.at("endgame");
  cert.endgame.lambda = parse_natural(eg.at("lambda").get<std::string>());
  cert.endgame.h = eg.at("h").get<unsigned long>();
  cert.endgame.B = parse_natural(eg.at("B").get<std::string>());
  cert.endgame.nu = eg.at("nu").get<unsigned>();
  cert.endgame.p = parse_natural(eg.at("p").get<std::string>());
  cert.endgame.T = parse_natural(eg.at("T").get<std::string>());
  cert.endgame.M = parse_natural(eg.at("M").get<std::string>());
  cert.endgame.N = parse_natural(eg.at("N").get<std::string>());
  const auto& tn = j.at("ternary");
  cert.ternary.x = parse_natural(tn.at("v").get<std::string>());
  cert.ternary.y = parse_natural(tn.at("w").get<std::string>());
  cert.ternary.z = parse_natural(tn.at("z0").get<std::string>());
  const auto& as = j.at("assembled");
  cert.x1 = parse_natural(as.at("x1").get<std::string>());
  cert.x2 = parse_natural(as.at("x2").get<std::string>());
  cert.x3 = parse_natural(as.at("x3").get<std::string>());
  cert.x4 = parse_natural(as.at("x4").get<std::string>());
  std::vector<Natural> y_canonical;
  for (const auto& y : as.at("y"))
    y_canonical.push_back(parse_natural(y.get<std::string>()));
  if (y_canonical.size() != cert.relabel_perm.size())
    throw input_error("certificate: tail length mismatch");
  cert.y_final_working.resize(y_canonical.size());
  for (std::size_t i = 0; i < y_canonical.size(); ++i) {
    if (cert.relabel_perm[i] >= y_canonical.size())
      throw input_error("certificate: bad relabel permutation");
    cert.y_final_working[i] = y_canonical[cert.relabel_perm[i]];
  }
  return cert;
}

inline std::string certificate_to_string(const RepresentationCertificate& cert) {
  return certificate_to_json(cert).dump(2) + "\n";
}

inline void write_certificate(const RepresentationCertificate& cert,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open certificate output path: " + path);
  out << certificate_to_string(cert);
}

inline RepresentationCertificate read_certificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open certificate file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("certificate parse error: ") + e.what());
  }
  try {
    return certificate_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("certificate field error: ") + e.what());
  }
}

}  // namespace waring
