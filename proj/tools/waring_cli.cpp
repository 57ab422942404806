// waring: feasibility checks, constructive representations, certificate
// verification, ternary form experiments, and exhaustive scans for the form
// x1^2 + x2^2 + x3^3 + x4^3 + sum y_j^(k_j).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "waring/endgame.hpp"
#include "waring/represent.hpp"
#include "waring/scan.hpp"
#include "waring/selftest.hpp"
#include "waring/serialize.hpp"

namespace {

using namespace waring;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitBudget = 4;
constexpr int kExitVerification = 5;

int exit_code(Errc code) {
  switch (code) {
    case Errc::input: return kExitInput;
    case Errc::construction: return kExitConstruction;
    case Errc::budget: return kExitBudget;
    case Errc::verification: return kExitVerification;
    case Errc::internal: return 1;
  }
  return 1;
}

std::vector<unsigned long> parse_exponent_list(const std::string& s) {
  std::vector<unsigned long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw input_error("empty exponent in list");
    for (char c : item)
      if (c < '0' || c > '9') throw input_error("malformed exponent \"" + item + "\"");
    unsigned long k = std::stoul(item);
    out.push_back(k);
  }
  if (out.empty()) throw input_error("no exponents given");
  return out;
}

// The CLI's tail joins the fixed 2,2,3,3 prefix; squares in the tail are
// rejected at this surface (the library itself accepts k >= 2).
void require_tail_exponents(const std::vector<unsigned long>& ks) {
  for (unsigned long k : ks)
    if (k < 3)
      throw input_error("exponent " + std::to_string(k) +
                        " below minimum for the tail (tail exponents join "
                        "2,2,3,3 which are fixed; use >= 3)");
}

struct CliOptions {
  std::string exponents = "6,6";
  std::string mode;
  std::string policy = "desk";
  std::string omega, nu, epsilon, c;
  std::uint64_t budget_z = 0;
  std::uint64_t budget_rho = 0;
  unsigned retries = 0;
  unsigned workers = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
};

// WARING_CONFIG points at a JSON file of defaults; explicit flags win.
void apply_config_file(CliOptions& opt) {
  const char* path = std::getenv("WARING_CONFIG");
  if (!path || !*path) return;
  std::ifstream in(path);
  if (!in) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (...) {
    throw input_error(std::string("cannot parse config file ") + path);
  }
  if (j.contains("exponents")) opt.exponents = j["exponents"].get<std::string>();
  if (j.contains("mode")) opt.mode = j["mode"].get<std::string>();
  if (j.contains("policy")) opt.policy = j["policy"].get<std::string>();
  if (j.contains("omega")) opt.omega = j["omega"].get<std::string>();
  if (j.contains("nu")) opt.nu = j["nu"].get<std::string>();
  if (j.contains("epsilon")) opt.epsilon = j["epsilon"].get<std::string>();
  if (j.contains("c")) opt.c = j["c"].get<std::string>();
  if (j.contains("budget_z")) opt.budget_z = j["budget_z"].get<std::uint64_t>();
  if (j.contains("budget_rho")) opt.budget_rho = j["budget_rho"].get<std::uint64_t>();
  if (j.contains("retries")) opt.retries = j["retries"].get<unsigned>();
  if (j.contains("workers")) opt.workers = j["workers"].get<unsigned>();
  if (j.contains("seed")) opt.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("format")) opt.format = j["format"].get<std::string>();
}

BoundPolicy build_policy(const CliOptions& opt) {
  BoundPolicy p = opt.policy == "paper" ? BoundPolicy::paper() : BoundPolicy::desk();
  if (opt.policy != "paper" && opt.policy != "desk")
    throw input_error("unknown policy \"" + opt.policy + "\" (desk|paper)");
  if (!opt.c.empty()) p.c_base = detail::parse_rational(opt.c);
  if (!opt.omega.empty()) p.omega = detail::parse_rational(opt.omega);
  if (!opt.nu.empty()) p.nu = detail::parse_rational(opt.nu);
  if (!opt.epsilon.empty()) p.epsilon = detail::parse_rational(opt.epsilon);
  if (opt.budget_z) p.budget_z = opt.budget_z;
  if (opt.budget_rho) p.budget_rho = opt.budget_rho;
  if (opt.retries) p.retries = opt.retries;
  if (opt.workers) p.workers = opt.workers;
  return p;
}

void add_common_flags(CLI::App* cmd, CliOptions& opt, bool with_exponents = true) {
  if (with_exponents)
    cmd->add_option("--exponents", opt.exponents, "comma-separated tail exponents");
  cmd->add_option("--mode", opt.mode,
                  "grh | unconditional | ramanujan | ramanujan+grh");
  cmd->add_option("--policy", opt.policy, "desk | paper");
  cmd->add_option("--omega", opt.omega, "override window scaling omega (rational)");
  cmd->add_option("--nu", opt.nu, "target offset nu (rational)");
  cmd->add_option("--epsilon", opt.epsilon, "window epsilon (rational)");
  cmd->add_option("--c", opt.c, "override c base (rational, 2 or 12/5)");
  cmd->add_option("--budget-z", opt.budget_z, "ternary sweep budget");
  cmd->add_option("--budget-rho", opt.budget_rho, "factorization budget");
  cmd->add_option("--retries", opt.retries, "retry attempts per stage");
  cmd->add_option("--workers", opt.workers, "ternary sweep worker threads");
  cmd->add_option("--seed", opt.seed, "deterministic run seed");
  cmd->add_option("--out", opt.out, "output path");
  cmd->add_option("--format", opt.format, "text | json");
}

std::string rat(const Rational& r) { return detail::rat_str(r); }

int cmd_feasibility(const CliOptions& opt) {
  auto ks = parse_exponent_list(opt.exponents);
  require_tail_exponents(ks);
  ExponentTuple tuple(ks);
  FeasibilityVerdict v = check_feasibility(tuple);

  const Rational t_grh(12, 17), t_unc(74, 105), t_ram(5, 6);
  if (opt.format == "json") {
    json j;
    j["exponents"] = tuple.canonical();
    j["gamma"] = rat(v.gamma_value);
    if (v.gamma_tilde_value) j["gamma_tilde"] = rat(*v.gamma_tilde_value);
    j["all_even"] = v.all_even;
    j["routes"] = {
        {"grh", {{"feasible", v.grh}, {"threshold", "12/17"}}},
        {"unconditional",
         {{"feasible", v.unconditional}, {"threshold", "74/105"},
          {"via_pair", v.unconditional_via_pair}}},
        {"ramanujan",
         {{"feasible", v.ramanujan}, {"threshold", "5/6"},
          {"via_pair", v.ramanujan_via_pair}}},
        {"ramanujan+grh", {{"feasible", v.ramanujan_grh}, {"threshold", "5/6"}}}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "exponents: ";
  for (std::size_t i = 0; i < tuple.canonical().size(); ++i)
    std::cout << (i ? "," : "") << tuple.canonical()[i];
  std::cout << "\ngamma       = " << rat(v.gamma_value) << "\n";
  if (v.gamma_tilde_value)
    std::cout << "gamma~      = " << rat(*v.gamma_tilde_value) << "\n";
  else
    std::cout << "gamma~      = n/a (t = 1)\n";
  auto cmp = [&](const Rational& a, const Rational& b) {
    return rat(a) + (a < b ? " < " : " >= ") + rat(b);
  };
  std::cout << "grh           " << (v.grh ? "feasible" : "not feasible") << "  ["
            << cmp(v.gamma_value, t_grh) << "]\n";
  std::cout << "unconditional " << (v.unconditional ? "feasible" : "not feasible");
  if (v.gamma_tilde_value)
    std::cout << "  [gamma~ " << cmp(*v.gamma_tilde_value, t_unc) << "; gamma "
              << cmp(v.gamma_value, t_unc) << "; "
              << (v.all_even ? "all even" : "odd exponent present") << "]";
  else
    std::cout << "  [gamma " << cmp(v.gamma_value, t_unc) << "; "
              << (v.all_even ? "all even" : "odd exponent present") << "]";
  std::cout << "\n";
  std::cout << "ramanujan     " << (v.ramanujan ? "feasible" : "not feasible")
            << "\n";
  std::cout << "ramanujan+grh " << (v.ramanujan_grh ? "feasible" : "not feasible")
            << "  [" << cmp(v.gamma_value, t_ram) << "]\n";
  return kExitOk;
}

int cmd_represent(const std::string& n_str, const CliOptions& opt) {
  const Natural n = parse_natural(n_str);
  auto ks = parse_exponent_list(opt.exponents);
  require_tail_exponents(ks);
  RunConfig config{ExponentTuple(ks), std::nullopt, build_policy(opt), opt.seed};
  if (!opt.mode.empty()) {
    auto m = parse_mode(opt.mode);
    if (!m) throw input_error("unknown mode \"" + opt.mode + "\"");
    config.mode = *m;
  }

  RepresentResult res = represent(n, config);
  if (!res.ok()) {
    std::cerr << "representation failed after " << res.attempts
              << " attempt(s): [" << res.failure->stage << "] "
              << res.failure->message << "\n";
    return exit_code(res.failure->code);
  }
  const RepresentationCertificate& cert = *res.certificate;
  const std::string path = opt.out.empty() ? "cert_" + dec(n) + ".json" : opt.out;
  write_certificate(cert, path);

  if (opt.format == "json") {
    json j;
    j["n"] = dec(n);
    j["certificate"] = path;
    j["attempts"] = res.attempts;
    j["x"] = {dec(cert.x1), dec(cert.x2), dec(cert.x3), dec(cert.x4)};
    json yj = json::array();
    for (const auto& y : cert.y_final_canonical()) yj.push_back(dec(y));
    j["y"] = yj;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "n = " << dec(n) << "\n  = " << dec(cert.x1) << "^2 + "
            << dec(cert.x2) << "^2 + " << dec(cert.x3) << "^3 + " << dec(cert.x4)
            << "^3";
  auto ys = cert.y_final_canonical();
  for (std::size_t j = 0; j < ys.size(); ++j)
    std::cout << " + " << dec(ys[j]) << "^" << cert.exponents_canonical[j];
  std::cout << "\nmode " << mode_name(cert.mode) << ", attempts " << res.attempts
            << "\n";
  std::cout << "stages:\n";
  for (const auto& s : cert.steps) {
    std::cout << "  " << step_kind_name(s.kind) << " stage " << s.stage
              << ": prime " << dec(s.prime) << ", h " << s.h << ", y "
              << dec(s.y1);
    if (s.kind == StepKind::pair) std::cout << ", " << dec(s.y2);
    std::cout << ", residual " << dec(s.m_out) << "\n";
  }
  std::cout << "endgame: lambda " << dec(cert.endgame.lambda) << ", 5-adic h "
            << cert.endgame.h << ", B " << dec(cert.endgame.B) << ", nu "
            << cert.endgame.nu << ", p " << dec(cert.endgame.p) << "\n";
  std::cout << "ternary: N " << dec(cert.endgame.N) << " = T "
            << dec(cert.endgame.T) << " * M^2, M " << dec(cert.endgame.M)
            << "; (v, w, z0) = (" << dec(cert.ternary.x) << ", "
            << dec(cert.ternary.y) << ", " << dec(cert.ternary.z) << ")\n";
  std::cout << "certificate written to " << path << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& path, const CliOptions& opt) {
  RepresentationCertificate cert = read_certificate(path);
  CheckReport rep = verify_certificate(cert);
  if (opt.format == "json") {
    json j;
    j["file"] = path;
    j["pass"] = rep.all_ok();
    json items = json::array();
    for (const auto& item : rep.items)
      items.push_back({{"check", item.name}, {"ok", item.ok}});
    j["checks"] = items;
    if (!rep.all_ok()) j["first_failure"] = rep.first_failure();
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& item : rep.items)
      std::cout << (item.ok ? "  ok " : "FAIL ") << item.name
                << (item.detail.empty() ? "" : "  (" + item.detail + ")") << "\n";
    std::cout << (rep.all_ok() ? "PASS" : "FAIL: " + rep.first_failure()) << "\n";
  }
  return rep.all_ok() ? kExitOk : kExitVerification;
}

int cmd_ternary(const std::string& n_str, const std::string& p_str, bool count_mode,
                bool allow_zero, const CliOptions& opt) {
  const Natural N = parse_natural(n_str);
  const Natural p = parse_natural(p_str);
  if (!is_prime(p)) throw input_error("p must be prime");

  HypothesisReport hyp = check_theorem21_hypotheses(N, p);
  if (!hyp.coprime_6p)
    std::cout << "warning: gcd(N, 6p) > 1, the existence theorem's hypothesis "
                 "(i) fails; attempting anyway\n";
  std::cout << "hypotheses: (i) coprime to 6p: " << (hyp.coprime_6p ? "yes" : "no")
            << "; (ii) mod-16 soluble: " << (hyp.mod16_soluble ? "yes" : "no")
            << "\n";
  if (hyp.ratio_21)
    std::cout << "  (iii) N*m^12 / p^21 = " << rat(*hyp.ratio_21)
              << "  (N = t*m^2 split)\n";
  std::cout << "  (iii') N / p^5 = " << rat(hyp.ratio_5) << "\n";

  if (count_mode) {
    Natural c = count_representations({N, p, true});
    std::cout << "ordered representations N = x^2 + y^2 + 6*" << dec(p)
              << "*z^2 (x,y,z >= 1): " << dec(c) << "\n";
    return kExitOk;
  }
  SolveBudget budget;
  if (opt.budget_z) budget.max_z = opt.budget_z;
  if (opt.budget_rho) budget.rho_per_candidate = opt.budget_rho;
  budget.workers = opt.workers ? opt.workers : 1;
  budget.seed = opt.seed;
  TernaryResult res = solve_ternary({N, p, !allow_zero}, budget);
  switch (res.outcome) {
    case TernaryOutcome::found:
      std::cout << "solution: x " << dec(res.solution->x) << ", y "
                << dec(res.solution->y) << ", z " << dec(res.solution->z) << "\n";
      return kExitOk;
    case TernaryOutcome::proven_absent:
      std::cout << "proven absent: full z range swept, no solution\n";
      return kExitOk;
    case TernaryOutcome::budget_exhausted:
      std::cout << "budget exhausted after " << res.z_tried
                << " z values; undecided\n";
      return kExitBudget;
  }
  return 1;
}

int cmd_scan(const CliOptions& opt, std::uint64_t limit) {
  auto ks = parse_exponent_list(opt.exponents);
  require_tail_exponents(ks);
  ScanReport rep = scan_form(ks, limit, opt.out);
  if (opt.format == "json") {
    json j;
    j["form"] = {{"prefix", {2, 2, 3, 3}}, {"tail", rep.tail_exponents}};
    j["limit"] = rep.limit;
    j["representable"] = rep.representable_count;
    j["witnesses_verified"] = rep.witnesses_verified;
    j["unrepresented_count"] = rep.unrepresented.size();
    j["unrepresented"] = rep.unrepresented;
    j["seconds"] = rep.seconds;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "form 2,2,3,3";
  for (unsigned long k : rep.tail_exponents) std::cout << "," << k;
  std::cout << " up to " << rep.limit << "\n";
  std::cout << "representable: " << rep.representable_count << " (witnesses verified: "
            << rep.witnesses_verified << ")\n";
  std::cout << "unrepresented: " << rep.unrepresented.size() << "\n";
  for (std::uint64_t n : rep.unrepresented) std::cout << "  " << n << "\n";
  std::cout << "elapsed: " << rep.seconds << " s\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"level-lowering representations by two squares, two cubes and "
               "higher-power tails"};
  app.require_subcommand(1);

  CliOptions opt;
  try {
    apply_config_file(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  auto* feas = app.add_subcommand("feasibility", "route feasibility for a tuple");
  add_common_flags(feas, opt);

  std::string n_arg;
  auto* repr = app.add_subcommand("represent", "construct and certify a representation");
  repr->add_option("n", n_arg, "the integer to represent")->required();
  add_common_flags(repr, opt);

  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "verify a certificate file");
  verify->add_option("file", cert_path, "certificate JSON")->required();
  add_common_flags(verify, opt, false);

  std::string tern_n, tern_p;
  bool count_mode = false, allow_zero = false;
  auto* tern = app.add_subcommand("ternary", "solve or count x^2+y^2+6pz^2 = N");
  tern->add_option("N", tern_n, "target")->required();
  tern->add_option("p", tern_p, "prime coefficient")->required();
  tern->add_flag("--count", count_mode, "exhaustively count instead of solving");
  tern->add_flag("--allow-zero", allow_zero, "permit zero components");
  add_common_flags(tern, opt, false);

  std::uint64_t scan_limit = 1000000;
  auto* scan = app.add_subcommand("scan", "exhaustive representability scan");
  scan->add_option("--limit", scan_limit, "scan n <= limit (cap 1e7)");
  add_common_flags(scan, opt);

  auto* selftest = app.add_subcommand("selftest", "condensed oracle self-checks");
  add_common_flags(selftest, opt, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(feas)) return cmd_feasibility(opt);
    if (app.got_subcommand(repr)) return cmd_represent(n_arg, opt);
    if (app.got_subcommand(verify)) return cmd_verify(cert_path, opt);
    if (app.got_subcommand(tern))
      return cmd_ternary(tern_n, tern_p, count_mode, allow_zero, opt);
    if (app.got_subcommand(scan)) return cmd_scan(opt, scan_limit);
    if (app.got_subcommand(selftest)) return waring::selftest(std::cout) ? 0 : 1;
  } catch (const FactorBudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
