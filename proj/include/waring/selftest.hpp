#pragma once

#include <iostream>
#include <set>
#include <string>

#include "waring/modular.hpp"
#include "waring/natural.hpp"
#include "waring/primality.hpp"
#include "waring/ternary.hpp"
#include "waring/two_squares.hpp"

namespace waring {

// Condensed oracle equivalences, each against an independent enumeration.
// The full-depth versions live in the test suite; this is the runtime sanity
// surface behind `waring selftest`.
inline bool selftest(std::ostream& os) {
  bool all = true;
  auto line = [&](const std::string& name, bool ok) {
    os << (ok ? "PASS " : "FAIL ") << name << "\n";
    all = all && ok;
  };

  {
    bool ok = true;
    for (std::uint64_t n = 0; n < 2000; ++n) {
      bool naive = n >= 2;
      for (std::uint64_t d = 2; d * d <= n && naive; ++d)
        if (n % d == 0) naive = false;
      if (is_prime(Natural(n)) != naive) ok = false;
    }
    line("primality vs trial division (n < 2000)", ok);
  }
  {
    bool ok = true;
    for (Natural p : {Natural(3), Natural(5), Natural(7), Natural(11), Natural(13),
                      Natural(17), Natural(19), Natural(23)}) {
      for (unsigned long k = 1; k <= 6 && ok; ++k) {
        std::set<Natural> image;
        for (Natural y = 1; y < p; ++y) image.insert(mod_pow(y, k, p));
        for (Natural m = 1; m < p && ok; ++m)
          ok = kth_power_residue(m, k, p) == (image.count(m) > 0);
      }
    }
    line("k-th power residue vs enumeration (p <= 23, k <= 6)", ok);
  }
  {
    bool ok = true;
    for (Natural p : {Natural(5), Natural(7), Natural(11)}) {
      for (unsigned long k = 2; k <= 4 && ok; ++k) {
        if (Natural(k) % p == 0) continue;
        const Natural mod = p * p * p;
        for (Natural z = 1; z < mod && ok; ++z) {
          if (z % p == 0) continue;
          const Natural m = mod_pow(z, k, mod);
          ok = hensel_lift_power(z % p == 0 ? p : z % p, k, m, p, 3) == z;
        }
      }
    }
    line("Hensel lifts vs direct roots (p <= 11, k <= 4, l = 3)", ok);
  }
  {
    bool ok = true;
    for (std::uint64_t n = 0; n <= 5000 && ok; ++n) {
      bool sweep_any = false, sweep_pos = false;
      for (std::uint64_t x = 0; x * x <= n; ++x) {
        const std::uint64_t y2 = n - x * x;
        const std::uint64_t y = static_cast<std::uint64_t>(
            std::sqrt(static_cast<double>(y2)));
        for (std::uint64_t yy = y > 0 ? y - 1 : 0; yy <= y + 1; ++yy)
          if (yy * yy == y2) {
            sweep_any = true;
            if (x >= 1 && yy >= 1) sweep_pos = true;
          }
      }
      auto any = two_squares(n, false);
      auto pos = two_squares(n, true);
      ok = any.has_value() == sweep_any && pos.has_value() == sweep_pos;
      if (any) ok = ok && any->first * any->first + any->second * any->second == n;
      if (pos) ok = ok && pos->second >= 1;
    }
    line("two-squares vs sweep (n <= 5000)", ok);
  }
  {
    bool ok = true;
    for (Natural p : {Natural(5), Natural(7)}) {
      for (std::uint64_t N = 1; N <= 500 && ok; ++N) {
        SolveBudget b;
        TernaryResult r = solve_ternary({Natural(N), p, true}, b);
        Natural cnt = count_representations({Natural(N), p, true});
        ok = (r.outcome == TernaryOutcome::found) == (cnt > 0);
      }
    }
    line("ternary solve vs exhaustive count (N <= 500, p in {5,7})", ok);
  }
  {
    bool ok = true;
    for (Natural p = 3; p <= 97 && ok; p = next_prime(p))
      for (Natural lam : {Natural(1), Natural(3), Natural(9)})
        ok = ok && check_mod16_shifted_coverage(p, lam);
    line("mod-16 shifted coverage (p <= 97)", ok);
  }
  os << (all ? "selftest: all checks passed\n" : "selftest: FAILURES present\n");
  return all;
}

}  // namespace waring
