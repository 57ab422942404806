#pragma once

#include <optional>
#include <vector>

#include "waring/errors.hpp"
#include "waring/modular.hpp"
#include "waring/natural.hpp"

namespace waring {

struct WeilPair {
  Natural w, v;
};

namespace detail {

// Smallest witness for each attainable residue of c*x^k mod varpi, x in
// [1, varpi-1]. varpi stays small (it is a pool prime), so the table is cheap.
inline std::vector<std::optional<Natural>> power_residue_table(
    const Natural& c, unsigned long k, const Natural& varpi) {
  const std::size_t q = static_cast<std::size_t>(to_u64(varpi));
  std::vector<std::optional<Natural>> table(q);
  for (Natural x = 1; x < varpi; ++x) {
    std::size_t r = static_cast<std::size_t>(to_u64(c % varpi * mod_pow(x, k, varpi) % varpi));
    if (!table[r]) table[r] = x;
  }
  return table;
}

}  // namespace detail

// Lexicographically smallest (w, v) with c1*w^k1 + c2*v^k2 = target
// (mod varpi) and varpi not dividing w*v, by grid enumeration. nullopt when
// the congruence has no such solution (possible only for varpi small relative
// to k1*k2).
inline std::optional<WeilPair> solve_weil(const Natural& c1, const Natural& c2,
                                          const Natural& target, unsigned long k1,
                                          unsigned long k2, const Natural& varpi) {
  if (c1 % varpi == 0 || c2 % varpi == 0)
    throw input_error("solve_weil: varpi divides a coefficient");
  auto table = detail::power_residue_table(c2, k2, varpi);
  const Natural t = target % varpi;
  for (Natural w = 1; w < varpi; ++w) {
    Natural lhs = c1 % varpi * mod_pow(w, k1, varpi) % varpi;
    std::size_t need = static_cast<std::size_t>(to_u64((t + varpi - lhs) % varpi));
    if (table[need]) return WeilPair{w, *table[need]};
  }
  return std::nullopt;
}

// All attainable v-residues, each with its smallest partner w, v ascending.
// The step constructors scan these as alternative CRT classes for y.
inline std::vector<WeilPair> weil_v_candidates(const Natural& c1, const Natural& c2,
                                               const Natural& target, unsigned long k1,
                                               unsigned long k2, const Natural& varpi) {
  if (c1 % varpi == 0 || c2 % varpi == 0)
    throw input_error("weil_v_candidates: varpi divides a coefficient");
  auto wtable = detail::power_residue_table(c1, k1, varpi);
  std::vector<WeilPair> out;
  const Natural t = target % varpi;
  for (Natural v = 1; v < varpi; ++v) {
    Natural rhs = c2 % varpi * mod_pow(v, k2, varpi) % varpi;
    std::size_t need = static_cast<std::size_t>(to_u64((t + varpi - rhs) % varpi));
    if (wtable[need]) out.push_back(WeilPair{*wtable[need], v});
  }
  return out;
}

}  // namespace waring
