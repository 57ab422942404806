#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "waring/errors.hpp"
#include "waring/factorization.hpp"
#include "waring/natural.hpp"
#include "waring/primality.hpp"
#include "waring/two_squares.hpp"

namespace waring {

struct TernaryInstance {
  Natural N;
  Natural p;  // prime
  bool require_positive = true;
};

struct TernarySolution {
  Natural x, y, z;  // x >= y canonical
};

enum class TernaryOutcome { found, proven_absent, budget_exhausted };

struct TernaryResult {
  TernaryOutcome outcome = TernaryOutcome::budget_exhausted;
  std::optional<TernarySolution> solution;
  std::uint64_t z_tried = 0;
};

struct SolveBudget {
  std::uint64_t max_z = 1000000;
  std::uint64_t rho_per_candidate = std::uint64_t(1) << 22;
  unsigned workers = 1;
  std::uint64_t seed = 0;  // folded into the sweep permutation
};

namespace detail {

// Affine index permutation i -> (a*i + b) mod range with gcd(a, range) = 1;
// deterministic in (N, p, seed) and bijective, so a full sweep is exhaustive.
struct SweepPermutation {
  std::uint64_t range, a, b;

  SweepPermutation(const Natural& N, const Natural& p, std::uint64_t seed,
                   std::uint64_t range_in)
      : range(range_in == 0 ? 1 : range_in) {
    std::uint64_t s = low_bits(N) ^ (low_bits(p) * 0x9e3779b97f4a7c15ULL) ^ seed;
    do {
      a = splitmix64(s) % range;
    } while (std::gcd(a, range) != 1);
    if (a == 0) a = 1;
    b = splitmix64(s) % range;
  }

  std::uint64_t at(std::uint64_t i) const {
    return (static_cast<unsigned __int128>(a) * i + b) % range;
  }
};

}  // namespace detail

// N = x^2 + y^2 + 6 p z^2 in naturals: sweeps z through a seeded permutation
// of [1, sqrt(N/6p)], peeling the two-squares residual. `proven_absent` only
// after the full range is swept with every candidate decided.
inline TernaryResult solve_ternary(const TernaryInstance& inst, const SolveBudget& budget) {
  TernaryResult res;
  if (inst.N < 1) throw input_error("solve_ternary: N must be >= 1");
  const Natural sixp = 6 * inst.p;
  const Natural zmax_nat = isqrt(inst.N / sixp);  // rem stays >= 0
  if (!fits_u64(zmax_nat))
    throw input_error("solve_ternary: z range too large to sweep");
  const std::uint64_t zmax = to_u64(zmax_nat);

  const std::uint64_t z_lo = inst.require_positive ? 1 : 0;
  const std::uint64_t count = zmax >= z_lo ? zmax - z_lo + 1 : 0;
  if (count == 0) {
    res.outcome = TernaryOutcome::proven_absent;
    return res;
  }
  detail::SweepPermutation perm(inst.N, inst.p, budget.seed, count);
  const std::uint64_t tries = std::min<std::uint64_t>(count, budget.max_z);

  const unsigned workers = std::max(1u, budget.workers);
  std::atomic<std::uint64_t> best_pos{UINT64_MAX};
  std::vector<TernarySolution> hits(workers);
  std::vector<std::uint64_t> hit_pos(workers, UINT64_MAX);
  std::atomic<bool> undecided{false};

  auto scan = [&](unsigned wid) {
    for (std::uint64_t i = wid; i < tries; i += workers) {
      if (best_pos.load(std::memory_order_relaxed) < i) return;
      const std::uint64_t zv = z_lo + perm.at(i);
      Natural rem = inst.N - sixp * zv * zv;
      try {
        auto xy = two_squares(rem, inst.require_positive, budget.rho_per_candidate);
        if (xy) {
          if (i < hit_pos[wid]) {
            hits[wid] = TernarySolution{xy->first, xy->second, Natural(zv)};
            hit_pos[wid] = i;
          }
          std::uint64_t cur = best_pos.load(std::memory_order_relaxed);
          while (i < cur &&
                 !best_pos.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
          }
          return;
        }
      } catch (const FactorBudgetError&) {
        undecided.store(true, std::memory_order_relaxed);
      }
    }
  };

  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned wdx = 0; wdx < workers; ++wdx) pool.emplace_back(scan, wdx);
    for (auto& th : pool) th.join();
  }

  // deterministic reduction: smallest permutation position wins
  std::uint64_t best = UINT64_MAX;
  for (unsigned wdx = 0; wdx < workers; ++wdx)
    if (hit_pos[wdx] < best) {
      best = hit_pos[wdx];
      res.solution = hits[wdx];
    }
  res.z_tried = tries;
  if (res.solution) {
    const auto& s = *res.solution;
    if (s.x * s.x + s.y * s.y + sixp * s.z * s.z != inst.N)
      throw internal_error("solve_ternary", "solution fails the equation");
    res.outcome = TernaryOutcome::found;
  } else if (tries == count && !undecided.load()) {
    res.outcome = TernaryOutcome::proven_absent;
  } else {
    res.outcome = TernaryOutcome::budget_exhausted;
  }
  return res;
}

// Exact count of ordered natural triples with x^2 + y^2 + 6 p z^2 = N, full
// enumeration. Capped: the enumeration is the point, not scale.
inline Natural count_representations(const TernaryInstance& inst,
                                     const Natural& cap = Natural(100000000)) {
  if (inst.N > cap) throw input_error("count_representations: N exceeds cap");
  if (fits_u64(inst.N) && fits_u64(6 * inst.p)) {
    const std::uint64_t N = to_u64(inst.N);
    const std::uint64_t sixp = to_u64(6 * inst.p);
    std::uint64_t count = 0;
    for (std::uint64_t z = 1; sixp * z * z + 2 <= N; ++z) {
      const std::uint64_t rem0 = N - sixp * z * z;
      for (std::uint64_t x = 1; x * x + 1 <= rem0; ++x) {
        const std::uint64_t y2 = rem0 - x * x;
        std::uint64_t y = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(y2)));
        while (y * y > y2) --y;
        while ((y + 1) * (y + 1) <= y2) ++y;
        if (y >= 1 && y * y == y2) ++count;
      }
    }
    return count;
  }
  Natural count = 0;
  const Natural sixp = 6 * inst.p;
  for (Natural z = 1; sixp * z * z + 2 <= inst.N; ++z) {
    const Natural rem0 = inst.N - sixp * z * z;
    for (Natural x = 1; x * x + 1 <= rem0; ++x) {
      Natural y2 = rem0 - x * x;
      Natural y;
      if (is_perfect_square(y2, &y) && y >= 1) ++count;
    }
  }
  return count;
}

// Solubility of N = x^2 + y^2 + 6 p z^2 (mod 16); depends only on
// (N mod 16, p mod 8), so the 16^3 enumeration is cached per class.
inline bool check_mod16(const Natural& N, const Natural& p) {
  static const auto table = [] {
    std::array<std::array<bool, 8>, 16> tab{};
    for (unsigned n16 = 0; n16 < 16; ++n16)
      for (unsigned p8 = 0; p8 < 8; ++p8) {
        bool ok = false;
        const unsigned c = 6 * p8 % 16;
        for (unsigned x = 0; x < 16 && !ok; ++x)
          for (unsigned y = 0; y < 16 && !ok; ++y)
            for (unsigned zz = 0; zz < 16 && !ok; ++zz)
              ok = (x * x + y * y + c * zz * zz) % 16 == n16;
        tab[n16][p8] = ok;
      }
    return tab;
  }();
  return table[static_cast<unsigned>(to_u64(N % 16))]
              [static_cast<unsigned>(to_u64(p % 8))];
}

// Executable form of the local claim behind the endgame shift: for odd p and
// odd lambda, x^2 + y^2 + 6 p z^2 + 2 lambda^2 p^3 attains every odd residue
// class mod 16 with x or y odd.
inline bool check_mod16_shifted_coverage(const Natural& p, const Natural& lambda) {
  if (p % 2 == 0 || lambda % 2 == 0)
    throw input_error("check_mod16_shifted_coverage: p and lambda must be odd");
  const unsigned shift =
      static_cast<unsigned>(to_u64(2 * lambda * lambda % 16 * mod_pow(p, 3, 16) % 16));
  std::array<bool, 16> hit{};
  const unsigned c = static_cast<unsigned>(to_u64(6 * p % 16));
  for (unsigned x = 0; x < 16; ++x)
    for (unsigned y = 0; y < 16; ++y) {
      if (x % 2 == 0 && y % 2 == 0) continue;
      for (unsigned z = 0; z < 16; ++z)
        hit[(x * x + y * y + c * z * z + shift) % 16] = true;
    }
  for (unsigned r = 1; r < 16; r += 2)
    if (!hit[r]) return false;
  return true;
}

}  // namespace waring
