#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "waring/errors.hpp"
#include "waring/natural.hpp"

namespace waring {

// Witness for one scanned n: n = x1^2 + x2^2 + x3^3 + x4^3 + sum y_j^(k_j),
// everything small enough for u64 at scan scale.
struct ScanWitness {
  std::uint64_t x1, x2, x3, x4;
  std::vector<std::uint64_t> y;
};

struct ScanReport {
  std::vector<unsigned long> tail_exponents;
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> unrepresented;
  std::uint64_t representable_count = 0;
  std::uint64_t witnesses_verified = 0;
  double seconds = 0;
};

namespace detail {

inline std::uint64_t ipow_u64(std::uint64_t b, unsigned long e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Tail combinations sum_{j} y_j^{k_j} <= limit, y_j >= 1, enumerated
// lexicographically.
inline void enumerate_tails(const std::vector<unsigned long>& ks, std::size_t idx,
                            std::uint64_t sum, std::uint64_t limit,
                            std::vector<std::uint64_t>& ys,
                            std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>& out) {
  if (idx == ks.size()) {
    out.emplace_back(sum, ys);
    return;
  }
  for (std::uint64_t y = 1;; ++y) {
    const std::uint64_t term = ipow_u64(y, ks[idx]);
    if (term > limit || sum + term > limit) break;
    ys.push_back(y);
    enumerate_tails(ks, idx + 1, sum + term, limit, ys, out);
    ys.pop_back();
  }
}

}  // namespace detail

// Exhaustive meet-in-the-middle scan of n <= X for the form
// 2,2,3,3 + tail: a bitmap of positive two-square sums ORed across every
// (cubes, tail) offset. Witnesses are reconstructed per representable n and
// re-verified; optionally streamed to a CSV path. Entirely independent of the
// descent machinery.
inline ScanReport scan_form(const std::vector<unsigned long>& tail,
                            std::uint64_t X,
                            const std::string& witness_csv_path = "",
                            std::uint64_t cap = 10000000) {
  if (X < 1 || X > cap) throw input_error("scan: X out of range (cap " +
                                          std::to_string(cap) + ")");
  for (unsigned long k : tail)
    if (k < 2) throw input_error("scan: tail exponents must be >= 2");
  const auto t0 = std::chrono::steady_clock::now();

  // squares bitmap: s = a^2 + b^2, a, b >= 1, s <= X
  std::vector<std::uint64_t> two_sq((X >> 6) + 1, 0);
  for (std::uint64_t a = 1; a * a + 1 <= X; ++a)
    for (std::uint64_t b = a; a * a + b * b <= X; ++b) {
      const std::uint64_t s = a * a + b * b;
      two_sq[s >> 6] |= std::uint64_t(1) << (s & 63);
    }

  // offsets: x3^3 + x4^3 + tail powers
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> tails;
  {
    std::vector<std::uint64_t> ys;
    detail::enumerate_tails(tail, 0, 0, X, ys, tails);
  }
  std::vector<std::uint64_t> offsets;
  for (std::uint64_t c1 = 1; c1 * c1 * c1 + 3 <= X; ++c1)
    for (std::uint64_t c2 = c1; c1 * c1 * c1 + c2 * c2 * c2 + 2 <= X; ++c2)
      for (const auto& [tsum, ys] : tails) {
        const std::uint64_t off = c1 * c1 * c1 + c2 * c2 * c2 + tsum;
        if (off + 2 <= X) offsets.push_back(off);
      }
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

  // representable = union over offsets of (two_sq << offset)
  std::vector<std::uint64_t> rep((X >> 6) + 1, 0);
  const std::size_t words = rep.size();
  for (const std::uint64_t off : offsets) {
    const std::uint64_t word_shift = off >> 6;
    const unsigned bit_shift = static_cast<unsigned>(off & 63);
    for (std::size_t w = words; w-- > word_shift;) {
      std::uint64_t v = two_sq[w - word_shift] << bit_shift;
      if (bit_shift && w > word_shift)
        v |= two_sq[w - word_shift - 1] >> (64 - bit_shift);
      rep[w] |= v;
    }
  }

  ScanReport report;
  report.tail_exponents = tail;
  report.limit = X;

  // witness reconstruction + verification per representable n
  std::ofstream csv;
  if (!witness_csv_path.empty()) {
    csv.open(witness_csv_path);
    if (!csv) throw input_error("scan: cannot open witness output " + witness_csv_path);
    csv << "n,x1,x2,x3,x4";
    for (std::size_t j = 0; j < tail.size(); ++j) csv << ",y" << j + 1;
    csv << "\n";
  }
  auto two_sq_test = [&](std::uint64_t s) {
    return s <= X && (two_sq[s >> 6] >> (s & 63)) & 1;
  };
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (!((rep[n >> 6] >> (n & 63)) & 1)) {
      report.unrepresented.push_back(n);
      continue;
    }
    ++report.representable_count;
    // find a witness: first offset with n - off a positive two-square sum
    std::optional<ScanWitness> witness;
    for (std::uint64_t c1 = 1; !witness && c1 * c1 * c1 + 3 <= n; ++c1)
      for (std::uint64_t c2 = c1; !witness && c1 * c1 * c1 + c2 * c2 * c2 + 2 <= n; ++c2) {
        const std::uint64_t cubes = c1 * c1 * c1 + c2 * c2 * c2;
        for (const auto& [tsum, ys] : tails) {
          if (cubes + tsum + 2 > n) continue;
          const std::uint64_t s = n - cubes - tsum;
          if (!two_sq_test(s)) continue;
          for (std::uint64_t a = 1; a * a + 1 <= s; ++a) {
            const std::uint64_t b2 = s - a * a;
            const std::uint64_t b = static_cast<std::uint64_t>(
                std::sqrt(static_cast<double>(b2)));
            for (std::uint64_t bb = b > 0 ? b - 1 : 0; bb <= b + 1; ++bb)
              if (bb >= 1 && bb * bb == b2) {
                witness = ScanWitness{a, bb, c2, c1, ys};
                break;
              }
            if (witness) break;
          }
          if (witness) break;
        }
      }
    if (!witness)
      throw internal_error("scan", "marked representable but no witness: " +
                                       std::to_string(n));
    // exact re-check
    std::uint64_t total = witness->x1 * witness->x1 + witness->x2 * witness->x2 +
                          witness->x3 * witness->x3 * witness->x3 +
                          witness->x4 * witness->x4 * witness->x4;
    for (std::size_t j = 0; j < tail.size(); ++j)
      total += detail::ipow_u64(witness->y[j], tail[j]);
    if (total != n)
      throw internal_error("scan", "witness sum mismatch at " + std::to_string(n));
    ++report.witnesses_verified;
    if (csv.is_open()) {
      csv << n << ',' << witness->x1 << ',' << witness->x2 << ',' << witness->x3
          << ',' << witness->x4;
      for (std::uint64_t y : witness->y) csv << ',' << y;
      csv << "\n";
    }
  }
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace waring
