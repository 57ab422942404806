#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "waring/errors.hpp"
#include "waring/natural.hpp"

namespace waring {

// The exponent tuple k_1 <= ... <= k_t of the higher-power tail. `order`
// holds the working arrangement (the unconditional route moves an odd
// exponent to the last slot); `perm[i]` is the index into the ascending
// canonical tuple of the exponent at working position i.
class ExponentTuple {
 public:
  explicit ExponentTuple(std::vector<unsigned long> ks) {
    if (ks.empty()) throw input_error("exponent tuple must be non-empty");
    for (unsigned long k : ks)
      if (k < 2) throw input_error("exponents must be >= 2");
    std::sort(ks.begin(), ks.end());
    order_ = ks;
    perm_.resize(ks.size());
    std::iota(perm_.begin(), perm_.end(), 0u);
    relabeled_ = false;
  }

  std::size_t t() const { return order_.size(); }
  // k at 1-based stage u in working order
  unsigned long k(std::size_t u) const { return order_.at(u - 1); }
  const std::vector<unsigned long>& working() const { return order_; }
  const std::vector<unsigned>& perm() const { return perm_; }
  bool relabeled() const { return relabeled_; }

  std::vector<unsigned long> canonical() const {
    std::vector<unsigned long> c = order_;
    std::sort(c.begin(), c.end());
    return c;
  }

  // K = k_1 ... k_{t-1} in working order (1 when t = 1).
  Natural K() const {
    Natural prod = 1;
    for (std::size_t i = 0; i + 1 < order_.size(); ++i) prod *= order_[i];
    return prod;
  }

  bool all_even() const {
    return std::all_of(order_.begin(), order_.end(),
                       [](unsigned long k) { return k % 2 == 0; });
  }

  // Working order with the largest odd exponent moved last, the rest
  // ascending. No-op error if every exponent is even.
  ExponentTuple relabel_odd_last() const {
    std::vector<unsigned long> ks = canonical();
    auto it = std::find_if(ks.rbegin(), ks.rend(),
                           [](unsigned long k) { return k % 2 == 1; });
    if (it == ks.rend())
      throw input_error("relabel_odd_last: no odd exponent present");
    std::size_t odd_pos = ks.size() - 1 - (it - ks.rbegin());
    ExponentTuple out(ks);
    out.order_.erase(out.order_.begin() + odd_pos);
    out.order_.push_back(ks[odd_pos]);
    out.perm_.clear();
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (i != odd_pos) out.perm_.push_back(static_cast<unsigned>(i));
    out.perm_.push_back(static_cast<unsigned>(odd_pos));
    out.relabeled_ = odd_pos + 1 != ks.size();
    return out;
  }

 private:
  std::vector<unsigned long> order_;
  std::vector<unsigned> perm_;
  bool relabeled_;
};

// gamma(k) = prod (1 - 1/k_j), exact.
inline Rational gamma(const ExponentTuple& k) {
  Rational g = 1;
  for (unsigned long kj : k.working())
    g *= Rational(kj - 1, kj);
  return g;
}

// gamma~(k) = (1 - 1/k_t) * prod_{j <= t-2} (1 - 1/k_j) on the ascending
// order; equals gamma of the tuple with k_{t-1} removed. Requires t >= 2.
inline Rational gamma_tilde(const ExponentTuple& k) {
  if (k.t() < 2) throw input_error("gamma_tilde requires t >= 2");
  std::vector<unsigned long> ks = k.canonical();
  Rational g(ks.back() - 1, ks.back());
  for (std::size_t j = 0; j + 2 < ks.size(); ++j)
    g *= Rational(ks[j] - 1, ks[j]);
  return g;
}

inline Rational gamma_omega(const ExponentTuple& k, const Rational& omega) {
  Rational g = 1;
  for (unsigned long kj : k.working())
    g *= (Rational(1) - omega / kj);
  return g;
}

// The omega with gamma(k; omega) = 2/3 + nu, or 1 when no scaling is needed.
// gamma(k; .) is strictly decreasing, so bisection converges; the returned
// rational is an interval endpoint good to 1e-12 relative, used only for
// sizing exponent windows.
inline Rational gamma_omega_solve(const ExponentTuple& k, const Rational& nu) {
  const Rational target = Rational(2, 3) + nu;
  if (gamma(k) >= target) return 1;
  Rational lo = 0, hi = 1;  // gamma_omega(lo) = 1 > target > gamma_omega(hi)
  const Rational tol(1, Natural(1000000000000LL));
  while ((hi - lo) > hi * tol) {
    Rational mid = (lo + hi) / 2;
    if (gamma_omega(k, mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

enum class Mode { grh, unconditional, ramanujan, ramanujan_grh };

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::grh: return "grh";
    case Mode::unconditional: return "unconditional";
    case Mode::ramanujan: return "ramanujan";
    case Mode::ramanujan_grh: return "ramanujan+grh";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "grh") return Mode::grh;
  if (s == "unconditional") return Mode::unconditional;
  if (s == "ramanujan") return Mode::ramanujan;
  if (s == "ramanujan+grh" || s == "ramanujan_grh") return Mode::ramanujan_grh;
  return std::nullopt;
}

// Which routes admit the tuple, all comparisons exact:
//   grh             gamma < 12/17
//   unconditional   (t >= 2 and gamma~ < 74/105) or (gamma < 74/105, some odd)
//   ramanujan       (t >= 2 and gamma~ < 5/6)   or (gamma < 5/6, some odd)
//   ramanujan+grh   gamma < 5/6
struct FeasibilityVerdict {
  Rational gamma_value;
  std::optional<Rational> gamma_tilde_value;
  bool all_even = true;
  bool grh = false;
  bool unconditional = false;
  bool unconditional_via_pair = false;  // the all-even gamma~ route
  bool ramanujan = false;
  bool ramanujan_via_pair = false;
  bool ramanujan_grh = false;

  bool admits(Mode m) const {
    switch (m) {
      case Mode::grh: return grh;
      case Mode::unconditional: return unconditional;
      case Mode::ramanujan: return ramanujan;
      case Mode::ramanujan_grh: return ramanujan_grh;
    }
    return false;
  }
};

inline FeasibilityVerdict check_feasibility(const ExponentTuple& k) {
  FeasibilityVerdict v;
  v.gamma_value = gamma(k);
  if (k.t() >= 2) v.gamma_tilde_value = gamma_tilde(k);
  v.all_even = k.all_even();
  const Rational t_grh(12, 17), t_unc(74, 105), t_ram(5, 6);
  v.grh = v.gamma_value < t_grh;
  const bool odd = !v.all_even;
  v.unconditional_via_pair = k.t() >= 2 && v.gamma_tilde_value &&
                             *v.gamma_tilde_value < t_unc;
  v.unconditional = v.unconditional_via_pair || (odd && v.gamma_value < t_unc);
  v.ramanujan_via_pair =
      k.t() >= 2 && v.gamma_tilde_value && *v.gamma_tilde_value < t_ram;
  v.ramanujan = v.ramanujan_via_pair || (odd && v.gamma_value < t_ram);
  v.ramanujan_grh = v.gamma_value < t_ram;
  return v;
}

// The closing inequality of the descent: gamma0*(6/c + 1) - 4/c > 21*gamma0 - 14,
// equivalently gamma0 < (14c - 4)/(20c - 6). With c = 2 the cutoff is 12/17,
// with c = 12/5 it is 74/105.
inline bool descent_inequality_holds(const Rational& gamma0, const Rational& c) {
  return gamma0 * (6 / c + 1) - 4 / c > 21 * gamma0 - 14;
}

inline Rational descent_inequality_cutoff(const Rational& c) {
  return (14 * c - 4) / (20 * c - 6);
}

}  // namespace waring
