#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "realstructure.hpp"

namespace endoscopy {

// Element exp(2 pi i t) of the torus with a deck sign relative to the rho-reference,
// in the coset of (1 x| a)^a_power.
struct CoverElement {
  RVec t;
  int deck = 1;
  int a_power = 0;
};

inline bool equivalent(const BasedRootDatum& d, const CoverElement& x, const CoverElement& y) {
  if (x.a_power != y.a_power) return false;
  RVec diff = x.t - y.t;
  if (!is_integral(diff)) return false;
  Circle c = Circle(dot(d.rho(), diff));
  if (!(c.is_one() || c == Circle::minus_one())) throw std::logic_error("rho pairing on X_* is not half-integral");
  int expected = x.deck * (c.is_one() ? 1 : -1);
  return expected == y.deck;
}

struct GenuineCharacter {
  RVec lambda;                 // in rho + X^*
  std::optional<Circle> zeta;  // value on the chosen lift of 1 x| a
};

inline void check_genuine(const BasedRootDatum& d, const GenuineCharacter& chi) {
  if (!is_integral(chi.lambda - d.rho())) throw std::invalid_argument("genuine character: lambda - rho not in X^*");
}

inline bool is_regular(const BasedRootDatum& d, const RVec& lambda) {
  for (const auto& cv : d.coroots())
    if (dot(cv, lambda) == Rat(0)) return false;
  return true;
}

inline Circle evaluate(const BasedRootDatum& d, const PinnedAutomorphism& a, const GenuineCharacter& chi,
                       const CoverElement& x) {
  check_genuine(d, chi);
  Circle v(dot(chi.lambda, x.t));
  if (x.deck < 0) v *= Circle::minus_one();
  if (x.a_power > 0) {
    if (mat_vec(a.matrix, chi.lambda) != chi.lambda)
      throw std::invalid_argument("extension exists only for a-fixed characters");
    if (!chi.zeta) throw std::invalid_argument("character has no extension to <a>");
    v *= chi.zeta->pow(x.a_power);
  }
  return v;
}

// lambda - rho_tau, where rho_tau is half the sum of roots positive on lambda.
inline IVec tau_lhd(const BasedRootDatum& d, const GenuineCharacter& chi, const PositivitySystem& f) {
  check_genuine(d, chi);
  RVec rho_tau(d.rank());
  for (size_t i = 0; i < d.num_roots(); ++i) {
    Rat v = dot(d.coroots()[i], chi.lambda);
    if (v == Rat(0)) throw std::invalid_argument("tau_lhd: singular character");
    if ((v > Rat(0)) == f.member[i]) throw std::invalid_argument("tau_lhd: R_chi^+ is not -R_f^+");
    if (v > Rat(0)) rho_tau = rho_tau + Rat(1, 2) * to_rvec(d.roots()[i]);
  }
  RVec r = chi.lambda - rho_tau;
  if (!is_integral(r)) throw std::logic_error("tau_lhd: non-integral result");
  IVec out;
  for (const auto& x : r) out.push_back(x.num());
  return out;
}

// det(a | u) for an a-stable set of roots, as a product over a-orbits of (-1)^{|O|-1} c_O.
inline int det_a_on_roots(const BasedRootDatum& d, const PinnedAutomorphism& a, const std::vector<size_t>& roots) {
  std::vector<bool> in(d.num_roots(), false);
  for (auto r : roots) in[r] = true;
  int det = 1;
  for (const auto& o : classify_orbits(d, a)) {
    bool any = in[o.rep()];
    for (auto m : o.members)
      if (in[m] != any) throw std::invalid_argument("root set is not a-stable");
    if (!any) continue;
    if (o.members.size() % 2 == 0) det = -det;
    det *= o.line_sign;
  }
  return det;
}

// A square root of det(a | u_f); lift_sign chooses the branch.
inline Circle rho_fu_twisted(const BasedRootDatum& d, const PositivitySystem& f, const PinnedAutomorphism& a,
                             int lift_sign) {
  int det = det_a_on_roots(d, a, f.positive);
  Circle root(Rat(det < 0 ? 1 : 0, 4));
  return lift_sign < 0 ? root * Circle::minus_one() : root;
}

}  // namespace endoscopy
