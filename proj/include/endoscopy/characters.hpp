#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "covers.hpp"

namespace endoscopy {

constexpr double kTolReg = 1e-8;

struct SingularPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exp(2 pi i t) x| a^a_power.
struct TwistedTorusElement {
  RVec t;
  int a_power = 0;
};

// Orbit value N alpha(t) = prod over the orbit of beta(t).
inline Circle orbit_value(const BasedRootDatum& d, const OrbitType& o, const RVec& t) {
  Rat s;
  for (auto m : o.members) s += dot(d.roots()[m], t);
  return Circle(s);
}

// The orbits of a contained in the given a-stable root set.
inline std::vector<OrbitType> orbits_in(const BasedRootDatum& d, const std::vector<OrbitType>& all,
                                        const std::vector<size_t>& roots) {
  std::vector<bool> in(d.num_roots(), false);
  for (auto r : roots) in[r] = true;
  std::vector<OrbitType> out;
  for (const auto& o : all) {
    bool any = in[o.rep()];
    for (auto m : o.members)
      if (in[m] != any) throw std::invalid_argument("root set is not stable under the automorphism");
    if (any) out.push_back(o);
  }
  return out;
}

// The factor 1 - c_O N alpha on one orbit, as 1 - (circle).
inline Circle orbit_factor_circle(const BasedRootDatum& d, const OrbitType& o, const RVec& t) {
  Circle v = orbit_value(d, o, t);
  return o.line_sign < 0 ? v * Circle::minus_one() : v;
}

// det(1 - x | sum of root spaces) for x = exp(2 pi i t) x| a, given the a-orbits of the subset.
inline Cx twisted_det(const BasedRootDatum& d, const std::vector<OrbitType>& orbits, const RVec& t) {
  Cx r(1.0);
  for (const auto& o : orbits) r *= one_minus(orbit_factor_circle(d, o, t));
  return r;
}

// Untwisted version: prod over roots of 1 - beta(t).
inline Cx plain_det(const BasedRootDatum& d, const std::vector<size_t>& roots, const RVec& t) {
  Cx r(1.0);
  for (auto b : roots) r *= one_minus(Circle(dot(d.roots()[b], t)));
  return r;
}

struct CharacterValue {
  Cx value;
  std::vector<Cx> terms;
};

// Action of the Weyl element with X^*-matrix u on X_*: (u^{-1})^T. Its inverse acts by u^T.
inline RVec act_inverse_on_cochar(const IMat& u, const RVec& t) { return mat_vec(transpose(u), t); }
inline RVec act_on_cochar(const IMat& u, const RVec& t) { return mat_vec(transpose(inverse_unimodular(u)), t); }

// Twisted character of the member with integral weight tau_lhd = mu and extension value zeta
// at x, summed over omega (the a-commuting compact Weyl group). u_roots are the roots of u_f.
inline CharacterValue bouaziz_character(const EllipticTorusDatum& t, const PinnedAutomorphism& a,
                                        const std::vector<IMat>& omega, const IVec& mu,
                                        const std::vector<size_t>& u_roots, const Circle& zeta,
                                        const TwistedTorusElement& x) {
  const auto& d = t.datum;
  std::vector<OrbitType> orbits;
  if (x.a_power > 0) orbits = orbits_in(d, classify_orbits(d, a), u_roots);
  CharacterValue cv;
  for (const auto& u : omega) {
    if (x.a_power > 0 && mat_mul(u, a.matrix) != mat_mul(a.matrix, u))
      throw std::invalid_argument("summation element does not commute with a");
    RVec y = act_inverse_on_cochar(u, x.t);
    Circle num = Circle(dot(mu, y)) * zeta.pow(x.a_power);
    Cx den = x.a_power > 0 ? twisted_det(d, orbits, y) : plain_det(d, u_roots, y);
    if (den.abs() < kTolReg) throw SingularPoint("denominator vanishes at " + to_string(x.t));
    Cx term = circle_to_cx(num) / den;
    cv.terms.push_back(term);
    cv.value += term;
  }
  if (q_invariant(t) % 2) {
    cv.value = -cv.value;
    for (auto& term : cv.terms) term = -term;
  }
  return cv;
}

// Stable discrete series character of H at gamma: sum over the full Weyl group with the
// dominant weight lambda_H, u_{f^H} spanned by the negative roots.
inline Cx stable_character_H(const EllipticTorusDatum& h, const WeylGroup& wh, const RVec& lambda_h,
                             const RVec& gamma) {
  const auto& d = h.datum;
  RVec mu = lambda_h - d.rho();
  std::vector<size_t> neg;
  for (size_t i = d.num_positive(); i < d.num_roots(); ++i) neg.push_back(i);
  Cx sum;
  for (const auto& u : wh.elements()) {
    RVec ug = act_on_cochar(u.matrix, gamma);
    Cx den = plain_det(d, neg, ug);
    if (den.abs() < kTolReg) throw SingularPoint("H-singular point " + to_string(gamma));
    sum += circle_to_cx(Circle(dot(mu, ug))) / den;
  }
  return q_invariant(h) % 2 ? -sum : sum;
}

}  // namespace endoscopy
