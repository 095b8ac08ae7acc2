#pragma once

#include <stdexcept>
#include <vector>

#include "rootdata.hpp"

namespace endoscopy {

// Anisotropic torus (Galois acts by -1 on X^*) with the grading in which every
// simple root is noncompact: a root is compact iff its height is even.
struct EllipticTorusDatum {
  BasedRootDatum datum;
  std::vector<bool> noncompact;  // per root index

  static EllipticTorusDatum standard(BasedRootDatum d) {
    EllipticTorusDatum t;
    t.noncompact.resize(d.num_roots());
    for (size_t i = 0; i < d.num_roots(); ++i) t.noncompact[i] = (d.height(i) % 2 != 0);
    t.datum = std::move(d);
    return t;
  }
  bool is_compact(size_t i) const { return !noncompact[i]; }
};

inline bool grading_is_multiplicative(const EllipticTorusDatum& t) {
  const auto& d = t.datum;
  for (size_t i = 0; i < d.num_roots(); ++i)
    for (size_t j = 0; j < d.num_roots(); ++j) {
      auto s = d.find_root(d.roots()[i] + d.roots()[j]);
      if (s && t.is_compact(*s) != (t.is_compact(i) == t.is_compact(j))) return false;
    }
  return true;
}

// R_f^+ = {alpha : <f, alpha^v> < 0}.
struct PositivitySystem {
  RVec f;
  std::vector<size_t> positive;  // root indices
  std::vector<bool> member;      // per root index

  static PositivitySystem of(const BasedRootDatum& d, const RVec& f) {
    PositivitySystem p;
    p.f = f;
    p.member.assign(d.num_roots(), false);
    for (size_t i = 0; i < d.num_roots(); ++i) {
      Rat v = dot(d.coroots()[i], f);
      if (v == Rat(0)) throw std::invalid_argument("positivity system: f is singular on root " + to_string(d.roots()[i]));
      if (v < Rat(0)) { p.positive.push_back(i); p.member[i] = true; }
    }
    return p;
  }
};

// f = rho: R_f^+ is the set of negative roots, so the chamber of the
// character (R_tau^+ = -R_f^+) is the dominant one and its simple roots are noncompact.
inline PositivitySystem generic_chamber(const EllipticTorusDatum& t) {
  return PositivitySystem::of(t.datum, t.datum.rho());
}

inline int q_invariant(const EllipticTorusDatum& t) {
  int q = 0;
  for (size_t i = 0; i < t.datum.num_positive(); ++i)
    if (t.noncompact[i]) ++q;
  return q;
}

inline int sign_character(const EllipticTorusDatum& t, const PinnedAutomorphism& a) {
  if (a.is_identity()) return 1;
  auto folded = EllipticTorusDatum::standard(fold(t.datum, a));
  return (q_invariant(t) - q_invariant(folded)) % 2 ? -1 : 1;
}

// Sign of the permutation induced by a on the noncompact positive roots.
inline int permutation_sign_on_noncompact(const EllipticTorusDatum& t, const PinnedAutomorphism& a) {
  auto p = root_permutation(t.datum, a.matrix);
  std::vector<bool> seen(t.datum.num_roots(), false);
  int sign = 1;
  for (size_t i = 0; i < t.datum.num_positive(); ++i) {
    if (!t.noncompact[i] || seen[i]) continue;
    size_t len = 0;
    for (size_t j = i; !seen[j]; j = p[j]) { seen[j] = true; ++len; }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

inline std::vector<size_t> inverse_perm(const std::vector<size_t>& p) {
  std::vector<size_t> q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

// Roots of u = w^{-1} u_f, i.e. w^{-1} R_f^+.
inline std::vector<size_t> translated_roots(const WeylElement& w, const PositivitySystem& f) {
  auto inv = inverse_perm(w.perm);
  std::vector<size_t> out;
  for (auto r : f.positive) out.push_back(inv[r]);
  return out;
}

// Parity of q^f_u for u = w^{-1}u_f: length of w relative to R_f^+ plus the
// number of noncompact roots of u.
inline int q_uf_parity(const EllipticTorusDatum& t, const PositivitySystem& f, const WeylElement& w) {
  int len = 0, nc = 0;
  for (auto r : translated_roots(w, f)) {
    if (!f.member[r]) ++len;
    if (t.noncompact[r]) ++nc;
  }
  return (len + nc) % 2;
}

// Weyl group generated by reflections in compact roots.
inline std::vector<IMat> real_weyl_group(const EllipticTorusDatum& t) {
  std::vector<IMat> gens;
  for (size_t i = 0; i < t.datum.num_positive(); ++i)
    if (t.is_compact(i)) gens.push_back(t.datum.reflection(i));
  return generate_group(t.datum.rank(), gens);
}

inline std::vector<IMat> commuting_with(const std::vector<IMat>& g, const IMat& a) {
  std::vector<IMat> out;
  for (const auto& m : g)
    if (mat_mul(m, a) == mat_mul(a, m)) out.push_back(m);
  return out;
}

}  // namespace endoscopy
