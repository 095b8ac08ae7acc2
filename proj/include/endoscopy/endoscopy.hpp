#pragma once

#include <cmath>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "characters.hpp"
#include "cohomology.hpp"

namespace endoscopy {

enum class Mutation { None, DropEpsilon, FlipDeltaI };

inline Mutation parse_mutation(const std::string& s) {
  if (s == "none" || s.empty()) return Mutation::None;
  if (s == "drop-epsilon") return Mutation::DropEpsilon;
  if (s == "flip-deltaI") return Mutation::FlipDeltaI;
  throw std::invalid_argument("unknown mutation '" + s + "' (expected none, drop-epsilon or flip-deltaI)");
}
inline const char* mutation_name(Mutation m) {
  return m == Mutation::None ? "none" : m == Mutation::DropEpsilon ? "drop-epsilon" : "flip-deltaI";
}

inline Cx i_power(long long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Cx(1, 0);
    case 1: return Cx(0, 1);
    case 2: return Cx(-1, 0);
    default: return Cx(0, -1);
  }
}

// a fixes lambda, and s0 x| a^{-1} centralizes the parameter: the j-part is
// a-fixed, so the condition reduces to (1 - sigma) s0 = 2 s0 in X^*.
inline bool is_in_twisted_centralizer(const BasedRootDatum& d, const RVec& s0, const PinnedAutomorphism& a,
                                      const RVec& lambda) {
  if (s0.size() != d.rank() || lambda.size() != d.rank()) return false;
  if (mat_vec(a.matrix, lambda) != lambda) return false;
  return is_integral(Rat(2) * s0);
}

// Endoscopic group on S_a: roots N alpha for the selected orbits, coroots the coinvariant images.
struct EndoscopicGroup {
  EllipticTorusDatum h;
  std::vector<size_t> g_orbit;   // per H root: index into the orbit list of G
  std::vector<IMat> weyl_in_g;   // per element of W_H: its image in the a-fixed Weyl group of G
  RVec lambda_h;
};

inline EndoscopicGroup build_H(const BasedRootDatum& g, const Coinvariants& c,
                               const std::vector<OrbitType>& orbits, const RVec& s0, const RVec& lambda) {
  struct Sel { IVec root, coroot; size_t orbit; bool positive; };
  std::vector<Sel> sel;
  for (size_t k = 0; k < orbits.size(); ++k) {
    const auto& o = orbits[k];
    Rat v;
    for (auto m : o.members) v += dot(g.coroots()[m], s0);
    if (!v.is_integer()) continue;
    if (o.kind != OrbitKind::R1)
      throw std::invalid_argument(std::string("endoscopic root from an orbit of type ") + kind_name(o.kind) +
                                  " is not supported");
    IVec n(g.rank(), 0);
    for (auto m : o.members) n = n + g.roots()[m];
    RVec nc = c.fixed_coords(to_rvec(n));
    if (!is_integral(nc)) throw std::logic_error("build_H: norm of a root is not integral in (X^*)^a");
    Sel s;
    for (const auto& x : nc) s.root.push_back(x.num());
    s.coroot = c.project(g.coroots()[o.rep()]);
    if (idot(s.root, s.coroot) != 2) throw std::logic_error("build_H: <N alpha, [alpha^v]> != 2");
    s.orbit = k;
    s.positive = g.is_positive(o.rep());
    sel.push_back(s);
  }
  std::vector<IVec> sr, sc;
  std::vector<size_t> simple_orbit;
  for (const auto& s : sel) {
    if (!s.positive) continue;
    bool decomposable = false;
    for (const auto& x : sel)
      for (const auto& y : sel)
        if (x.positive && y.positive && x.root + y.root == s.root) decomposable = true;
    if (decomposable) continue;
    sr.push_back(s.root);
    sc.push_back(s.coroot);
    simple_orbit.push_back(s.orbit);
  }
  EndoscopicGroup out;
  BasedRootDatum hd;
  try {
    hd = BasedRootDatum::make(c.dim(), sr, sc);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("invalid endoscopic element: ") + e.what());
  }
  if (hd.num_roots() != sel.size()) throw std::invalid_argument("invalid endoscopic element: root selection not closed");
  out.g_orbit.resize(hd.num_roots());
  for (const auto& s : sel) {
    auto idx = hd.find_root(s.root);
    if (!idx) throw std::invalid_argument("invalid endoscopic element: root selection not closed");
    out.g_orbit[*idx] = s.orbit;
  }
  out.h = EllipticTorusDatum::standard(hd);
  std::vector<IMat> gen;
  for (auto k : simple_orbit) {
    IMat m = identity(g.rank());
    for (auto b : orbits[k].members) m = mat_mul(m, g.reflection(b));
    gen.push_back(m);
  }
  WeylGroup wh(out.h.datum);
  for (const auto& e : wh.elements()) {
    IMat m = identity(g.rank());
    for (int i : e.word) m = mat_mul(m, gen[(size_t)i]);
    out.weyl_in_g.push_back(m);
  }
  out.lambda_h = c.fixed_coords(lambda);
  return out;
}

// inv class representative y_w = sum of b^v over b > 0 with w b < 0.
inline IVec inv_class(const BasedRootDatum& d, const WeylElement& w) {
  IVec y(d.rank(), 0);
  for (size_t b = 0; b < d.num_positive(); ++b)
    if (!d.is_positive(w.perm[b])) y = y + d.coroots()[b];
  return y;
}

struct PacketMember {
  size_t w = 0;              // index into the Weyl group: coset representative
  IVec mu;                   // w (lambda - rho), the integral weight tau_lhd
  std::vector<size_t> u_roots;  // roots of u_{wf} = w(negative roots)
  IVec inv;                  // y_w
  Circle zeta;               // extension value at the lift of 1 x| a
  Circle component_character(const RVec& s0) const { return Circle(dot(inv, s0)); }
};

// Members indexed by Omega_R^a \ Omega^a.
inline std::vector<PacketMember> enumerate_packet(const EllipticTorusDatum& t, const WeylGroup& w,
                                                  const PinnedAutomorphism& a, const RVec& lambda) {
  const auto& d = t.datum;
  if (!is_regular(d, lambda)) throw std::invalid_argument("enumerate_packet: singular lambda");
  for (size_t i = 0; i < d.num_positive(); ++i)
    if (dot(d.coroots()[i], lambda) < Rat(0)) throw std::invalid_argument("enumerate_packet: lambda not dominant");
  RVec mu_r = lambda - d.rho();
  if (!is_integral(mu_r)) throw std::invalid_argument("enumerate_packet: lambda - rho not integral");
  IVec mu;
  for (const auto& x : mu_r) mu.push_back(x.num());
  auto omega_r = commuting_with(real_weyl_group(t), a.matrix);
  std::set<IMat> omega_r_set(omega_r.begin(), omega_r.end());
  std::vector<PacketMember> out;
  std::vector<IMat> rep_inverses;
  for (size_t k = 0; k < w.size(); ++k) {
    const IMat& m = w[k].matrix;
    if (mat_mul(m, a.matrix) != mat_mul(a.matrix, m)) continue;
    bool seen = false;
    for (const auto& ri : rep_inverses)
      if (omega_r_set.count(mat_mul(m, ri))) { seen = true; break; }
    if (seen) continue;
    rep_inverses.push_back(inverse_unimodular(m));
    PacketMember pm;
    pm.w = k;
    pm.mu = mat_vec(m, mu);
    for (size_t r = d.num_positive(); r < d.num_roots(); ++r) pm.u_roots.push_back(w[k].perm[r]);
    pm.inv = inv_class(d, w[k]);
    out.push_back(pm);
  }
  return out;
}

struct DeltaRatio {
  Cx ks;      // eps_const * Delta_II / Delta_IV from the product definitions
  Cx closed;  // (-1)^{q(G^a) - q(H)} det_H / det_G
  std::vector<Cx> g_factors, h_factors;
};

struct TermBreakdown {
  size_t w = 0;
  RVec delta_w, gamma_w;
  Cx delta_I, ratio, delta_III, stable, term;
};

struct PointResult {
  Cx lhs, rhs;
  double gap = 0.0;
};

// Everything needed to evaluate both sides of the identity for fixed (G, a, lambda, s0).
class IdentityContext {
public:
  IdentityContext(EllipticTorusDatum g, PinnedAutomorphism a, RVec lambda, RVec s0, Mutation mut = Mutation::None)
      : g_(std::move(g)), a_(std::move(a)), lambda_(std::move(lambda)), s0_(std::move(s0)), mut_(mut),
        w_(g_.datum), coinv_(Coinvariants::of(a_.comatrix)) {
    const auto& d = g_.datum;
    if (!is_in_twisted_centralizer(d, s0_, a_, lambda_))
      throw std::invalid_argument("s0 x| a^{-1} is not in the twisted centralizer of the parameter");
    orbits_ = classify_orbits(d, a_);
    std::vector<size_t> neg;
    for (size_t r = d.num_positive(); r < d.num_roots(); ++r) neg.push_back(r);
    neg_orbits_ = orbits_in(d, orbits_, neg);
    members_ = enumerate_packet(g_, w_, a_, lambda_);
    omega_r_a_ = commuting_with(real_weyl_group(g_), a_.matrix);
    for (size_t k = 0; k < w_.size(); ++k)
      if (mat_mul(w_[k].matrix, a_.matrix) == mat_mul(a_.matrix, w_[k].matrix)) omega_a_.push_back(k);
    h_ = build_H(d, coinv_, orbits_, s0_, lambda_);
    wh_ = std::make_unique<WeylGroup>(h_.h.datum);
    mu_h_ = h_.lambda_h - h_.h.datum.rho();
    for (size_t r = h_.h.datum.num_positive(); r < h_.h.datum.num_roots(); ++r) h_neg_.push_back(r);
    // norm representatives: Omega^a modulo right multiplication by the image of W_H
    std::set<IMat> wh_set(h_.weyl_in_g.begin(), h_.weyl_in_g.end());
    std::vector<IMat> rep_inv;
    for (auto k : omega_a_) {
      bool seen = false;
      for (const auto& ri : rep_inv)
        if (wh_set.count(mat_mul(ri, w_[k].matrix))) { seen = true; break; }
      if (seen) continue;
      rep_inv.push_back(inverse_unimodular(w_[k].matrix));
      norm_reps_.push_back(k);
    }
    q_g_ = q_invariant(g_);
    q_ga_ = a_.is_identity() ? q_g_ : q_invariant(EllipticTorusDatum::standard(fold(d, a_)));
    q_h_ = q_invariant(h_.h);
    eps_a_ = sign_character(g_, a_);
    eps_const_ = i_power(dim_split_H() - dim_split_Ga());
  }

  const EllipticTorusDatum& g() const { return g_; }
  const PinnedAutomorphism& a() const { return a_; }
  const EndoscopicGroup& h() const { return h_; }
  const WeylGroup& weyl() const { return w_; }
  const WeylGroup& weyl_h() const { return *wh_; }
  const Coinvariants& coinvariants() const { return coinv_; }
  const std::vector<OrbitType>& orbits() const { return orbits_; }
  const std::vector<PacketMember>& members() const { return members_; }
  std::vector<PacketMember>& members() { return members_; }
  const std::vector<size_t>& norm_reps() const { return norm_reps_; }
  const std::vector<size_t>& omega_a() const { return omega_a_; }
  const std::vector<IMat>& omega_r_a() const { return omega_r_a_; }
  int eps_a() const { return eps_a_; }
  Cx eps_const() const { return eps_const_; }
  int q_g() const { return q_g_; }
  int q_ga() const { return q_ga_; }
  int q_h() const { return q_h_; }
  const RVec& s0() const { return s0_; }
  const RVec& lambda() const { return lambda_; }
  Mutation mutation() const { return mut_; }

  // Strong regularity of exp(2 pi i t) x| a: no orbit factor 1 - c_O N alpha is near zero.
  bool admissible(const RVec& t) const {
    for (const auto& o : orbits_)
      if (one_minus(orbit_factor_circle(g_.datum, o, t)).abs() < kTolReg) return false;
    return true;
  }

  int lhs_epsilon() const { return mut_ == Mutation::DropEpsilon ? 1 : eps_a_; }

  // Member summand coefficient times its twisted character, before the epsilon twist.
  Cx member_term(const PacketMember& m, const RVec& t) const {
    Circle coef = m.zeta.inv() * m.component_character(s0_);
    auto cv = bouaziz_character(g_, a_, omega_r_a_, m.mu, m.u_roots, m.zeta, TwistedTorusElement{t, 1});
    return circle_to_cx(coef) * cv.value;
  }

  // Exact numerators of the summands of one member: coefficient times extended character value.
  std::vector<Circle> member_numerators(const PacketMember& m, const RVec& t) const {
    std::vector<Circle> out;
    Circle coef = m.zeta.inv() * m.component_character(s0_);
    for (const auto& u : omega_r_a_) {
      RVec y = act_inverse_on_cochar(u, t);
      out.push_back(coef * Circle(dot(m.mu, y)) * m.zeta);
    }
    return out;
  }

  Cx lhs(const RVec& t) const {
    Cx sum;
    for (const auto& m : members_) sum += member_term(m, t);
    return Cx((double)lhs_epsilon()) * sum;  // Kottwitz sign e(G) = 1
  }

  Cx delta_I() const { return mut_ == Mutation::FlipDeltaI ? Cx(-1.0) : Cx(1.0); }

  DeltaRatio delta_II_over_IV(const RVec& gamma_w, const RVec& delta_w) const {
    const auto& d = g_.datum;
    const auto& hd = h_.h.datum;
    const Cx minus_i(0, -1);
    DeltaRatio r;
    Cx gprod(1.0), hprod(1.0);
    for (const auto& o : neg_orbits_) {
      Cx z = circle_to_cx(orbit_value(d, o, delta_w));
      Cx f;
      if (o.kind == OrbitKind::R3) {
        Cx w = z + Cx(1.0);
        f = Cx(1.0) / (sgn_c(w) * Cx(w.abs()));
      } else {
        Cx w = (z - Cx(1.0)) * minus_i;  // (z - 1) / i
        f = Cx(1.0) / (sgn_c(w) * Cx((Cx(1.0) - z).abs()));
      }
      r.g_factors.push_back(f);
      gprod *= f;
    }
    for (auto b : h_neg_) {
      Cx z = circle_to_cx(Circle(dot(hd.roots()[b], gamma_w)));
      Cx w = (z - Cx(1.0)) * minus_i;
      Cx f = Cx(1.0) / (sgn_c(w) * Cx((Cx(1.0) - z).abs()));
      r.h_factors.push_back(f);
      hprod *= f;
    }
    r.ks = eps_const_ * gprod / hprod;
    Cx det_h = plain_det(hd, h_neg_, gamma_w);
    Cx det_g = twisted_det(d, neg_orbits_, delta_w);
    r.closed = Cx((q_ga_ - q_h_) % 2 ? -1.0 : 1.0) * det_h / det_g;
    double scale = std::max(1.0, r.closed.abs());
    if ((r.ks - r.closed).abs() > 1e-10 * scale) {
      std::ostringstream s;
      s << "Delta_II/Delta_IV mismatch: product form " << r.ks << " vs closed form " << r.closed << "; G factors";
      for (const auto& f : r.g_factors) s << " " << f;
      s << "; H factors";
      for (const auto& f : r.h_factors) s << " " << f;
      throw std::logic_error(s.str());
    }
    return r;
  }

  // x_w = (w^{-1} rho^v - rho^v) / 2.
  RVec x_w(const WeylElement& w) const {
    RVec rv = g_.datum.rho_vee();
    return Rat(1, 2) * (act_inverse_on_cochar(w.matrix, rv) - rv);
  }

  Cx delta_III(const RVec& gamma_w, const RVec& delta_w, const WeylElement& w) const {
    auto gal = GaloisLattice::anisotropic(g_.datum.rank());
    RVec mu = lambda_ - g_.datum.rho();
    HyperCocycle c1{Rat(-1) * x_w(w), delta_w};
    DualDatum c2{Rat(-1) * mu, s0_};
    Circle v = Circle(dot(mu_h_, gamma_w)) * tn_pair(gal, a_.comatrix, c1, c2);
    return circle_to_cx(v);
  }

  TermBreakdown rhs_term(size_t wi, const RVec& t) const {
    const auto& w = w_[wi];
    TermBreakdown b;
    b.w = wi;
    b.delta_w = act_inverse_on_cochar(w.matrix, t);
    b.gamma_w = coinv_.project(b.delta_w);
    b.delta_I = delta_I();
    b.ratio = delta_II_over_IV(b.gamma_w, b.delta_w).ks;
    b.delta_III = delta_III(b.gamma_w, b.delta_w, w);
    b.stable = stable_character_H(h_.h, *wh_, h_.lambda_h, b.gamma_w);
    b.term = b.ratio / (b.delta_I * b.delta_III) * b.stable;
    return b;
  }

  Cx rhs(const RVec& t) const {
    Cx sum;
    for (auto k : norm_reps_) sum += rhs_term(k, t).term;
    return sum;
  }

  PointResult evaluate(const RVec& t) const {
    PointResult p;
    p.lhs = lhs(t);
    p.rhs = rhs(t);
    p.gap = (p.lhs - p.rhs).abs();
    return p;
  }

private:
  static long long fixed_dim(const std::vector<IMat>& conditions, size_t n) {
    IMat stacked;
    for (const auto& m : conditions)
      for (const auto& row : m) stacked.push_back(row);
    if (stacked.empty()) return (long long)n;
    return (long long)n - (long long)rational_rank(stacked);
  }
  long long dim_split_Ga() const {
    size_t n = g_.datum.rank();
    IMat mw0 = plus_identity(negate(w_[w_.longest()].matrix), -1);  // -w0 - 1
    return fixed_dim({mw0, plus_identity(a_.matrix, -1)}, n);
  }
  long long dim_split_H() const {
    size_t k = h_.h.datum.rank();
    IMat mw0 = plus_identity(negate((*wh_)[wh_->longest()].matrix), -1);
    return fixed_dim({mw0}, k);
  }

  EllipticTorusDatum g_;
  PinnedAutomorphism a_;
  RVec lambda_, s0_;
  Mutation mut_;
  WeylGroup w_;
  Coinvariants coinv_;
  std::vector<OrbitType> orbits_, neg_orbits_;
  std::vector<PacketMember> members_;
  std::vector<IMat> omega_r_a_;
  std::vector<size_t> omega_a_;
  EndoscopicGroup h_;
  std::unique_ptr<WeylGroup> wh_;
  RVec mu_h_;
  std::vector<size_t> h_neg_;
  std::vector<size_t> norm_reps_;
  int q_g_ = 0, q_ga_ = 0, q_h_ = 0, eps_a_ = 1;
  Cx eps_const_;
};

}  // namespace endoscopy
