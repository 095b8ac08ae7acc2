#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "exactnum.hpp"
#include "lattice.hpp"
#include "rootdata.hpp"

namespace endoscopy {

// Free abelian group with an involution (the Galois action on X_*).
struct GaloisLattice {
  IMat sigma;
  size_t rank() const { return sigma.size(); }
  static GaloisLattice anisotropic(size_t n) {
    IMat m = identity(n);
    for (size_t i = 0; i < n; ++i) m[i][i] = -1;
    return {m};
  }
};

inline IMat plus_identity(const IMat& m, long long c) {
  IMat r = m;
  for (size_t i = 0; i < r.size(); ++i) r[i][i] += c;
  return r;
}
inline IMat negate(const IMat& m) {
  IMat r = m;
  for (auto& row : r)
    for (auto& x : row) x = -x;
  return r;
}

inline std::vector<IVec> columns(const IMat& m) { return transpose(m); }

// Invariant factors (> 1) of H^1(Z/2, L) = ker(1 + sigma) / im(1 - sigma).
inline std::vector<long long> h1_real_torus(const GaloisLattice& g) {
  size_t n = g.rank();
  auto ker = kernel_basis(plus_identity(g.sigma, 1), n);
  if (ker.empty()) return {};
  IMat kcols = transpose(ker, n);
  IMat img = plus_identity(negate(g.sigma), 1);  // 1 - sigma
  IMat coords;                                   // columns: images in kernel coordinates
  for (const auto& col : columns(img)) {
    auto y = solve_rational(kcols, to_rvec(col));
    if (!y || !is_integral(*y)) throw std::logic_error("h1: image of 1 - sigma outside ker(1 + sigma)");
    IVec yi;
    for (const auto& q : *y) yi.push_back(q.num());
    coords.push_back(yi);
  }
  Smith s = smith_normal_form(transpose(coords, ker.size()), img.size());
  std::vector<long long> out;
  for (size_t i = 0; i < ker.size(); ++i) {
    long long dv = i < s.rank ? s.d[i][i] : 0;
    if (dv == 0) throw std::logic_error("h1: infinite quotient");
    if (dv > 1) out.push_back(dv);
  }
  return out;
}

inline bool h1_trivial(const GaloisLattice& g, const IVec& x) {
  return in_lattice(columns(plus_identity(negate(g.sigma), 1)), x);
}

// Distinct representatives of H^1(Z/2, L); the zero class comes first.
inline std::vector<IVec> h1_classes(const GaloisLattice& g) {
  size_t n = g.rank();
  auto ker = kernel_basis(plus_identity(g.sigma, 1), n);
  std::vector<IVec> reps;
  size_t k = ker.size();
  if (k > 20) throw std::invalid_argument("h1_classes: lattice too large to enumerate");
  for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
    IVec x(n, 0);
    for (size_t j = 0; j < k; ++j)
      if (mask >> j & 1) x = x + ker[j];
    bool fresh = true;
    for (const auto& r : reps)
      if (h1_trivial(g, x - r)) { fresh = false; break; }
    if (fresh) reps.push_back(x);
  }
  return reps;
}

// Coinvariants X_* -> (X_*)_a = Z^k via the rows of P; the rows are also a basis of (X^*)^a.
struct Coinvariants {
  IMat p;  // k x n

  static Coinvariants of(const IMat& a_co) {
    size_t n = a_co.size();
    IMat m = plus_identity(negate(a_co), 1);
    Smith s = smith_normal_form(m, n);
    for (size_t i = 0; i < s.rank; ++i)
      if (s.d[i][i] != 1) throw std::invalid_argument("coinvariant lattice has torsion");
    Coinvariants c;
    for (size_t i = s.rank; i < n; ++i) c.p.push_back(s.u[i]);
    return c;
  }
  size_t dim() const { return p.size(); }
  RVec project(const RVec& t) const { return mat_vec(p, t); }
  IVec project(const IVec& t) const { return mat_vec(p, t); }
  // Coordinates of an a-fixed weight in the basis given by the rows of p.
  RVec fixed_coords(const RVec& w) const {
    auto y = solve_rational(transpose(p, w.size()), w);
    if (!y) throw std::invalid_argument("weight is not fixed by the automorphism: " + to_string(w));
    return *y;
  }
};

// Finite-level cocycle for [S -(1-a)-> S]: z-part x and t-part t, both angle vectors in X_* (x) Q.
struct HyperCocycle {
  RVec z_part;
  RVec t_part;
};

// Dual datum: the weight phi of the parameter and s0 in X^* (x) Q.
struct DualDatum {
  RVec phi;
  RVec s0;
};

inline std::string check_cocycle(const GaloisLattice& g, const IMat& a_co, const HyperCocycle& c) {
  IMat one_minus_sigma = plus_identity(negate(g.sigma), 1);
  IMat one_plus_sigma = plus_identity(g.sigma, 1);
  IMat one_minus_a = plus_identity(negate(a_co), 1);
  if (!is_integral(mat_vec(one_minus_sigma, c.z_part))) return "(1 - sigma) z not integral";
  if (!is_integral(mat_vec(one_minus_a, c.z_part) - mat_vec(one_plus_sigma, c.t_part)))
    return "(1 - a) z - (1 + sigma) t not integral";
  return "";
}

inline Circle tn_pair(const GaloisLattice& g, const IMat& a_co, const HyperCocycle& c1, const DualDatum& c2) {
  if (auto err = check_cocycle(g, a_co, c1); !err.empty()) throw std::invalid_argument("tn_pair: " + err);
  IMat one_minus_sigma_t = plus_identity(negate(transpose(g.sigma)), 1);
  if (!is_integral(mat_vec(one_minus_sigma_t, c2.s0))) throw std::invalid_argument("tn_pair: (1 - sigma) s0 not integral");
  IMat a = transpose(inverse_unimodular(a_co));  // action on X^*
  if (mat_vec(a, c2.phi) != c2.phi) throw std::invalid_argument("tn_pair: phi is not a-fixed");
  IMat one_minus_sigma = plus_identity(negate(g.sigma), 1);
  return Circle(dot(c2.phi, c1.t_part) + dot(c2.s0, mat_vec(one_minus_sigma, c1.z_part)));
}

struct NormResult {
  RVec gamma;
  HyperCocycle inv;
};

// Norm of exp(2 pi i t) x| a in the quasi-split base-point convention.
inline NormResult abstract_norm(const Coinvariants& c, const RVec& t) {
  return {c.project(t), HyperCocycle{RVec(t.size()), t}};
}

struct SntData {
  size_t kernel_size = 1;
  size_t coset_count = 1;
};

// Fibers and image index of the map from H^1 of the a-fixed subtorus.
inline SntData snt_data(const GaloisLattice& g, const IMat& a_co) {
  size_t n = g.rank();
  SntData out;
  IMat one_minus_a = plus_identity(negate(a_co), 1);
  auto fixed = kernel_basis(one_minus_a, n);
  if (!fixed.empty()) {
    IMat f = transpose(fixed, n);  // n x k inclusion
    // sigma restricted to the fixed sublattice
    IMat sig(fixed.size(), IVec(fixed.size()));
    for (size_t j = 0; j < fixed.size(); ++j) {
      auto y = solve_rational(f, to_rvec(mat_vec(g.sigma, fixed[j])));
      if (!y || !is_integral(*y)) throw std::invalid_argument("snt_data: sigma does not preserve the fixed lattice");
      for (size_t i = 0; i < fixed.size(); ++i) sig[i][j] = (*y)[i].num();
    }
    size_t cnt = 0;
    for (const auto& c : h1_classes({sig}))
      if (h1_trivial(g, mat_vec(f, c))) ++cnt;
    out.kernel_size = cnt;
  }
  // quotient X_* / fixed, coordinates from the Smith form of the inclusion
  IMat f = fixed.empty() ? IMat(n, IVec()) : transpose(fixed, n);
  Smith s = smith_normal_form(f, fixed.size());
  size_t r = s.rank;
  if (r < n) {
    IMat uinv = inverse_unimodular(s.u);
    size_t q = n - r;
    IMat sig(q, IVec(q));
    for (size_t j = 0; j < q; ++j) {
      IVec lift(n);
      for (size_t i = 0; i < n; ++i) lift[i] = uinv[i][r + j];
      IVec img = mat_vec(s.u, mat_vec(g.sigma, lift));
      for (size_t i = 0; i < q; ++i) sig[i][j] = img[r + i];
    }
    size_t cnt = 0;
    for (const auto& c : h1_classes({sig})) {
      IVec lift(n, 0);
      for (size_t j = 0; j < q; ++j)
        for (size_t i = 0; i < n; ++i) lift[i] += uinv[i][r + j] * c[j];
      if (h1_trivial(g, mat_vec(one_minus_a, lift))) ++cnt;
    }
    out.coset_count = cnt;
  }
  return out;
}

}  // namespace endoscopy
