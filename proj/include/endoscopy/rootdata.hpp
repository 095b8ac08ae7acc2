#pragma once

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactnum.hpp"
#include "lattice.hpp"

namespace endoscopy {

// Based root datum. X^* and X_* are both Z^n with the dot product as pairing.
// Roots are indexed: [0, N) positive ordered by height then coefficients,
// [N, 2N) their negatives in the same order.
class BasedRootDatum {
public:
  BasedRootDatum() = default;

  static BasedRootDatum make(size_t n, std::vector<IVec> simple_roots, std::vector<IVec> simple_coroots) {
    BasedRootDatum d;
    d.n_ = n;
    d.simple_roots_ = std::move(simple_roots);
    d.simple_coroots_ = std::move(simple_coroots);
    if (d.simple_roots_.size() != d.simple_coroots_.size())
      throw std::invalid_argument("root datum: different numbers of simple roots and coroots");
    for (const auto& v : d.simple_roots_)
      if (v.size() != n) throw std::invalid_argument("root datum: simple root of wrong length");
    for (const auto& v : d.simple_coroots_)
      if (v.size() != n) throw std::invalid_argument("root datum: simple coroot of wrong length");
    d.validate_cartan();
    d.generate();
    return d;
  }

  // Simply connected semisimple datum in the fundamental weight basis.
  static BasedRootDatum from_cartan(const IMat& c) {
    size_t l = c.size();
    std::vector<IVec> sr(c.begin(), c.end()), sc;
    for (size_t i = 0; i < l; ++i) {
      IVec e(l, 0);
      e[i] = 1;
      sc.push_back(e);
    }
    return make(l, sr, sc);
  }

  size_t rank() const { return n_; }
  size_t semisimple_rank() const { return simple_roots_.size(); }
  const std::vector<IVec>& simple_roots() const { return simple_roots_; }
  const std::vector<IVec>& simple_coroots() const { return simple_coroots_; }
  const std::vector<IVec>& roots() const { return roots_; }
  const std::vector<IVec>& coroots() const { return coroots_; }
  size_t num_roots() const { return roots_.size(); }
  size_t num_positive() const { return roots_.size() / 2; }
  bool is_positive(size_t i) const { return i < num_positive(); }
  size_t neg(size_t i) const { return is_positive(i) ? i + num_positive() : i - num_positive(); }
  const IVec& coeffs(size_t i) const { return coeffs_[i]; }
  long long height(size_t i) const {
    long long h = 0;
    for (auto c : coeffs_[i]) h += c;
    return h;
  }
  size_t simple_index(size_t i) const { return index_of(simple_roots_[i]); }

  std::optional<size_t> find_root(const IVec& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  size_t index_of(const IVec& v) const {
    auto r = find_root(v);
    if (!r) throw std::logic_error("not a root: " + to_string(v));
    return *r;
  }

  IMat cartan() const {
    size_t l = semisimple_rank();
    IMat c(l, IVec(l));
    for (size_t i = 0; i < l; ++i)
      for (size_t j = 0; j < l; ++j) c[i][j] = idot(simple_roots_[i], simple_coroots_[j]);
    return c;
  }
  bool simply_laced() const {
    for (const auto& row : cartan())
      for (auto x : row)
        if (x < -1) return false;
    return true;
  }

  RVec rho() const { return half_sum(roots_); }
  RVec rho_vee() const { return half_sum(coroots_); }

  // Matrix of the reflection in root i acting on X^* (column vectors).
  IMat reflection(size_t i) const {
    IMat m = identity(n_);
    for (size_t r = 0; r < n_; ++r)
      for (size_t c = 0; c < n_; ++c) m[r][c] -= roots_[i][r] * coroots_[i][c];
    return m;
  }

  // W-invariant form (l, m) = sum over roots of <l,b^v><m,b^v>.
  Rat form(const RVec& l, const RVec& m) const {
    Rat s;
    for (const auto& cv : coroots_) s += dot(cv, l) * dot(cv, m);
    return s;
  }
  long long sq_length(size_t i) const { return form(to_rvec(roots_[i]), to_rvec(roots_[i])).num(); }

private:
  RVec half_sum(const std::vector<IVec>& vs) const {
    RVec r(n_);
    for (size_t i = 0; i < num_positive(); ++i)
      for (size_t k = 0; k < n_; ++k) r[k] += Rat(vs[i][k], 2);
    return r;
  }

  void validate_cartan() const {
    IMat c = cartan();
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = 0; j < c.size(); ++j) {
        if (i == j && c[i][j] != 2) throw std::invalid_argument("root datum: <a_i, a_i^v> != 2");
        if (i != j && c[i][j] > 0) throw std::invalid_argument("root datum: positive off-diagonal Cartan entry");
        if (i != j && (c[i][j] == 0) != (c[j][i] == 0))
          throw std::invalid_argument("root datum: Cartan matrix zero pattern not symmetric");
      }
    if (rational_rank(simple_roots_) != simple_roots_.size())
      throw std::invalid_argument("root datum: simple roots linearly dependent");
  }

  void generate() {
    size_t l = semisimple_rank();
    struct R { IVec c, r, cv; };
    std::map<IVec, R> seen;
    std::deque<IVec> queue;
    for (size_t i = 0; i < l; ++i) {
      IVec e(l, 0);
      e[i] = 1;
      seen[e] = {e, simple_roots_[i], simple_coroots_[i]};
      queue.push_back(e);
    }
    while (!queue.empty()) {
      R cur = seen[queue.front()];
      queue.pop_front();
      for (size_t j = 0; j < l; ++j) {
        long long p = idot(cur.r, simple_coroots_[j]);
        R nxt{cur.c, cur.r - p * simple_roots_[j], cur.cv - idot(simple_roots_[j], cur.cv) * simple_coroots_[j]};
        nxt.c[j] -= p;
        if (seen.count(nxt.c)) continue;
        if (seen.size() > 4000) throw std::invalid_argument("root datum: root system is not finite");
        seen[nxt.c] = nxt;
        queue.push_back(nxt.c);
      }
    }
    std::vector<R> pos;
    for (auto& [c, r] : seen) {
      bool positive = std::all_of(c.begin(), c.end(), [](long long x) { return x >= 0; });
      bool negative = std::all_of(c.begin(), c.end(), [](long long x) { return x <= 0; });
      if (!positive && !negative) throw std::logic_error("root datum: root with mixed-sign coefficients");
      if (positive) pos.push_back(r);
    }
    std::sort(pos.begin(), pos.end(), [](const R& a, const R& b) {
      long long ha = 0, hb = 0;
      for (auto x : a.c) ha += x;
      for (auto x : b.c) hb += x;
      if (ha != hb) return ha < hb;
      return a.c > b.c;
    });
    for (const auto& p : pos) { roots_.push_back(p.r); coroots_.push_back(p.cv); coeffs_.push_back(p.c); }
    for (const auto& p : pos) { roots_.push_back(-p.r); coroots_.push_back(-p.cv); coeffs_.push_back(-p.c); }
    for (size_t i = 0; i < roots_.size(); ++i) index_[roots_[i]] = i;
  }

  size_t n_ = 0;
  std::vector<IVec> simple_roots_, simple_coroots_;
  std::vector<IVec> roots_, coroots_, coeffs_;
  std::map<IVec, size_t> index_;
};

// Permutation of root indices induced by a lattice automorphism of X^*.
inline std::vector<size_t> root_permutation(const BasedRootDatum& d, const IMat& m) {
  std::vector<size_t> p(d.num_roots());
  for (size_t i = 0; i < d.num_roots(); ++i) p[i] = d.index_of(mat_vec(m, d.roots()[i]));
  return p;
}

// Contragredient action on X_*.
inline IMat dual_action(const IMat& m) { return transpose(inverse_unimodular(m)); }

struct WeylElement {
  IMat matrix;             // on X^*
  std::vector<int> word;   // product of simple reflections, left to right
  int length = 0;
  std::vector<size_t> perm;  // action on root indices
  int sign() const { return length % 2 ? -1 : 1; }
};

class WeylGroup {
public:
  explicit WeylGroup(const BasedRootDatum& d) {
    std::vector<IMat> s;
    for (size_t i = 0; i < d.semisimple_rank(); ++i) s.push_back(d.reflection(d.simple_index(i)));
    add(d, identity(d.rank()), {});
    for (size_t k = 0; k < elems_.size(); ++k)
      for (size_t i = 0; i < s.size(); ++i) {
        IMat m = mat_mul(elems_[k].matrix, s[i]);
        if (index_.count(m)) continue;
        auto w = elems_[k].word;
        w.push_back((int)i);
        add(d, m, w);
      }
  }
  size_t size() const { return elems_.size(); }
  const WeylElement& operator[](size_t i) const { return elems_[i]; }
  const std::vector<WeylElement>& elements() const { return elems_; }
  size_t index_of(const IMat& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw std::logic_error("matrix is not a Weyl group element");
    return it->second;
  }
  bool contains(const IMat& m) const { return index_.count(m) > 0; }
  size_t longest() const {
    size_t b = 0;
    for (size_t i = 0; i < size(); ++i)
      if (elems_[i].length > elems_[b].length) b = i;
    return b;
  }

private:
  void add(const BasedRootDatum& d, const IMat& m, std::vector<int> word) {
    WeylElement e;
    e.matrix = m;
    e.word = std::move(word);
    e.perm = root_permutation(d, m);
    for (size_t i = 0; i < d.num_positive(); ++i)
      if (!d.is_positive(e.perm[i])) ++e.length;
    index_[m] = elems_.size();
    elems_.push_back(std::move(e));
  }
  std::vector<WeylElement> elems_;
  std::map<IMat, size_t> index_;
};

// Closure of a finite set of invertible matrices under multiplication.
inline std::vector<IMat> generate_group(size_t n, const std::vector<IMat>& gens) {
  std::vector<IMat> out{identity(n)};
  std::map<IMat, size_t> seen{{out[0], 0}};
  for (size_t k = 0; k < out.size(); ++k)
    for (const auto& g : gens) {
      IMat m = mat_mul(out[k], g);
      if (seen.count(m)) continue;
      if (out.size() > 100000) throw std::invalid_argument("generated group is too large");
      seen[m] = out.size();
      out.push_back(m);
    }
  return out;
}

// Automorphism of X^* permuting the simple roots (and, dually, the simple coroots).
struct PinnedAutomorphism {
  std::vector<size_t> perm;  // simple index i -> perm[i]
  IMat matrix;               // on X^*
  IMat comatrix;             // on X_*
  int order = 1;

  bool is_identity() const { return matrix == identity(matrix.size()); }

  static PinnedAutomorphism identity_of(const BasedRootDatum& d) {
    return from_matrix(d, identity(d.rank()));
  }

  // Needs the simple roots to span X^* rationally.
  static PinnedAutomorphism from_perm(const BasedRootDatum& d, const std::vector<size_t>& perm) {
    size_t n = d.rank(), l = d.semisimple_rank();
    if (perm.size() != l) throw std::invalid_argument("automorphism: permutation has wrong size");
    if (l != n) throw std::invalid_argument("automorphism: permutation does not determine the lattice map (rank > semisimple rank)");
    std::vector<bool> hit(l, false);
    for (auto p : perm) {
      if (p >= l || hit[p]) throw std::invalid_argument("automorphism: not a permutation");
      hit[p] = true;
    }
    // A R = R' with R the matrix of simple roots as columns: rows of A solve R^T a = r'.
    IMat rt(d.simple_roots().begin(), d.simple_roots().end());  // row i = alpha_i
    IMat a(n, IVec(n));
    for (size_t r = 0; r < n; ++r) {
      RVec rhs(l);
      for (size_t i = 0; i < l; ++i) rhs[i] = Rat(d.simple_roots()[perm[i]][r]);
      auto x = solve_rational(rt, rhs);
      if (!x || !is_integral(*x)) throw std::invalid_argument("automorphism: permutation does not preserve X^*");
      for (size_t c = 0; c < n; ++c) a[r][c] = (*x)[c].num();
    }
    return from_matrix(d, a);
  }

  static PinnedAutomorphism from_matrix(const BasedRootDatum& d, const IMat& a) {
    PinnedAutomorphism p;
    p.matrix = a;
    p.comatrix = dual_action(a);
    size_t l = d.semisimple_rank();
    p.perm.resize(l);
    for (size_t i = 0; i < l; ++i) {
      IVec img = mat_vec(a, d.simple_roots()[i]);
      auto it = std::find(d.simple_roots().begin(), d.simple_roots().end(), img);
      if (it == d.simple_roots().end()) throw std::invalid_argument("automorphism does not permute the simple roots (not pinned)");
      p.perm[i] = (size_t)(it - d.simple_roots().begin());
      if (mat_vec(p.comatrix, d.simple_coroots()[i]) != d.simple_coroots()[p.perm[i]])
        throw std::invalid_argument("automorphism does not permute the simple coroots compatibly");
    }
    IMat m = a;
    IMat id = identity(d.rank());
    while (m != id) {
      m = mat_mul(m, a);
      if (++p.order > 64) throw std::invalid_argument("automorphism has infinite or excessive order");
    }
    return p;
  }
};

// a o b
inline PinnedAutomorphism compose(const BasedRootDatum& d, const PinnedAutomorphism& a, const PinnedAutomorphism& b) {
  return PinnedAutomorphism::from_matrix(d, mat_mul(a.matrix, b.matrix));
}

enum class OrbitKind { R1, R2, R3 };
inline const char* kind_name(OrbitKind k) { return k == OrbitKind::R1 ? "R1" : k == OrbitKind::R2 ? "R2" : "R3"; }

struct OrbitType {
  std::vector<size_t> members;  // root indices, first = smallest index
  OrbitKind kind = OrbitKind::R1;
  int line_sign = 1;
  size_t rep() const { return members.front(); }
};

// <a>-orbits on all roots, ordered by representative.
inline std::vector<OrbitType> classify_orbits(const BasedRootDatum& d, const PinnedAutomorphism& a) {
  if (!a.is_identity() && !d.simply_laced())
    throw std::invalid_argument("orbit types for non-simply-laced data with a nontrivial automorphism are not supported");
  auto p = root_permutation(d, a.matrix);
  std::vector<bool> done(d.num_roots(), false);
  std::vector<OrbitType> out;
  for (size_t i = 0; i < d.num_roots(); ++i) {
    if (done[i]) continue;
    OrbitType o;
    for (size_t j = i; !done[j]; j = p[j]) { done[j] = true; o.members.push_back(j); }
    std::sort(o.members.begin(), o.members.end());
    out.push_back(o);
  }
  // powers of a as root permutations
  std::vector<std::vector<size_t>> pw{p};
  for (int k = 2; k < a.order; ++k) {
    std::vector<size_t> q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[i] = p[pw.back()[i]];
    pw.push_back(q);
  }
  for (auto& o : out) {
    for (size_t g : o.members)
      for (size_t b = 0; b < d.num_roots() && o.kind != OrbitKind::R3; ++b)
        for (const auto& q : pw)
          if (q[b] != b && d.roots()[b] + d.roots()[q[b]] == d.roots()[g]) { o.kind = OrbitKind::R3; break; }
    if (o.kind == OrbitKind::R3) { o.line_sign = -1; continue; }
    for (size_t x = 0; x < o.members.size() && o.kind == OrbitKind::R1; ++x)
      for (size_t y = x + 1; y < o.members.size(); ++y)
        if (d.find_root(d.roots()[o.members[x]] + d.roots()[o.members[y]])) { o.kind = OrbitKind::R2; break; }
  }
  return out;
}

inline size_t orbit_count_non_r3(const BasedRootDatum& d, const PinnedAutomorphism& a) {
  size_t c = 0;
  for (const auto& o : classify_orbits(d, a))
    if (d.is_positive(o.rep()) && o.kind != OrbitKind::R3) ++c;
  return c;
}

// Basis (as vectors of X_*) of the a-fixed cocharacters.
inline std::vector<IVec> fixed_cocharacters(const BasedRootDatum& d, const PinnedAutomorphism& a) {
  IMat m = a.comatrix;
  for (size_t i = 0; i < m.size(); ++i) m[i][i] -= 1;
  return kernel_basis(m, d.rank());
}

inline IVec restrict_weight(const IVec& w, const std::vector<IVec>& k) {
  IVec r;
  for (const auto& v : k) r.push_back(idot(w, v));
  return r;
}

// Non-divisible restrictions of roots to the a-fixed cocharacters.
inline std::vector<IVec> restricted_roots(const BasedRootDatum& d, const PinnedAutomorphism& a) {
  auto k = fixed_cocharacters(d, a);
  std::vector<IVec> all;
  for (const auto& r : d.roots()) {
    IVec x = restrict_weight(r, k);
    if (std::find(all.begin(), all.end(), x) == all.end()) all.push_back(x);
  }
  std::vector<IVec> out;
  for (const auto& x : all) {
    bool even = std::all_of(x.begin(), x.end(), [](long long c) { return c % 2 == 0; });
    if (even) {
      IVec h = x;
      for (auto& c : h) c /= 2;
      if (std::find(all.begin(), all.end(), h) != all.end()) continue;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Based root datum of the a-fixed group on (X_*)^a and its dual.
inline BasedRootDatum fold(const BasedRootDatum& d, const PinnedAutomorphism& a) {
  auto k = fixed_cocharacters(d, a);
  IMat kcols = transpose(k, d.rank());  // n x dim, columns k_j
  std::vector<bool> done(d.semisimple_rank(), false);
  std::vector<IVec> sr, sc;
  for (size_t i = 0; i < d.semisimple_rank(); ++i) {
    if (done[i]) continue;
    IVec sum(d.rank(), 0);
    for (size_t j = i; !done[j]; j = a.perm[j]) { done[j] = true; sum = sum + d.simple_coroots()[j]; }
    auto y = solve_rational(kcols, to_rvec(sum));
    if (!y || !is_integral(*y)) throw std::logic_error("fold: orbit coroot sum not in the fixed lattice");
    IVec yi;
    for (const auto& q : *y) yi.push_back(q.num());
    IVec res = restrict_weight(d.simple_roots()[i], k);
    long long p = idot(res, yi);
    if (p <= 0 || 2 % p) throw std::logic_error("fold: unexpected restricted pairing");
    sr.push_back(res);
    sc.push_back((2 / p) * yi);
  }
  return BasedRootDatum::make(k.size(), sr, sc);
}

// A root alpha with alpha(gamma) = 1, where gamma = prod exp(2 pi i b^v / 2) over betas.
inline size_t trivializing_real_root(const BasedRootDatum& d, const std::vector<size_t>& betas) {
  if (betas.empty()) throw std::invalid_argument("trivializing_real_root: empty product");
  std::vector<size_t> bs = betas;
  auto congruent_mod2 = [](const IVec& x, const IVec& y) {
    for (size_t i = 0; i < x.size(); ++i)
      if ((x[i] - y[i]) % 2) return false;
    return true;
  };
  bool changed = true;
  while (changed && bs.size() > 1) {
    changed = false;
    for (size_t i = 0; i < bs.size() && !changed; ++i)
      for (size_t j = i + 1; j < bs.size() && !changed; ++j) {
        size_t x = bs[i], y = bs[j];
        if (x == y || x == d.neg(y)) {
          bs.erase(bs.begin() + (long)j);
          bs.erase(bs.begin() + (long)i);
          changed = true;
          break;
        }
        if (idot(d.roots()[x], d.coroots()[y]) == 0) continue;
        long long lx = d.sq_length(x), ly = d.sq_length(y);
        if (lx == 2 * ly || ly == 2 * lx) continue;
        IVec target = d.coroots()[x] + d.coroots()[y];
        for (size_t r = 0; r < d.num_roots(); ++r)
          if (congruent_mod2(d.coroots()[r], target)) {
            bs[i] = r;
            bs.erase(bs.begin() + (long)j);
            changed = true;
            break;
          }
        if (!changed) throw std::logic_error("trivializing_real_root: no merge root found");
      }
  }
  if (bs.empty()) return 0;
  size_t pick = bs[0];
  for (size_t i = 0; i < bs.size(); ++i)
    for (size_t j = 0; j < bs.size(); ++j)
      if (i != j && idot(d.roots()[bs[i]], d.coroots()[bs[j]]) != 0 &&
          d.sq_length(bs[i]) == 2 * d.sq_length(bs[j])) {
        pick = bs[i];
        i = j = bs.size();
        break;
      }
  if (pick >= d.num_positive()) pick = d.neg(pick);
  return pick;
}

// Value alpha(gamma) for gamma = prod exp(2 pi i b^v / 2).
inline Circle eval_on_coroot_product(const BasedRootDatum& d, size_t alpha, const std::vector<size_t>& betas) {
  long long s = 0;
  for (auto b : betas) s += idot(d.roots()[alpha], d.coroots()[b]);
  return Circle(Rat(s, 2));
}

// Text format: "rank n", n simple-root lines, n simple-coroot lines, optional "perm i1 ... in".
// '#' starts a comment. Errors carry the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct ParsedDatum {
  BasedRootDatum datum;
  std::optional<std::vector<size_t>> perm;
};

inline ParsedDatum parse_datum(std::istream& in) {
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::istringstream ss(raw);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (!toks.empty()) lines.push_back({no, toks});
  }
  if (lines.empty()) throw ParseError(no, "empty datum");
  auto to_int = [](int line, const std::string& s) {
    try {
      size_t pos = 0;
      long long v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw ParseError(line, "expected an integer, got '" + s + "'");
    }
  };
  auto& head = lines[0];
  if (head.second.size() != 2 || head.second[0] != "rank") throw ParseError(head.first, "expected 'rank n'");
  long long n = to_int(head.first, head.second[1]);
  if (n <= 0 || n > 16) throw ParseError(head.first, "rank out of range");
  if (lines.size() < 1 + 2 * (size_t)n)
    throw ParseError(lines.back().first, "expected " + std::to_string(2 * n) + " vector lines after the rank line");
  std::vector<IVec> vs;
  for (size_t i = 1; i <= 2 * (size_t)n; ++i) {
    auto& [ln, toks] = lines[i];
    if (toks.size() != (size_t)n) throw ParseError(ln, "expected " + std::to_string(n) + " integers");
    IVec v;
    for (const auto& t : toks) v.push_back(to_int(ln, t));
    vs.push_back(v);
  }
  ParsedDatum out;
  int last = lines[2 * n].first;
  try {
    out.datum = BasedRootDatum::make((size_t)n, {vs.begin(), vs.begin() + n}, {vs.begin() + n, vs.end()});
  } catch (const std::invalid_argument& e) {
    throw ParseError(last, e.what());
  }
  size_t rest = 1 + 2 * (size_t)n;
  if (rest < lines.size()) {
    auto& [ln, toks] = lines[rest];
    if (toks[0] != "perm" || toks.size() != (size_t)n + 1) throw ParseError(ln, "expected 'perm i1 ... in'");
    std::vector<size_t> p;
    for (size_t i = 1; i < toks.size(); ++i) {
      long long v = to_int(ln, toks[i]);
      if (v < 0 || v >= n) throw ParseError(ln, "permutation index out of range");
      p.push_back((size_t)v);
    }
    try {
      PinnedAutomorphism::from_perm(out.datum, p);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ln, e.what());
    }
    out.perm = p;
    if (rest + 1 < lines.size()) throw ParseError(lines[rest + 1].first, "unexpected trailing content");
  }
  return out;
}

}  // namespace endoscopy
