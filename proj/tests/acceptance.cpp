// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "endoscopy_lab.hpp"

using namespace endoscopy;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& fn) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d: %s  %s  (%s; %.3f s)\n", n, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", x);
  return b;
}

BasedRootDatum dat(const std::string& t) { return BasedRootDatum::from_cartan(cartan_of(t)); }

RVec rand_t(std::mt19937_64& rng, size_t n) {
  long long den = 2 + (long long)(rng() % 999);
  RVec t;
  for (size_t i = 0; i < n; ++i) t.push_back(Rat((long long)(rng() % (uint64_t)den), den));
  return t;
}

// max gap over the catalog s0 choices, and the elapsed time
std::pair<double, double> verify_entry(const std::string& name, const std::string& an, Mutation mut, std::string& info,
                                       bool& ok) {
  auto e = catalog_entry(name);
  auto t0 = Clock::now();
  double worst = 0;
  ok = true;
  for (const auto& s0 : e.s0_choices) {
    auto ctx = make_context(e, an, e.default_lambda, s0, mut);
    auto r = run_verify(ctx, name, an, VerifyOptions{50, 1, 1e-9, mut});
    worst = std::max(worst, r.max_abs_gap);
    ok = ok && r.failures.empty() && r.points_tested >= 50;
    info += (info.empty() ? "" : ", ") + std::string("s0=") + to_string(s0) + " gap " + sci(r.max_abs_gap) + " over " +
            std::to_string(r.points_tested) + " pts";
  }
  return {worst, std::chrono::duration<double>(Clock::now() - t0).count()};
}

// Group ring Z[Q/Z]
using GR = std::map<Rat, long long>;
void gr_clean(GR& a) {
  for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
}
GR gr_mul(const GR& a, const GR& b) {
  GR r;
  for (const auto& [x, p] : a)
    for (const auto& [y, q] : b) r[(x + y).frac()] += p * q;
  gr_clean(r);
  return r;
}

// det(1 - C) for the weighted companion (cyclic) matrix C of one orbit, by Leibniz expansion.
GR companion_det(const std::vector<Rat>& edge_angles) {
  size_t n = edge_angles.size();
  std::vector<std::vector<GR>> m(n, std::vector<GR>(n));
  for (size_t i = 0; i < n; ++i) m[i][i][Rat(0)] += 1;
  for (size_t i = 0; i < n; ++i) m[(i + 1) % n][i][edge_angles[i]] -= 1;
  for (auto& row : m)
    for (auto& x : row) gr_clean(x);
  std::vector<size_t> p(n);
  for (size_t i = 0; i < n; ++i) p[i] = i;
  GR det;
  do {
    int inv = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    GR term{{Rat(0), 1}};
    for (size_t i = 0; i < n; ++i) term = gr_mul(term, m[i][p[i]]);
    for (const auto& [x, c] : term) det[x] += inv % 2 ? -c : c;
  } while (std::next_permutation(p.begin(), p.end()));
  gr_clean(det);
  return det;
}

struct TwistCase {
  std::string type;
  std::vector<size_t> perm;
};
const std::vector<TwistCase> kTwists{{"A1xA1", {1, 0}}, {"A2", {1, 0}}, {"A3", {2, 1, 0}},
                                     {"D4", {2, 1, 3, 0}}, {"D4", {2, 1, 0, 3}}, {"D4", {0, 1, 2, 3}}};

int signature_oracle(const BasedRootDatum& d, const RVec& f, const WeylElement& w) {
  int neg = 0;
  for (size_t b = 0; b < d.num_roots(); ++b) {
    if (!(dot(d.coroots()[w.perm[b]], f) < Rat(0))) continue;
    long long h = 0;
    for (auto c : d.coeffs(b)) h += c;
    bool noncompact = h % 2 != 0;
    bool in_rf = dot(d.coroots()[b], f) < Rat(0);
    if (noncompact == in_rf) ++neg;
  }
  return neg;
}

IMat random_unimodular(std::mt19937_64& rng, size_t n) {
  IMat u = identity(n);
  for (int k = 0; k < 8; ++k) {
    size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    long long c = (long long)(rng() % 5) - 2;
    for (size_t r = 0; r < n; ++r) u[r][i] += c * u[r][j];
  }
  return u;
}

}  // namespace

int main() {
  report(1, "classical identity, SL2, s0 in {0, 1/2}", [] {
    std::string info;
    bool ok;
    auto [gap, secs] = verify_entry("SL2", "id", Mutation::None, info, ok);
    return Outcome{ok && gap <= 1e-9 && secs < 1.0, info + "; runtime " + sci(secs) + " s, limit 1 s"};
  });

  report(2, "twisted identity, SL2xSL2 with the swap", [] {
    std::string info;
    bool ok;
    auto [gap, secs] = verify_entry("SL2xSL2-swap", "swap", Mutation::None, info, ok);
    return Outcome{ok && gap <= 1e-9 && secs < 5.0, info + "; runtime " + sci(secs) + " s, limit 5 s"};
  });

  report(3, "dropping the sign twist breaks the twisted identity", [] {
    std::string info;
    bool ok;
    auto [gap, secs] = verify_entry("SL2xSL2-swap", "swap", Mutation::DropEpsilon, info, ok);
    (void)secs;
    auto e = catalog_entry("SL2xSL2-swap");
    int eps = sign_character(EllipticTorusDatum::standard(e.datum), PinnedAutomorphism::from_perm(e.datum, {1, 0}));
    return Outcome{gap >= 0.1 && eps == -1, "max gap " + sci(gap) + " (need >= 0.1), eps(swap) = " + std::to_string(eps)};
  });

  report(4, "orbit determinant law vs companion-matrix oracle, 1000 pairs", [] {
    std::mt19937_64 rng(404);
    int agree = 0, total = 0;
    while (total < 1000) {
      const auto& c = kTwists[rng() % 5];  // nontrivial automorphisms only
      auto d = dat(c.type);
      auto a = PinnedAutomorphism::from_perm(d, c.perm);
      auto orbits = classify_orbits(d, a);
      const auto& o = orbits[rng() % orbits.size()];
      RVec t = rand_t(rng, d.rank());
      auto perm = root_permutation(d, a.matrix);
      std::vector<size_t> cyc{o.rep()};
      while (perm[cyc.back()] != cyc.front()) cyc.push_back(perm[cyc.back()]);
      std::vector<Rat> edges;
      for (size_t i = 0; i < cyc.size(); ++i) {
        Rat ang = dot(d.roots()[cyc[i]], t).frac();
        if (i + 1 == cyc.size() && o.line_sign < 0) ang = (ang + Rat(1, 2)).frac();
        edges.push_back(ang);
      }
      GR oracle = companion_det(edges);
      GR lib{{Rat(0), 1}};
      lib[orbit_factor_circle(d, o, t).angle()] -= 1;
      gr_clean(lib);
      ++total;
      if (oracle == lib) ++agree;
    }
    return Outcome{agree == total, std::to_string(agree) + "/" + std::to_string(total) + " exact matches"};
  });

  report(5, "modulus identity as angle multisets, 200 elements per entry", [] {
    std::mt19937_64 rng(505);
    int ok = 0, total = 0;
    for (const auto& e : catalog()) {
      const auto& d = e.datum;
      for (const auto& na : e.automorphisms) {
        auto a = PinnedAutomorphism::from_perm(d, na.perm);
        auto orbits = classify_orbits(d, a);
        std::vector<size_t> positive;
        for (size_t r = 0; r < d.num_positive(); ++r) positive.push_back(r);
        for (int i = 0; i < 200; ++i) {
          RVec t = rand_t(rng, d.rank());
          std::multiset<Rat> half, all;
          for (const auto& o : orbits) {
            Rat x;
            for (auto m : o.members) x += dot(d.roots()[m], t);
            if (o.line_sign < 0) x += Rat(1, 2);
            x = x.frac();
            Rat folded = std::min(x, Rat(1) - x);
            all.insert(folded);
            if (!d.is_positive(o.rep())) {
              half.insert(folded);
              half.insert(folded);
            }
          }
          ++total;
          if (half == all && modulus_identity_holds(d, orbits, positive, t)) ++ok;
        }
      }
    }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " elements"};
  });

  report(6, "q_uf parity vs signature oracle, all chambers, rank <= 3", [] {
    int ok = 0, total = 0;
    for (std::string ty : {"A1", "A1xA1", "A2", "B2", "C2", "G2", "A3", "B3", "C3"}) {
      auto t = EllipticTorusDatum::standard(dat(ty));
      const auto& d = t.datum;
      WeylGroup w(d);
      for (const auto& v : w.elements()) {
        RVec fv = mat_vec(v.matrix, d.rho());
        auto f = PositivitySystem::of(d, fv);
        for (const auto& x : w.elements()) {
          ++total;
          if (q_uf_parity(t, f, x) == signature_oracle(d, fv, x) % 2) ++ok;
        }
      }
    }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " (chamber, element) pairs"};
  });

  report(7, "folding and orbit suite", [] {
    auto t0 = Clock::now();
    std::vector<std::string> bad;
    for (const auto& c : kTwists) {
      auto d = dat(c.type);
      auto a = PinnedAutomorphism::from_perm(d, c.perm);
      size_t n = 0;
      for (const auto& o : classify_orbits(d, a))
        if (o.kind != OrbitKind::R3) ++n;
      if (n != fold(d, a).num_roots()) bad.push_back("orbit count " + c.type);
    }
    auto d4 = dat("D4");
    auto tri = PinnedAutomorphism::from_perm(d4, {2, 1, 3, 0});
    auto flip = PinnedAutomorphism::from_perm(d4, {2, 1, 0, 3});
    std::set<IVec> fixed;
    for (const auto& o : classify_orbits(d4, tri))
      if (o.members.size() == 1 && d4.is_positive(o.rep())) fixed.insert(d4.coeffs(o.rep()));
    if (fixed != std::set<IVec>{{0, 1, 0, 0}, {1, 1, 1, 1}, {1, 2, 1, 1}}) bad.push_back("D4 fixed roots");
    auto g = fold(d4, tri).cartan();
    if (!(g == IMat{{2, -1}, {-3, 2}} || g == IMat{{2, -3}, {-1, 2}})) bad.push_back("fold type");
    auto t4 = EllipticTorusDatum::standard(d4);
    auto s3 = generate_group(4, {tri.matrix, flip.matrix});
    if (s3.size() != 6) bad.push_back("S3 order");
    for (const auto& x : s3)
      for (const auto& y : s3) {
        auto ax = PinnedAutomorphism::from_matrix(d4, x), ay = PinnedAutomorphism::from_matrix(d4, y);
        if (sign_character(t4, compose(d4, ax, ay)) != sign_character(t4, ax) * sign_character(t4, ay))
          bad.push_back("epsilon homomorphism");
      }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::string info = bad.empty() ? "all checks exact" : "failed:";
    for (const auto& b : bad) info += " " + b;
    return Outcome{bad.empty() && secs < 10.0, info + "; limit 10 s"};
  });

  report(8, "pairing vs brute-force Z/2 enumeration, rank <= 4; bilinear; nondegenerate", [] {
    std::mt19937_64 rng(808);
    long long agree = 0, total = 0;
    bool bilinear = true, nondeg = true;
    for (size_t r = 1; r <= 4; ++r) {
      auto g = GaloisLattice::anisotropic(r);
      IMat id = identity(r);
      auto classes = h1_classes(g);
      if (classes.size() != (1u << r)) return Outcome{false, "H^1 has the wrong order at rank " + std::to_string(r)};
      for (int it = 0; it < 20; ++it) {
        IMat u = random_unimodular(rng, r), ut_inv = transpose(inverse_unimodular(u));
        auto pair = [&](const IVec& y, const IVec& c) {
          return tn_pair(g, id, {Rat(1, 2) * to_rvec(mat_vec(u, y)), RVec(r)},
                         {RVec(r), Rat(1, 2) * to_rvec(mat_vec(ut_inv, c))});
        };
        for (unsigned b = 0; b < (1u << r); ++b)
          for (unsigned cb = 0; cb < (1u << r); ++cb) {
            IVec y(r), c(r);
            for (size_t i = 0; i < r; ++i) {
              y[i] = (b >> i & 1);
              c[i] = (cb >> i & 1);
            }
            // every cocycle sigma -> y is a cocycle for sigma = -1; coboundaries are 2 X_*
            int brute = 1;
            for (size_t i = 0; i < r; ++i)
              if (y[i] & c[i]) brute = -brute;
            ++total;
            if (pair(y, c) == Circle::sign(brute)) ++agree;
          }
        for (const auto& y1 : classes)
          for (const auto& y2 : classes)
            for (const auto& c : classes)
              if (!(pair(y1 + y2, c) == pair(y1, c) * pair(y2, c))) bilinear = false;
        for (size_t k = 1; k < classes.size(); ++k) {
          bool hit = false;
          for (const auto& c : classes) hit = hit || !pair(classes[k], c).is_one();
          if (!hit) nondeg = false;
        }
      }
    }
    return Outcome{agree == total && bilinear && nondeg,
                   std::to_string(agree) + "/" + std::to_string(total) + " pairs, bilinear " + (bilinear ? "yes" : "no") +
                       ", nondegenerate " + (nondeg ? "yes" : "no")};
  });

  report(9, "trivializing real root on 500 products each in B3, C3, D4", [] {
    std::mt19937_64 rng(909);
    int ok = 0, total = 0, exists = 0;
    for (std::string ty : {"B3", "C3", "D4"}) {
      auto d = dat(ty);
      for (int i = 0; i < 500; ++i) {
        std::vector<size_t> bs;
        size_t len = 1 + rng() % 6;
        for (size_t j = 0; j < len; ++j) bs.push_back(rng() % d.num_roots());
        bool found = false;
        for (size_t r = 0; r < d.num_roots() && !found; ++r) {
          long long s = 0;
          for (auto b : bs) s += idot(d.roots()[r], d.coroots()[b]);
          found = s % 2 == 0;
        }
        if (found) ++exists;
        ++total;
        size_t al = trivializing_real_root(d, bs);
        if (eval_on_coroot_product(d, al, bs).is_one()) ++ok;
      }
    }
    return Outcome{ok == total && exists == total, std::to_string(ok) + "/" + std::to_string(total) +
                                                      " exact, brute force found a root in " + std::to_string(exists)};
  });

  report(10, "packet sizes and extension independence", [] {
    std::vector<std::pair<std::string, size_t>> sizes{
        {"SL2", 2}, {"Sp4", 4}, {"SL2xSL2-swap", 4}, {"Spin44-S3", 12}};
    std::string info;
    bool ok = true;
    for (const auto& [name, expect] : sizes) {
      auto e = catalog_entry(name);
      auto ctx = make_context(e, "id", e.default_lambda, e.s0_choices[0], Mutation::None);
      ok = ok && ctx.members().size() == expect;
      info += name + " " + std::to_string(ctx.members().size()) + ", ";
    }
    std::mt19937_64 rng(1010);
    long long same = 0, total = 0;
    for (const auto& e : catalog())
      for (const auto& na : e.automorphisms)
        for (const auto& s0 : e.s0_choices) {
          auto ctx = make_context(e, na.name, e.default_lambda, s0, Mutation::None);
          int ord = ctx.a().order;
          for (int i = 0; i < 20; ++i) {
            RVec t = rand_t(rng, e.datum.rank());
            for (const auto& m : ctx.members()) {
              auto base = ctx.member_numerators(m, t);
              for (int j = 0; j < ord; ++j) {
                PacketMember mm = m;
                mm.zeta = Circle(Rat(j, ord));
                ++total;
                if (ctx.member_numerators(mm, t) == base) ++same;
              }
            }
          }
        }
    ok = ok && same == total;
    return Outcome{ok, info + "summands unchanged " + std::to_string(same) + "/" + std::to_string(total)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
