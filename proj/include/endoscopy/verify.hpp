#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "endoscopy.hpp"

namespace endoscopy {

struct VerifyOptions {
  size_t points = 50;
  uint64_t seed = 1;
  double tol = 1e-9;
  Mutation mutation = Mutation::None;
};

struct PointRecord {
  RVec t;
  Cx lhs, rhs;
  double gap = 0.0;
};

struct VerificationReport {
  std::string entry, automorphism, mutation;
  RVec lambda, s0;
  double tol = 0.0;
  size_t points_tested = 0;
  size_t draws = 0;
  double max_abs_gap = 0.0;
  std::vector<PointRecord> per_point;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty() && max_abs_gap <= tol; }
};

// Uniform draw in [0, n); plain modulo keeps the stream identical across standard libraries.
inline uint64_t draw(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

inline RVec sample_angle(std::mt19937_64& rng, size_t rank) {
  long long den = 2 + (long long)draw(rng, 999);
  RVec t;
  for (size_t i = 0; i < rank; ++i) t.push_back(Rat((long long)draw(rng, (uint64_t)den), den));
  return t;
}

inline VerificationReport run_verify(const IdentityContext& ctx, const std::string& entry,
                                     const std::string& auto_name, const VerifyOptions& opt) {
  VerificationReport r;
  r.entry = entry;
  r.automorphism = auto_name;
  r.mutation = mutation_name(ctx.mutation());
  r.lambda = ctx.lambda();
  r.s0 = ctx.s0();
  r.tol = opt.tol;
  std::mt19937_64 rng(opt.seed);
  size_t n = ctx.g().datum.rank();
  size_t max_draws = 10 * opt.points;
  while (r.points_tested < opt.points && r.draws < max_draws) {
    ++r.draws;
    RVec t = sample_angle(rng, n);
    if (!ctx.admissible(t)) continue;
    PointResult p;
    try {
      p = ctx.evaluate(t);
    } catch (const SingularPoint&) {
      continue;
    } catch (const std::logic_error& e) {
      r.failures.push_back("at t = " + to_string(t) + ": " + e.what());
      continue;
    }
    ++r.points_tested;
    r.per_point.push_back({t, p.lhs, p.rhs, p.gap});
    if (p.gap > r.max_abs_gap) r.max_abs_gap = p.gap;
  }
  if (r.points_tested == 0) throw std::runtime_error("degenerate sampling: no admissible point in " +
                                                     std::to_string(r.draws) + " draws");
  if (r.points_tested < opt.points)
    r.failures.push_back("only " + std::to_string(r.points_tested) + " admissible points in " +
                         std::to_string(r.draws) + " draws");
  return r;
}

inline IdentityContext make_context(const CatalogEntry& e, const std::string& auto_name, const RVec& lambda,
                                    const RVec& s0, Mutation mut) {
  const auto& na = e.automorphism(auto_name);
  return IdentityContext(EllipticTorusDatum::standard(e.datum), PinnedAutomorphism::from_perm(e.datum, na.perm),
                         lambda, s0, mut);
}

}  // namespace endoscopy
