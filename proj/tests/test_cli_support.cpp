#include <catch_amalgamated.hpp>

#include <sstream>

#include "endoscopy_lab.hpp"

using namespace endoscopy;

TEST_CASE("mutation names round-trip", "[cli]") {
  for (auto m : {Mutation::None, Mutation::DropEpsilon, Mutation::FlipDeltaI}) CHECK(parse_mutation(mutation_name(m)) == m);
  CHECK(parse_mutation("") == Mutation::None);
  CHECK_THROWS_AS(parse_mutation("drop"), std::invalid_argument);
}

TEST_CASE("verification is deterministic for a fixed seed", "[cli]") {
  auto e = catalog_entry("SL2xSL2-swap");
  auto ctx = make_context(e, "swap", e.default_lambda, e.s0_choices[0], Mutation::None);
  VerifyOptions o{25, 42, 1e-9, Mutation::None};
  auto r1 = run_verify(ctx, e.name, "swap", o), r2 = run_verify(ctx, e.name, "swap", o);
  REQUIRE(r1.per_point.size() == r2.per_point.size());
  CHECK(r1.draws == r2.draws);
  for (size_t i = 0; i < r1.per_point.size(); ++i) {
    CHECK(r1.per_point[i].t == r2.per_point[i].t);
    CHECK(r1.per_point[i].lhs.re == r2.per_point[i].lhs.re);
    CHECK(r1.per_point[i].rhs.im == r2.per_point[i].rhs.im);
  }
  o.seed = 43;
  auto r3 = run_verify(ctx, e.name, "swap", o);
  CHECK(r3.per_point[0].t != r1.per_point[0].t);
}

TEST_CASE("sampling draws denominators in range", "[cli]") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    RVec t = sample_angle(rng, 3);
    CHECK(t[0].den() <= 1000);
    for (const auto& x : t) {
      CHECK(x >= Rat(0));
      CHECK(x < Rat(1));
    }
  }
}

TEST_CASE("no admissible points is an error", "[cli]") {
  auto e = catalog_entry("SL2");
  auto ctx = make_context(e, "id", e.default_lambda, e.s0_choices[0], Mutation::None);
  CHECK_THROWS_WITH(run_verify(ctx, e.name, "id", VerifyOptions{0, 1, 1e-9, Mutation::None}),
                    Catch::Matchers::ContainsSubstring("degenerate sampling"));
}

TEST_CASE("catalog entries are consistent", "[cli]") {
  for (const auto& e : catalog()) {
    INFO(e.name);
    const auto& d = e.datum;
    for (size_t i = 0; i < d.semisimple_rank(); ++i) {
      IVec unit(d.rank(), 0);
      unit[i] = 1;
      CHECK(d.simple_coroots()[i] == unit);  // simply connected
    }
    CHECK(is_regular(d, e.default_lambda));
    CHECK(e.automorphisms.front().name == "id");
    CHECK_NOTHROW(e.automorphism(e.default_auto));
    for (const auto& a : e.automorphisms) {
      auto pa = PinnedAutomorphism::from_perm(d, a.perm);
      for (const auto& s0 : e.s0_choices) CHECK(is_in_twisted_centralizer(d, s0, pa, e.default_lambda));
    }
  }
  CHECK_THROWS_AS(catalog_entry("GL3"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_entry("SL2").automorphism("swap"), std::invalid_argument);
}

TEST_CASE("entries from datum files", "[cli]") {
  std::istringstream in("rank 2\n2 0\n0 2\n1 0\n0 1\nperm 1 0\n");
  auto e = entry_from_datum("file", parse_datum(in));
  CHECK(e.default_auto == "perm");
  CHECK(e.default_lambda == RVec{Rat(1), Rat(1)});
  auto ctx = make_context(e, "perm", e.default_lambda, e.s0_choices[0], Mutation::None);
  auto r = run_verify(ctx, e.name, "perm", VerifyOptions{10, 1, 1e-9, Mutation::None});
  CHECK(r.pass());
}
