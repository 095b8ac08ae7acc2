#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rootdata.hpp"

namespace endoscopy {

// Cartan matrices with C[i][j] = <alpha_i, alpha_j^v>, Bourbaki numbering.
inline IMat cartan_of(const std::string& type) {
  if (type == "A1") return {{2}};
  if (type == "A1xA1") return {{2, 0}, {0, 2}};
  if (type == "A2") return {{2, -1}, {-1, 2}};
  if (type == "A3") return {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
  if (type == "B2") return {{2, -2}, {-1, 2}};
  if (type == "C2") return {{2, -1}, {-2, 2}};
  if (type == "G2") return {{2, -1}, {-3, 2}};
  if (type == "B3") return {{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}};
  if (type == "C3") return {{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}};
  if (type == "D4") return {{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}};
  throw std::invalid_argument("unknown Cartan type '" + type + "'");
}

struct NamedAutomorphism {
  std::string name;
  std::vector<size_t> perm;
};

struct CatalogEntry {
  std::string name;
  std::string group;  // human-readable group name
  std::string type;   // Cartan type
  BasedRootDatum datum;
  std::vector<NamedAutomorphism> automorphisms;  // generators of A, identity first
  std::string default_auto;
  RVec default_lambda;  // regular dominant, in rho + X^*
  std::vector<RVec> s0_choices;  // first one is the default
  bool identity_run = true;      // full identity verification in the acceptance run

  const NamedAutomorphism& automorphism(const std::string& n) const {
    for (const auto& a : automorphisms)
      if (a.name == n) return a;
    std::string known;
    for (const auto& a : automorphisms) known += " " + a.name;
    throw std::invalid_argument("entry " + name + " has no automorphism '" + n + "' (known:" + known + ")");
  }
};

inline std::vector<CatalogEntry> catalog() {
  auto id = [](size_t n) {
    std::vector<size_t> p(n);
    for (size_t i = 0; i < n; ++i) p[i] = i;
    return NamedAutomorphism{"id", p};
  };
  std::vector<CatalogEntry> out;
  out.push_back({"SL2", "SL(2,R)", "A1", BasedRootDatum::from_cartan(cartan_of("A1")), {id(1)}, "id", {Rat(1)},
                 {{Rat(0)}, {Rat(1, 2)}}, true});
  out.push_back({"SL2xSL2-swap", "SL(2,R) x SL(2,R) with factor swap", "A1xA1",
                 BasedRootDatum::from_cartan(cartan_of("A1xA1")), {id(2), {"swap", {1, 0}}}, "swap", {Rat(1), Rat(1)},
                 {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 2)}}, true});
  out.push_back({"Sp4", "Sp(4,R)", "C2", BasedRootDatum::from_cartan(cartan_of("C2")), {id(2)}, "id", {Rat(1), Rat(1)},
                 {{Rat(0), Rat(0)}, {Rat(0), Rat(1, 2)}}, true});
  out.push_back({"Spin44-S3", "Spin(4,4) with triality automorphisms", "D4",
                 BasedRootDatum::from_cartan(cartan_of("D4")),
                 {id(4), {"triality", {2, 1, 3, 0}}, {"flip", {2, 1, 0, 3}}}, "triality", {Rat(1), Rat(1), Rat(1), Rat(1)},
                 {{Rat(0), Rat(0), Rat(0), Rat(0)}}, false});
  return out;
}

// Entry for a user-supplied datum: A generated by the optional permutation, lambda = rho, s0 = 0.
inline CatalogEntry entry_from_datum(const std::string& name, const ParsedDatum& p) {
  size_t n = p.datum.semisimple_rank();
  std::vector<size_t> id(n);
  for (size_t i = 0; i < n; ++i) id[i] = i;
  CatalogEntry e{name, "user datum", "custom", p.datum, {{"id", id}}, "id", p.datum.rho(), {RVec(p.datum.rank())}, true};
  if (p.perm) {
    e.automorphisms.push_back({"perm", *p.perm});
    e.default_auto = "perm";
  }
  return e;
}

inline CatalogEntry catalog_entry(const std::string& name) {
  std::string known;
  for (auto& e : catalog()) {
    if (e.name == name) return e;
    known += " " + e.name;
  }
  throw std::invalid_argument("unknown catalog entry '" + name + "' (known:" + known + ")");
}

}  // namespace endoscopy
