#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "endoscopy_lab.hpp"

using namespace endoscopy;
using json = nlohmann::json;

namespace {

struct Options {
  std::string entry;
  std::string datum_file;
  std::string lambda;
  std::string s0;
  std::string automorphism;
  size_t points = 50;
  uint64_t seed = 1;
  double tol = 1e-9;
  std::string mutate = "none";
  std::string report;
  std::string config;
  bool verbose = false;
};

RVec parse_vector(const std::string& s, size_t n, const std::string& what) {
  RVec out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) throw std::invalid_argument(what + ": empty component");
    out.push_back(Rat::parse(tok));
  }
  if (out.size() != n)
    throw std::invalid_argument(what + ": expected " + std::to_string(n) + " components, got " +
                                std::to_string(out.size()));
  return out;
}

// Line-oriented "key = value" file; keys are long option names without dashes.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(path + ":" + std::to_string(no) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Config values fill only options not given on the command line.
void apply_config(CLI::App* sub, Options& o) {
  if (o.config.empty()) return;
  auto given = [&](const std::string& k) { return sub->count("--" + k) > 0; };
  for (const auto& [k, v] : read_config(o.config)) {
    if (given(k)) continue;
    if (k == "entry") o.entry = v;
    else if (k == "datum") o.datum_file = v;
    else if (k == "lambda") o.lambda = v;
    else if (k == "s0") o.s0 = v;
    else if (k == "auto") o.automorphism = v;
    else if (k == "points") o.points = std::stoul(v);
    else if (k == "seed") o.seed = std::stoull(v);
    else if (k == "tol") o.tol = std::stod(v);
    else if (k == "mutate") o.mutate = v;
    else if (k == "report") o.report = v;
    else throw std::invalid_argument("unknown config key '" + k + "'");
  }
}

CatalogEntry resolve_entry(const Options& o) {
  if (!o.datum_file.empty()) {
    std::ifstream in(o.datum_file);
    if (!in) throw std::invalid_argument("cannot open datum file " + o.datum_file);
    try {
      return entry_from_datum(o.datum_file, parse_datum(in));
    } catch (const ParseError& e) {
      throw std::invalid_argument(o.datum_file + ": " + e.what());
    }
  }
  if (o.entry.empty()) throw std::invalid_argument("no entry given (use --entry NAME or --datum FILE)");
  return catalog_entry(o.entry);
}

std::string fmt(double x, const char* spec = "%.3e") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}
std::string fmt(const Cx& z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%+.12f%+.12fi", z.re, z.im);
  return buf;
}

json rvec_json(const RVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}
json cx_json(const Cx& z) { return json::array({z.re, z.im}); }

json report_json(const VerificationReport& r) {
  json j;
  j["entry"] = r.entry;
  j["automorphism"] = r.automorphism;
  j["mutation"] = r.mutation;
  j["lambda"] = rvec_json(r.lambda);
  j["s0"] = rvec_json(r.s0);
  j["tolerance"] = r.tol;
  j["points_tested"] = r.points_tested;
  j["draws"] = r.draws;
  j["max_abs_gap"] = r.max_abs_gap;
  j["pass"] = r.pass();
  json pts = json::array();
  for (const auto& p : r.per_point)
    pts.push_back({{"angles", rvec_json(p.t)}, {"lhs", cx_json(p.lhs)}, {"rhs", cx_json(p.rhs)}, {"gap", p.gap}});
  j["per_point"] = pts;
  j["failures"] = r.failures;
  return j;
}

void print_report(const VerificationReport& r, bool verbose) {
  std::cout << "entry " << r.entry << "  a=" << r.automorphism << "  lambda=" << to_string(r.lambda)
            << "  s0=" << to_string(r.s0) << "  mutate=" << r.mutation << "\n";
  if (verbose) {
    std::cout << "  #   angles                      LHS                                  RHS                                  gap\n";
    for (size_t i = 0; i < r.per_point.size(); ++i) {
      const auto& p = r.per_point[i];
      std::printf("  %-3zu %-27s %-36s %-36s %s\n", i, to_string(p.t).c_str(), fmt(p.lhs).c_str(),
                  fmt(p.rhs).c_str(), fmt(p.gap).c_str());
    }
  }
  std::cout << "  points " << r.points_tested << " (draws " << r.draws << ")  max |LHS-RHS| = " << fmt(r.max_abs_gap)
            << "  tol " << fmt(r.tol) << "  " << (r.pass() ? "PASS" : "FAIL") << "\n";
  for (const auto& f : r.failures) std::cout << "  failure: " << f << "\n";
}

int cmd_catalog() {
  for (const auto& e : catalog()) {
    std::cout << e.name << "  (" << e.group << ", type " << e.type << ", rank " << e.datum.rank() << ")\n";
    std::cout << "  automorphisms:";
    for (const auto& a : e.automorphisms) {
      std::cout << " " << a.name << "[";
      for (size_t i = 0; i < a.perm.size(); ++i) std::cout << (i ? " " : "") << a.perm[i];
      std::cout << "]";
    }
    std::cout << "  default " << e.default_auto << "\n  lambda " << to_string(e.default_lambda) << "  s0 choices:";
    for (const auto& s : e.s0_choices) std::cout << " " << to_string(s);
    std::cout << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o) {
  CatalogEntry e = resolve_entry(o);
  size_t n = e.datum.rank();
  std::string an = o.automorphism.empty() ? e.default_auto : o.automorphism;
  RVec lambda = o.lambda.empty() ? e.default_lambda : parse_vector(o.lambda, n, "--lambda");
  std::vector<RVec> s0s = o.s0.empty() ? e.s0_choices : std::vector<RVec>{parse_vector(o.s0, n, "--s0")};
  VerifyOptions vo{o.points, o.seed, o.tol, parse_mutation(o.mutate)};
  json runs = json::array();
  bool pass = true;
  for (const auto& s0 : s0s) {
    auto ctx = make_context(e, an, lambda, s0, vo.mutation);
    auto r = run_verify(ctx, e.name, an, vo);
    print_report(r, o.verbose);
    runs.push_back(report_json(r));
    pass = pass && r.pass();
  }
  if (!o.report.empty()) {
    std::ofstream out(o.report);
    if (!out) throw std::invalid_argument("cannot write report " + o.report);
    out << json{{"runs", runs}, {"pass", pass}}.dump(2) << "\n";
  }
  std::cout << (pass ? "verify: PASS" : "verify: FAIL") << "\n";
  return pass ? 0 : 1;
}

int cmd_packet(const Options& o) {
  CatalogEntry e = resolve_entry(o);
  size_t n = e.datum.rank();
  std::string an = o.automorphism.empty() ? "id" : o.automorphism;
  RVec lambda = o.lambda.empty() ? e.default_lambda : parse_vector(o.lambda, n, "--lambda");
  auto t = EllipticTorusDatum::standard(e.datum);
  WeylGroup w(e.datum);
  auto a = PinnedAutomorphism::from_perm(e.datum, e.automorphism(an).perm);
  auto members = enumerate_packet(t, w, a, lambda);
  std::vector<RVec> s0s = o.s0.empty() ? e.s0_choices : std::vector<RVec>{parse_vector(o.s0, n, "--s0")};
  std::cout << "packet of " << e.name << "  a=" << an << "  lambda=" << to_string(lambda) << "\n";
  std::cout << "  size " << members.size() << "  (|Omega^a| / |Omega_R^a|)\n";
  for (size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    std::string word;
    for (int s : w[m.w].word) word += "s" + std::to_string(s + 1);
    std::cout << "  member " << i << "  w=" << (word.empty() ? "1" : word) << "  tau_lhd=" << to_string(m.mu)
              << "  inv=" << to_string(m.inv) << "  characters:";
    for (const auto& s0 : s0s) {
      Circle c = m.component_character(s0);
      std::cout << " " << (c.is_one() ? "+1" : c == Circle::minus_one() ? "-1" : c.angle().str());
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_invariants(const Options& o) {
  CatalogEntry e = resolve_entry(o);
  InvariantSuite suite(o.seed);
  auto results = suite.run(e);
  size_t bad = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.pass) std::cout << ": " << r.detail;
    std::cout << "\n";
    if (!r.pass) ++bad;
  }
  std::cout << "invariants " << e.name << ": " << results.size() - bad << "/" << results.size() << " passed\n";
  return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"endoscopy-lab: exact root data, twisted characters and transfer factors"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* s) {
    s->add_option("entry,--entry", o.entry, "catalog entry name");
    s->add_option("--datum", o.datum_file, "root datum text file instead of a catalog entry");
    s->add_option("--lambda", o.lambda, "Harish-Chandra parameter, comma-separated rationals");
    s->add_option("--s0", o.s0, "endoscopic element, comma-separated rationals");
    s->add_option("--auto", o.automorphism, "automorphism name");
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--config", o.config, "key = value configuration file");
  };
  auto* cat = app.add_subcommand("catalog", "list catalog entries");
  auto* ver = app.add_subcommand("verify", "check LHS = RHS of the twisted character identity at sampled points");
  add_common(ver);
  ver->add_option("--points", o.points, "number of admissible sample points");
  ver->add_option("--tol", o.tol, "tolerance on |LHS - RHS|");
  ver->add_option("--mutate", o.mutate, "none | drop-epsilon | flip-deltaI");
  ver->add_option("--report", o.report, "write a JSON report to this path");
  ver->add_flag("--verbose,-v", o.verbose, "print every sample point");
  auto* pk = app.add_subcommand("packet", "list the discrete series packet");
  add_common(pk);
  auto* inv = app.add_subcommand("invariants", "run the property suite for an entry");
  add_common(inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (cat->parsed()) return cmd_catalog();
    if (ver->parsed()) { apply_config(ver, o); return cmd_verify(o); }
    if (pk->parsed()) { apply_config(pk, o); return cmd_packet(o); }
    if (inv->parsed()) { apply_config(inv, o); return cmd_invariants(o); }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
