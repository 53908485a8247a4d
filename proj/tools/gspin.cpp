// gspin: command-line front end.
//
// Exit codes: 0 ok, 2 bad input, 3 precision exhausted, 4 budget exceeded,
// 5 an identity or self-test check failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "gspin/acceptance.hpp"
#include "gspin/clifford.hpp"
#include "gspin/errors.hpp"
#include "gspin/isocrystal.hpp"
#include "gspin/stratum.hpp"
#include "gspin/vertexgraph.hpp"
#include "json.hpp"

using namespace gspin;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kInput = 2, kPrecision = 3, kBudget = 4, kIdentity = 5 };

struct RunConfig {
  int p = 3;
  int n = 4;
  std::string det_class = "plus";
  int precision = 0;
  std::int64_t budget = 50'000'000;
  std::int64_t node_budget = 100'000;
  std::string format = "text";
  std::string out;
  unsigned seed = 1;
  bool serial = false;

  DetSelector sel() const { return parse_det_selector(det_class); }
  std::string banner() const {
    std::ostringstream o;
    o << "gspin " << kVersion << " p=" << p << " n=" << n << " det-class=" << det_class
      << " precision=" << (precision ? precision : default_precision(p)) << " budget=" << budget
      << " node-budget=" << node_budget << " format=" << format << " seed=" << seed
      << (serial ? " serial" : "");
    return o.str();
  }
  json to_json() const {
    return {{"version", kVersion}, {"p", p},           {"n", n},
            {"det_class", det_class}, {"precision", precision ? precision : default_precision(p)},
            {"budget", budget},   {"node_budget", node_budget}, {"seed", seed}};
  }
};

// Writes to --out or stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw InputError("cannot write " + cfg.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (auto* a : allowed)
    if (cfg.format == a) return;
  std::string msg = "format '" + cfg.format + "' not supported here; use one of:";
  for (auto* a : allowed) msg += std::string(" ") + a;
  throw InputError(msg);
}

// {"p": int, "gram": [[scalar, ...], ...]}
QpQuadSpace read_gram(const std::string& path, int precision) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad JSON: ") + e.what());
  }
  if (!j.contains("p") || !j["p"].is_number_integer() || !j.contains("gram") || !j["gram"].is_array())
    throw InputError("expected {\"p\": int, \"gram\": [[...]]}");
  int p = j["p"];
  if (p < 3 || p % 2 == 0) throw InputError("p must be an odd prime");
  auto& rows = j["gram"];
  std::size_t n = rows.size();
  if (n == 0) throw InputError("empty Gram matrix");
  PMatrix g = pmatrix_zero(p, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw InputError("Gram matrix must be square");
    for (std::size_t k = 0; k < n; ++k) {
      auto& x = rows[i][k];
      std::string s = x.is_string() ? x.get<std::string>() : x.is_number_integer() ? std::to_string(x.get<long long>()) : "";
      if (s.empty()) throw InputError("entries must be integers or strings");
      g(i, k) = PadicElement::parse(p, s, 1, precision);
    }
  }
  return QpQuadSpace(g);
}

json gram_json(const QpQuadSpace& v) {
  json rows = json::array();
  for (std::size_t i = 0; i < v.gram().rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < v.gram().cols(); ++k) r.push_back(v.gram()(i, k).to_string());
    rows.push_back(r);
  }
  return {{"p", v.prime()}, {"gram", rows}};
}

json invariants_json(const QuadInvariants& inv) {
  return {{"n", inv.n}, {"det", inv.det.name()}, {"hasse", inv.hasse}, {"witt_index", inv.witt_index},
          {"label", inv.label()}};
}

// ---------------------------------------------------------------------------

int cmd_invariants(const RunConfig& cfg, const std::string& gram_file) {
  require_format(cfg, {"text", "json"});
  auto v = gram_file.empty() ? standard_space(cfg.p, cfg.n, cfg.sel(), cfg.precision) : read_gram(gram_file, cfg.precision);
  auto inv = v.invariants();
  if (cfg.format == "json") {
    json j = invariants_json(inv);
    emit(cfg, j.dump(2));
  } else {
    std::ostringstream o;
    o << "# " << cfg.banner() << "\n"
      << "n " << inv.n << "\ndet " << inv.det.name() << "\nhasse " << (inv.hasse > 0 ? "+1" : "-1")
      << "\nwitt_index " << inv.witt_index << "\nclass " << inv.label() << "\n";
    emit(cfg, o.str());
  }
  return kOk;
}

int cmd_flip_hasse(const RunConfig& cfg, const std::string& gram_file) {
  require_format(cfg, {"json", "text"});
  auto v = gram_file.empty() ? standard_space(cfg.p, cfg.n, cfg.sel(), cfg.precision) : read_gram(gram_file, cfg.precision);
  auto w = flip_hasse(v);
  emit(cfg, gram_json(w).dump(2));
  return kOk;
}

int cmd_tmax(const RunConfig& cfg) {
  require_format(cfg, {"text", "json", "csv"});
  if (cfg.n < 3) throw InputError("n must be at least 3");
  auto v = standard_space(cfg.p, cfg.n, cfg.sel(), cfg.precision);
  auto tm = t_max(v.invariants(), cfg.p);
  int def = chai_rapoport_defect(v.invariants(), flip_hasse(v).invariants());
  bool ok = cfg.n - 2 - def == tm.t_max - 2;
  if (cfg.format == "json") {
    json j{{"n", cfg.n}, {"det_class", cfg.det_class}, {"t_max", tm.t_max}, {"dim", tm.dim},
           {"defect", def}, {"cross_check", ok}};
    emit(cfg, j.dump(2));
  } else if (cfg.format == "csv") {
    std::ostringstream o;
    o << "n,det_class,t_max,dim,defect,cross_check\n"
      << cfg.n << "," << cfg.det_class << "," << tm.t_max << "," << tm.dim << "," << def << "," << (ok ? "ok" : "fail") << "\n";
    emit(cfg, o.str());
  } else {
    std::ostringstream o;
    o << "# " << cfg.banner() << "\n"
      << "t_max " << tm.t_max << "\ndim " << tm.dim << "\ndefect " << def << "\ncross_check "
      << (ok ? "ok" : "FAILED") << "\n";
    emit(cfg, o.str());
  }
  return ok ? kOk : kIdentity;
}

VertexSetup setup_of(const RunConfig& cfg) {
  auto s = make_setup(cfg.p, cfg.n, cfg.sel(), AmbientSource::flip_hasse, cfg.precision);
  s.oracle.budget = cfg.budget;
  s.oracle.parallel = !cfg.serial;
  s.node_budget = cfg.node_budget;
  s.parallel = !cfg.serial;
  return s;
}

int cmd_vertex_graph(const RunConfig& cfg, int depth, bool pair) {
  require_format(cfg, {"dot", "json", "text"});
  auto s = setup_of(cfg);
  if (s.tmax.t_max < 2) throw InputError("no vertex lattices for this space");
  auto seed = find_maximal_vertex(s);
  auto g = bfs_graph(s, seed, depth);
  int rc = kOk;
  json path_json;
  std::ostringstream path_text;
  if (pair) {
    std::mt19937 rng(cfg.seed);
    auto a = random_vertex_lattice(s, rng, 1), b = random_vertex_lattice(s, rng, 1);
    auto path = path_between(s, a, b);
    bool ok = a == b ? path.empty() : path.size() >= 2 && path.front() == a && path.back() == b;
    for (std::size_t i = 0; ok && i + 1 < path.size(); ++i) ok = adjacent(path[i], path[i + 1]);
    for (auto& x : path) {
      auto r = try_vertex(x.lattice());
      ok = ok && r && *r == x;
    }
    path_json = json::array();
    for (auto& x : path) path_json.push_back({{"type", x.type()}, {"key", x.key()}});
    path_text << "path " << path.size() << " lattices, types";
    for (auto& x : path) path_text << " " << x.type();
    path_text << ", replay " << (ok ? "ok" : "FAILED") << "\n";
    if (!ok) rc = kIdentity;
  }
  if (cfg.format == "dot") {
    emit(cfg, g.to_dot());
    if (pair) std::cerr << path_text.str();
  } else if (cfg.format == "json") {
    json j = json::parse(g.to_json());
    if (pair) j["path"] = path_json;
    emit(cfg, j.dump(2));
  } else {
    std::map<int, int> types;
    for (auto& x : g.nodes) ++types[x.type()];
    std::ostringstream o;
    o << "# " << cfg.banner() << "\n"
      << "nodes " << g.nodes.size() << "\nedges " << g.edges.size() << "\ntypes";
    for (auto [t, c] : types) o << " " << t << ":" << c;
    o << "\n" << path_text.str();
    emit(cfg, o.str());
  }
  return rc;
}

// Vertex lattice of type t in dimension t (t >= 4) or 3 (t = 2).
VertexLattice vertex_of_type(RunConfig cfg, int t) {
  if (t < 2 || t % 2) throw InputError("t must be even and at least 2");
  cfg.n = t == 2 ? 3 : t;
  cfg.det_class = t == 2 ? "plus" : "minus";
  auto s = setup_of(cfg);
  auto L = find_maximal_vertex(s);
  if (L.type() != t) throw InputError("could not build a vertex lattice of type " + std::to_string(t));
  return L;
}

int cmd_stratum_count(const RunConfig& cfg, int t, int k) {
  require_format(cfg, {"text", "json", "csv"});
  if (k < 1) throw InputError("k must be positive");
  auto ct = stratum_count(vertex_of_type(cfg, t), k, cfg.budget, !cfg.serial);
  std::int64_t sum = 0;
  for (auto [ty, c] : ct.bt) sum += c;
  bool ok = ct.partition && ct.buckets_match && sum == ct.total && ct.chains_ok && ct.dl_agrees &&
            ct.frobenius_flips && ct.plus == ct.minus;
  if (!ok) {
    std::cerr << "stratum identities failed: partition=" << ct.partition << " buckets=" << ct.buckets_match
              << " chains=" << ct.chains_ok << " dl=" << ct.dl_agrees << " flips=" << ct.frobenius_flips << "\n";
    return kIdentity;
  }
  if (cfg.format == "json") {
    emit(cfg, json::parse(ct.to_json()).dump(2));
  } else if (cfg.format == "csv") {
    emit(cfg, ct.to_csv());
  } else {
    std::ostringstream o;
    o << "# " << cfg.banner() << "\n"
      << "t " << ct.t << " p " << ct.p << " k " << ct.k << "\ntotal " << ct.total << "\nplus " << ct.plus
      << "\nminus " << ct.minus << "\n";
    for (auto [ty, c] : ct.bt) o << "bt type " << ty << ": " << c << "\n";
    o << "sublattices " << ct.sublattices << "\n";
    emit(cfg, o.str());
  }
  return kOk;
}

int cmd_clifford_check(const RunConfig& cfg, bool corrupt) {
  require_format(cfg, {"text", "json"});
  if (cfg.n < 3 || cfg.n > 8) throw InputError("n must be in 3..8");
  int p = cfg.p, n = cfg.n;
  QMatrix gram = standard_gram(p, n, cfg.sel());
  if (corrupt) gram(2, 2) = 2 * p;  // Q(x3) = p: not self-dual
  auto alg = CliffordAlgebra::create(p, gram);
  auto b = basic_b(alg);
  std::vector<std::pair<std::string, bool>> rows;

  rows.emplace_back("b^2 = -Q(x3)/p", b * b == alg->scalar(-alg->q_value(2) / p));
  {
    bool ok = true;
    auto bk = alg->scalar(1);
    for (int k = 0; k <= 3; ++k) {
      auto r = is_gspin(bk);
      ok = ok && r && valuation(r.element->eta, p) == -k;
      bk = bk * b;
    }
    rows.emplace_back("ord_p eta(b^k) = -k, k = 0..3", ok);
  }
  {
    mpq_class t(p + 2, p);
    auto m = is_gspin(mu(alg, t));
    QMatrix expected = qmatrix_identity(n);
    expected(0, 0) = 1 / t;
    expected(1, 1) = t;
    rows.emplace_back("mu(t) acts by diag(1/t, t, 1, ...)", m && m.element->action == expected && m.element->eta == 1 / t);
  }
  {
    auto h = is_gspin(mu(alg, mpq_class(1, p)) * b);
    rows.emplace_back("mu(p)^-1 b stabilizes the standard lattice",
                      h && valuation(h.element->eta, p) == 0 &&
                          elementary_divisor_valuations(h.element->action, p) == std::vector<int>(n, 0));
  }
  rows.emplace_back("psi_delta perfect", psi_perfection(alg, default_delta(alg)).perfect);
  auto twist = verify_twist(alg, 1, cfg.precision);
  rows.emplace_back("twisted fixed space", twist.pass());

  bool all = true;
  for (auto& r : rows) all = all && r.second;
  if (cfg.format == "json") {
    json j;
    j["config"] = cfg.to_json();
    j["corrupt"] = corrupt;
    json arr = json::array();
    for (auto& [name, ok] : rows) arr.push_back({{"identity", name}, {"pass", ok}});
    j["identities"] = arr;
    j["twist"] = json::parse(twist.to_json());
    j["pass"] = all;
    emit(cfg, j.dump(2));
  } else {
    std::ostringstream o;
    o << "# " << cfg.banner() << (corrupt ? " corrupt" : "") << "\n";
    for (auto& [name, ok] : rows) o << (ok ? "PASS " : "FAIL ") << name << "\n";
    emit(cfg, o.str());
  }
  return all ? kOk : kIdentity;
}

int cmd_selftest(const RunConfig& cfg, const std::vector<int>& only) {
  require_format(cfg, {"text", "json"});
  AcceptanceConfig ac;
  ac.budget = cfg.budget;
  ac.node_budget = cfg.node_budget;
  ac.parallel = !cfg.serial;
  ac.seed = cfg.seed;
  ac.only = only;
  bool text = cfg.format == "text" && cfg.out.empty();
  if (text) std::cout << "# " << cfg.banner() << "\n" << std::flush;
  auto results = run_acceptance(ac, [&](const CriterionResult& r) {
    if (text) std::cout << format_result(r, false) << "\n" << std::flush;
  });
  if (cfg.format == "json") {
    emit(cfg, acceptance_json(ac, results));
  } else if (!text) {
    std::ostringstream o;
    o << "# " << cfg.banner() << "\n";
    for (auto& r : results) o << format_result(r, false) << "\n";
    emit(cfg, o.str());
  }
  for (auto& r : results)
    if (r.outcome == Outcome::fail) return kIdentity;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex lattices, Lagrangian strata and GSpin identities over Q_p"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--p", cfg.p, "odd prime")->check(CLI::Range(3, 1 << 20));
  app.add_option("--n", cfg.n, "dimension of V");
  app.add_option("--det-class", cfg.det_class, "determinant selector")->check(CLI::IsMember({"plus", "minus"}));
  app.add_option("--precision", cfg.precision, "p-adic digits (0: default)");
  app.add_option("--budget", cfg.budget, "enumeration budget")->check(CLI::PositiveNumber);
  app.add_option("--node-budget", cfg.node_budget, "vertex graph node budget")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "text, json, dot or csv")
      ->check(CLI::IsMember({"text", "json", "dot", "csv"}));
  app.add_option("--out", cfg.out, "output file");
  app.add_option("--seed", cfg.seed, "seed for random choices");
  app.add_flag("--serial", cfg.serial, "disable OpenMP kernels");

  std::string gram_file;
  auto* inv = app.add_subcommand("invariants", "classify a quadratic space");
  inv->add_option("--gram", gram_file, "JSON Gram file (default: the standard space)");
  auto* flip = app.add_subcommand("flip-hasse", "same dim and det, opposite Hasse invariant");
  flip->add_option("--gram", gram_file, "JSON Gram file (default: the standard space)");
  auto* tmax = app.add_subcommand("tmax", "largest vertex type, dimension and defect");
  int depth = 1;
  bool pair = false;
  auto* vg = app.add_subcommand("vertex-graph", "explore vertex lattices from a maximal one");
  vg->add_option("--depth", depth, "BFS depth")->check(CLI::NonNegativeNumber);
  vg->add_flag("--pair", pair, "connect two random vertex lattices and verify the path");
  int t = 2, k = 1;
  auto* sc = app.add_subcommand("stratum-count", "count points of S_Lambda over F_{p^k}");
  sc->add_option("--t", t, "type of Lambda");
  sc->add_option("--k", k, "degree of the field");
  bool corrupt = false;
  auto* cc = app.add_subcommand("clifford-check", "identity suite for b, mu and psi_delta");
  cc->add_flag("--corrupt", corrupt, "use a non-self-dual form (negative control)");
  std::vector<int> only;
  auto* st = app.add_subcommand("selftest", "run the acceptance criteria");
  st->add_option("--only", only, "criterion ids")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    mpz_class pz(cfg.p);
    if (cfg.p % 2 == 0 || mpz_probab_prime_p(pz.get_mpz_t(), 25) == 0) throw InputError("p must be an odd prime");
    // text reports carry the banner themselves
    if (cfg.format != "text") std::cerr << "# " << cfg.banner() << "\n";
    if (*inv) return cmd_invariants(cfg, gram_file);
    if (*flip) return cmd_flip_hasse(cfg, gram_file);
    if (*tmax) return cmd_tmax(cfg);
    if (*vg) return cmd_vertex_graph(cfg, depth, pair);
    if (*sc) return cmd_stratum_count(cfg, t, k);
    if (*cc) return cmd_clifford_check(cfg, corrupt);
    if (*st) return cmd_selftest(cfg, only);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return kPrecision;
  } catch (const TooLarge& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Degenerate& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
