#include "gspin/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "gspin/clifford.hpp"
#include "gspin/errors.hpp"
#include "gspin/isocrystal.hpp"
#include "gspin/lattice.hpp"
#include "gspin/stratum.hpp"
#include "gspin/vertexgraph.hpp"
#include "json.hpp"

namespace gspin {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "PASS";
    case Outcome::fail: return "FAIL";
    case Outcome::skipped: return "SKIPPED";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;
const DetSelector kSels[] = {DetSelector::plus, DetSelector::minus};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const char* sel_name(DetSelector s) { return s == DetSelector::plus ? "plus" : "minus"; }

// Counts checks and keeps the first few failures.
struct Tally {
  std::int64_t checks = 0, failed = 0;
  std::vector<std::string> notes;
  std::string summary;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failed;
    if (notes.size() < 3) notes.push_back(what);
  }
  void time_limit(double secs, double limit, const std::string& what) {
    std::ostringstream o;
    o << what << " took " << static_cast<int>(secs) << " s (limit " << static_cast<int>(limit) << " s)";
    check(secs < limit, o.str());
  }
};

VertexSetup setup_for(const AcceptanceConfig& cfg, int p, int n, DetSelector sel) {
  auto s = make_setup(p, n, sel);
  s.oracle.budget = cfg.budget;
  s.oracle.parallel = cfg.parallel;
  s.node_budget = cfg.node_budget;
  s.parallel = cfg.parallel;
  return s;
}

// ---------------------------------------------------------------------------
// 1

void types_in_region(const AcceptanceConfig& cfg, Tally& t) {
  std::int64_t biggest = 0, vertices = 0;
  for (int p : {3, 5})
    for (int n = 3; n <= 5; ++n) {
      auto t0 = Clock::now();
      for (auto sel : kSels) {
        std::ostringstream tag;
        tag << "p=" << p << " n=" << n << " " << sel_name(sel);
        auto s = setup_for(cfg, p, n, sel);
        auto r = enumerate_region(s, cfg.parallel);
        int tm = s.tmax.t_max;
        bool even = true, range = true;
        for (auto [ty, c] : r.types) {
          even = even && ty % 2 == 0;
          range = range && ty >= 2 && ty <= tm;
        }
        t.check(even, tag.str() + ": odd type found");
        t.check(range, tag.str() + ": type outside [2, t_max]");
        t.check(!r.types.empty() && r.types.rbegin()->first == tm, tag.str() + ": t_max not attained");
        t.check(r.covered_in_region + r.covered_by_climb == static_cast<std::int64_t>(r.vertices.size()),
                tag.str() + ": vertex not covered by a type t_max lattice");
        biggest = std::max(biggest, r.integral);
        vertices += static_cast<std::int64_t>(r.vertices.size());
      }
      std::ostringstream tag;
      tag << "p=" << p << " n=" << n;
      t.time_limit(since(t0), 300, tag.str());
    }
  std::ostringstream o;
  o << "12 spaces, " << vertices << " vertex lattices, largest region " << biggest << " integral lattices";
  t.summary = o.str();
}

// ---------------------------------------------------------------------------
// 2

void hasse_twist(const AcceptanceConfig&, Tally& t) {
  for (int n = 3; n <= 7; ++n) {
    auto t0 = Clock::now();
    for (int p : {3, 5})
      for (auto sel : kSels) {
        auto alg = CliffordAlgebra::standard(p, n, sel);
        auto r = verify_twist(alg, 1, 24);
        std::ostringstream tag;
        tag << "p=" << p << " n=" << n << " " << sel_name(sel) << ": " << r.to_json();
        t.check(r.pass() && r.hasse_got == -1 && r.dim_got == n, tag.str());
      }
    t.time_limit(since(t0), 60, "n=" + std::to_string(n));
  }
  t.summary = "n=3..7, p in {3,5}, both det classes, precision 24";
}

// ---------------------------------------------------------------------------
// 3

void clifford_identities(const AcceptanceConfig&, Tally& t) {
  auto t0 = Clock::now();
  for (int p : {3, 5})
    for (int n = 3; n <= 7; ++n)
      for (auto sel : kSels) {
        std::ostringstream o;
        o << "p=" << p << " n=" << n << " " << sel_name(sel) << ": ";
        std::string tag = o.str();
        auto alg = CliffordAlgebra::standard(p, n, sel);
        auto b = basic_b(alg);
        t.check(b * b == alg->scalar(-alg->q_value(2) / p), tag + "b^2");
        auto bk = alg->scalar(1);
        for (int k = 0; k <= 3; ++k) {
          auto r = is_gspin(bk);
          t.check(r && valuation(r.element->eta, p) == -k, tag + "eta(b^" + std::to_string(k) + ")");
          bk = bk * b;
        }
        auto h = is_gspin(mu(alg, mpq_class(1, p)) * b);
        t.check(h && valuation(h.element->eta, p) == 0 &&
                    elementary_divisor_valuations(h.element->action, p) == std::vector<int>(n, 0),
                tag + "mu(p)^-1 b");
        auto w = cocharacter_weights(alg);
        std::int64_t minus = 0, zero = 0;
        mpq_class s(2, 7);
        auto m = mu(alg, s);
        bool eigen = true;
        for (auto& x : w) {
          (x.weight == -1 ? minus : zero) += 1;
          eigen = eigen && m * x.z == x.z * (x.weight == -1 ? 1 / s : mpq_class(1));
        }
        std::int64_t half = std::int64_t(1) << (n - 1);
        t.check(eigen && minus == half && zero == half, tag + "weight split");
      }
  t.time_limit(since(t0), 60, "n <= 7");
  t.summary = "b^2, eta valuations k=0..3, mu(p)^-1 b, weights; n=3..7, p in {3,5}";
}

// ---------------------------------------------------------------------------
// 4

void slopes(const AcceptanceConfig&, Tally& t) {
  int worst = 0;
  for (int p : {3, 5})
    for (int n = 3; n <= 7; ++n)
      for (auto sel : kSels) {
        std::ostringstream o;
        o << "p=" << p << " n=" << n << " " << sel_name(sel);
        auto alg = CliffordAlgebra::standard(p, n, sel);
        int period = phi_orbit_period(phi_from_b(alg));
        worst = std::max(worst, period);
        t.check(period <= 2, o.str() + ": period " + std::to_string(period));
        t.check(slope_on_D(alg, basic_b(alg)) == mpq_class(1, 2), o.str() + ": slope on D");
      }
  t.summary = "largest orbit period " + std::to_string(worst) + ", slope 1/2 on D (all divisors p)";
}

// ---------------------------------------------------------------------------
// 5, 6, 7 share the count tables

struct TableCache {
  const AcceptanceConfig& cfg;
  std::map<std::tuple<int, int, int>, CountTable> tables;  // (p, t, k)
  std::map<int, double> seconds_by_t;

  VertexLattice vertex(int p, int t) {
    if (t == 2) return find_maximal_vertex(setup_for(cfg, p, 3, DetSelector::plus));
    if (t == 4) return find_maximal_vertex(setup_for(cfg, p, 4, DetSelector::minus));
    return find_maximal_vertex(setup_for(cfg, p, 6, DetSelector::minus));
  }
  const CountTable& get(int p, int t, int k) {
    auto key = std::make_tuple(p, t, k);
    auto it = tables.find(key);
    if (it != tables.end()) return it->second;
    auto t0 = Clock::now();
    auto ct = stratum_count(vertex(p, t), k, cfg.budget, cfg.parallel);
    seconds_by_t[t] += since(t0);
    return tables.emplace(key, std::move(ct)).first->second;
  }
};

void lagrangian_structure(TableCache& cache, Tally& t) {
  std::ostringstream two;
  for (int p : {3, 5}) {
    two << (p == 3 ? "" : "; ") << "p=" << p << ":";
    for (int k = 1; k <= 3; ++k) {
      auto& ct = cache.get(p, 2, k);
      two << " k" << k << "=" << ct.total;
      std::ostringstream o;
      o << "t=2 p=" << p << " k=" << k << ": " << ct.total << " points";
      t.check(ct.total == 2, o.str());
      if (ct.total == 2) t.check(ct.plus == 1 && ct.minus == 1 && ct.frobenius_flips, o.str() + " not split 1/1");
    }
  }
  std::ostringstream big;
  for (int tt : {4, 6})
    for (int k = 1; k <= 2; ++k) {
      auto& ct = cache.get(3, tt, k);
      std::ostringstream o;
      o << "t=" << tt << " k=" << k;
      big << " " << o.str() << ": " << ct.plus << "/" << ct.minus << ";";
      t.check(ct.plus == ct.minus, o.str() + ": unequal components");
      t.check(ct.plus + ct.minus == ct.total, o.str() + ": unsigned points");
      t.check(ct.frobenius_flips, o.str() + ": Phi keeps a sign");
    }
  t.time_limit(cache.seconds_by_t[6], 600, "t=6");
  t.summary = "t=2 points " + two.str() + ";" + big.str();
  t.summary.pop_back();
}

void bt_partition(TableCache& cache, Tally& t) {
  std::ostringstream o;
  auto run = [&](int tt, int k) {
    auto& ct = cache.get(3, tt, k);
    std::ostringstream tag;
    tag << "t=" << tt << " k=" << k;
    std::int64_t sum = 0;
    for (auto [ty, c] : ct.bt) sum += c;
    t.check(sum == ct.total, tag.str() + ": BT rows do not sum to the total");
    t.check(ct.partition && ct.buckets_match, tag.str() + ": independent strata disagree");
    t.check(ct.chains_ok, tag.str() + ": chain with a long step or odd type");
    o << " " << tag.str() << ": " << ct.total << " over " << ct.sublattices << " sublattices;";
  };
  for (int tt : {2, 4, 6})
    for (int k = 1; k <= 2; ++k) run(tt, k);
  run(4, 4);  // first case with a nonempty top stratum
  t.summary = o.str().substr(1);
  t.summary.pop_back();
}

void dl_equivalence(TableCache& cache, Tally& t) {
  std::int64_t points = 0;
  for (auto& [key, ct] : cache.tables) {
    std::ostringstream tag;
    tag << "p=" << std::get<0>(key) << " t=" << ct.t << " k=" << ct.k;
    t.check(ct.dl_agrees, tag.str() + ": criteria disagree");
    points += ct.total;
  }
  t.summary = std::to_string(points) + " points across " + std::to_string(cache.tables.size()) + " tables";
}

// ---------------------------------------------------------------------------
// 8

SpacePtr space_of(int p, const std::vector<std::vector<long>>& rows) {
  QMatrix g(rows.size(), rows.size(), mpq_class(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) g(i, j) = rows[i][j];
  return std::make_shared<QpQuadSpace>(QpQuadSpace::from_rational(p, g));
}

// Random g Z_p^n scaled into integrality.
ZpLattice random_integral(std::mt19937& rng, SpacePtr V) {
  int p = V->prime(), n = V->dim();
  std::uniform_int_distribution<int> d(-2 * p, 2 * p), ex(-3, 3);
  while (true) {
    QMatrix g(n, n, mpq_class(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        mpq_class s = d(rng);
        for (int e = ex(rng); e != 0; e += e < 0 ? 1 : -1) s = e < 0 ? mpq_class(s / p) : mpq_class(s * p);
        g(i, j) = s;
      }
    PMatrix gp = to_padic(p, g);
    if (determinant(gp).is_zero()) continue;
    ZpLattice L(V, gp);
    int v = min_valuation(L.gram());
    if (v < 0) L = L.scaled((-v + 1) / 2);
    return L;
  }
}

void appendix_lattices(const AcceptanceConfig& cfg, Tally& t) {
  std::mt19937 rng(cfg.seed);
  OracleOptions opts{cfg.budget, cfg.parallel};
  int spaces = 0;
  for (int p : {3, 5}) {
    long u = least_nonresidue(p);
    std::vector<std::pair<std::string, SpacePtr>> isotropic{{"hyperbolic plane", space_of(p, {{0, 1}, {1, 0}})}};
    for (int n = 3; n <= 5; ++n)
      for (auto sel : kSels) {
        auto v = standard_space(p, n, sel);
        std::string tag = "n=" + std::to_string(n) + " " + sel_name(sel);
        isotropic.emplace_back(tag, std::make_shared<QpQuadSpace>(v));
        isotropic.emplace_back(tag + " twisted", std::make_shared<QpQuadSpace>(flip_hasse(v)));
      }
    for (auto& [name, V] : isotropic) {
      std::string tag = "p=" + std::to_string(p) + " " + name + ": ";
      ++spaces;
      std::optional<ZpLattice> ref;
      for (int trial = 0; trial < 100; ++trial) {
        auto A = maximalize(random_integral(rng, V), opts);
        auto B = maximalize(random_integral(rng, V), opts);
        auto d = elementary_divisors(A, B, opts);
        t.check(d.rebuild_a(V) == A && d.rebuild_b(V) == B, tag + "reconstruction");
        t.check(d.rank() == V->invariants().witt_index, tag + "rank");
        if (!ref) ref = A;
        for (auto* M : {&A, &B})
          t.check(gram_divisors(*M) == gram_divisors(*ref) &&
                      QpQuadSpace(M->gram()).invariants() == QpQuadSpace(ref->gram()).invariants(),
                  tag + "maximal lattices with different Gram data");
      }
    }
    std::vector<SpacePtr> aniso{
        space_of(p, {{2, 0}, {0, -2 * u}}),
        space_of(p, {{2 * p, 0}, {0, -2 * u * p * p * p}}),
        space_of(p, {{2, 0, 0}, {0, -2 * u, 0}, {0, 0, 2 * p}}),
        space_of(p, {{2, 0, 0, 0}, {0, -2 * u, 0, 0}, {0, 0, -2 * p, 0}, {0, 0, 0, 2 * u * p}}),
    };
    for (auto& V : aniso) {
      std::string tag = "p=" + std::to_string(p) + " anisotropic n=" + std::to_string(V->dim()) + ": ";
      ++spaces;
      t.check(!is_isotropic(*V), tag + "space is isotropic");
      auto M = anisotropic_maximal(V);
      t.check(is_integral(M) && is_maximal(M, opts), tag + "closed form rejected by the oracle");
      for (int trial = 0; trial < 100; ++trial) {
        auto L = random_integral(rng, V);
        t.check(M.contains(L) && maximalize(L, opts) == M, tag + "second maximal lattice");
      }
    }
  }
  t.summary = std::to_string(spaces) + " spaces, 100 random pairs or lattices each";
}

// ---------------------------------------------------------------------------
// 9

void connectivity(const AcceptanceConfig& cfg, Tally& t) {
  std::mt19937 rng(cfg.seed);
  int configs = 0, longest = 0;
  for (int p : {3, 5})
    for (int n = 3; n <= 6; ++n)
      for (auto sel : kSels) {
        auto s = setup_for(cfg, p, n, sel);
        if (s.tmax.dim < 0 || s.tmax.t_max < 2) continue;
        ++configs;
        std::ostringstream o;
        o << "p=" << p << " n=" << n << " " << sel_name(sel) << ": ";
        std::uniform_int_distribution<int> steps(0, s.tmax.t_max / 2);
        for (int trial = 0; trial < 50; ++trial) {
          auto a = random_vertex_lattice(s, rng, steps(rng));
          auto b = random_vertex_lattice(s, rng, steps(rng));
          auto path = path_between(s, a, b);
          if (a == b) {
            t.check(path.empty(), o.str() + "nonempty path for equal ends");
            continue;
          }
          bool ok = path.size() >= 2 && path.front() == a && path.back() == b;
          for (std::size_t i = 0; ok && i + 1 < path.size(); ++i) ok = adjacent(path[i], path[i + 1]);
          for (auto& x : path) {
            auto replay = try_vertex(x.lattice());
            ok = ok && replay && *replay == x && replay->type() == x.type();
          }
          t.check(ok, o.str() + "path failed replay");
          longest = std::max(longest, static_cast<int>(path.size()));
        }
      }
  t.summary = std::to_string(configs) + " configurations x 50 pairs, longest path " + std::to_string(longest);
}

// ---------------------------------------------------------------------------
// 10

void defect_identity(const AcceptanceConfig&, Tally& t) {
  int cases = 0;
  for (int p : {3, 5, 7})
    for (int n = 3; n <= 8; ++n)
      for (auto sel : kSels) {
        auto v = standard_space(p, n, sel);
        auto inv = v.invariants();
        auto tm = t_max(inv, p);
        std::vector<QuadInvariants> twisted{flip_hasse(v).invariants()};
        // the fixed-point construction gives V' independently
        if (n <= 7 && p != 7)
          twisted.push_back(fixed_points(phi_from_b(CliffordAlgebra::standard(p, n, sel))).space.invariants());
        for (auto& vp : twisted) {
          ++cases;
          int def = chai_rapoport_defect(inv, vp);
          std::ostringstream o;
          o << "p=" << p << " n=" << n << " " << sel_name(sel) << ": defect " << def << ", t_max " << tm.t_max;
          // (n-2)/2 - def/2 = t_max/2 - 1, doubled
          t.check(n - 2 - def == tm.t_max - 2 && tm.dim == tm.t_max / 2 - 1, o.str());
        }
      }
  t.summary = std::to_string(cases) + " cases, n=3..8, p in {3,5,7}";
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  TableCache cache{cfg, {}, {}};
  struct Entry {
    int id;
    const char* title;
    std::function<void(Tally&)> run;
  };
  std::vector<Entry> entries{
      {1, "t_max by exhaustive region search", [&](Tally& t) { types_in_region(cfg, t); }},
      {2, "Hasse twist of the fixed points", [&](Tally& t) { hasse_twist(cfg, t); }},
      {3, "Clifford identities", [&](Tally& t) { clifford_identities(cfg, t); }},
      {4, "slopes on V and D", [&](Tally& t) { slopes(cfg, t); }},
      {5, "components of S_Lambda", [&](Tally& t) { lagrangian_structure(cache, t); }},
      {6, "BT partition", [&](Tally& t) { bt_partition(cache, t); }},
      {7, "DL criterion equivalence", [&](Tally& t) { dl_equivalence(cache, t); }},
      {8, "maximal lattices", [&](Tally& t) { appendix_lattices(cfg, t); }},
      {9, "connectivity", [&](Tally& t) { connectivity(cfg, t); }},
      {10, "dimension and defect", [&](Tally& t) { defect_identity(cfg, t); }},
  };
  std::vector<CriterionResult> out;
  for (auto& e : entries) {
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), e.id) == cfg.only.end()) continue;
    CriterionResult r;
    r.id = e.id;
    r.title = e.title;
    Tally t;
    auto t0 = Clock::now();
    try {
      e.run(t);
      if (t.failed) {
        r.outcome = Outcome::fail;
        std::ostringstream o;
        o << t.failed << " of " << t.checks << " checks failed: ";
        for (std::size_t i = 0; i < t.notes.size(); ++i) o << (i ? "; " : "") << t.notes[i];
        if (!t.summary.empty()) o << " | " << t.summary;
        r.detail = o.str();
      } else {
        r.detail = std::to_string(t.checks) + " checks; " + t.summary;
      }
    } catch (const TooLarge& ex) {
      r.outcome = Outcome::skipped;
      r.detail = std::string("budget exceeded: ") + ex.what();
    } catch (const std::exception& ex) {
      r.outcome = Outcome::fail;
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = since(t0);
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r, bool with_time) {
  std::ostringstream o;
  o << outcome_name(r.outcome) << " [" << r.id << "] " << r.title << ": " << r.detail;
  if (with_time) o << " (" << static_cast<long>(r.seconds * 10) / 10.0 << " s)";
  return o.str();
}

std::string acceptance_json(const AcceptanceConfig& cfg, const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json j;
  j["config"] = {{"budget", cfg.budget}, {"node_budget", cfg.node_budget}, {"seed", cfg.seed}};
  int counts[3] = {0, 0, 0};
  auto arr = nlohmann::ordered_json::array();
  for (auto& r : results) {
    ++counts[static_cast<int>(r.outcome)];
    arr.push_back({{"id", r.id}, {"title", r.title}, {"outcome", outcome_name(r.outcome)}, {"detail", r.detail}});
  }
  j["criteria"] = arr;
  j["passed"] = counts[0];
  j["failed"] = counts[1];
  j["skipped"] = counts[2];
  return j.dump(2);
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](auto& r) { return r.outcome == Outcome::pass; });
}

}  // namespace gspin
