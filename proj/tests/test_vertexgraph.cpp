#include <random>
#include <set>

#include "doctest.h"
#include "gspin/errors.hpp"
#include "gspin/vertexgraph.hpp"
#include "json.hpp"

using namespace gspin;

namespace {

const std::vector<DetSelector> kSels{DetSelector::plus, DetSelector::minus};

}  // namespace

TEST_CASE("t_max and the defect") {
  for (int p : {3, 5, 7}) {
    CHECK(t_max(standard_space(p, 3, DetSelector::plus).invariants(), p).t_max == 2);
    CHECK(t_max(standard_space(p, 3, DetSelector::minus).invariants(), p).dim == 0);
    CHECK(t_max(standard_space(p, 4, DetSelector::plus).invariants(), p).t_max == 2);
    CHECK(t_max(standard_space(p, 4, DetSelector::minus).invariants(), p).t_max == 4);
    CHECK(t_max(standard_space(p, 6, DetSelector::plus).invariants(), p).t_max == 4);
    CHECK(t_max(standard_space(p, 6, DetSelector::minus).invariants(), p).t_max == 6);
    for (int n = 3; n <= 7; ++n)
      for (auto sel : kSels) {
        auto v = standard_space(p, n, sel);
        auto vp = flip_hasse(v);
        int def = chai_rapoport_defect(v.invariants(), vp.invariants());
        int expected = n % 2 ? 1 : sel == DetSelector::plus ? 2 : 0;
        CHECK(def == expected);
        auto tm = t_max(v.invariants(), p);
        // (n - 2)/2 - def/2 = t_max/2 - 1, doubled
        CHECK(n - 2 - def == tm.t_max - 2);
        CHECK(tm.dim == tm.t_max / 2 - 1);
      }
  }
}

TEST_CASE("maximal vertex lattices") {
  for (int p : {3, 5})
    for (int n = 3; n <= 6; ++n)
      for (auto sel : kSels) {
        auto s = make_setup(p, n, sel);
        auto L = find_maximal_vertex(s);
        CHECK(L.type() == s.tmax.t_max);
        CHECK(maximal_vertex_over(s, L) == L);
        auto fr = omega_frame(L);
        CHECK(fr.dim == L.type());
        // Omega_0 admits no Lagrangian over F_p
        FiniteField F(p, 1);
        CHECK(isotropic_subspaces(F, fr.gram, L.type() / 2).empty());
      }
  auto q = make_setup(3, 4, DetSelector::minus);
  auto L = find_maximal_vertex(q);
  CHECK(L.type() == 4);
  // quaternionic: Omega_0 is the 4-dimensional non-split space
  auto fr = omega_frame(L);
  FiniteField F(3, 1);
  CHECK(isotropic_subspaces(F, fr.gram, 1).size() == 10);
}

TEST_CASE("fixed-point ambient gives the same combinatorics") {
  for (int n = 3; n <= 5; ++n) {
    auto a = make_setup(3, n, DetSelector::minus);
    auto b = make_setup(3, n, DetSelector::minus, AmbientSource::fixed_points);
    CHECK(isometric(*a.twisted, *b.twisted));
    CHECK(find_maximal_vertex(b).type() == a.tmax.t_max);
  }
}

TEST_CASE("vertex recognition rejects") {
  auto s = make_setup(3, 4, DetSelector::minus);
  auto L = find_maximal_vertex(s);
  std::string why;
  CHECK(!try_vertex(dual(L.lattice()), &why));
  CHECK(why == "dual not contained in the lattice");
  CHECK(!try_vertex(L.lattice().scaled(-1), &why));
  CHECK(why == "p times the lattice not contained in the dual");
  auto V = std::make_shared<QpQuadSpace>(s.v);
  CHECK(!try_vertex(ZpLattice::standard(V), &why));
  CHECK(why == "ambient Hasse invariant is not -1");
  CHECK_THROWS_AS(is_vertex(dual(L.lattice())), NotVertex);
}

TEST_CASE("neighbors") {
  auto s3 = make_setup(3, 3, DetSelector::plus);
  auto L3 = find_maximal_vertex(s3);
  CHECK(neighbors_down(L3).empty());
  CHECK(neighbors_up(s3, L3).empty());

  auto s = make_setup(3, 4, DetSelector::minus);
  auto L = find_maximal_vertex(s);
  auto down = neighbors_down(L);
  CHECK(down.size() == 10);
  for (auto& d : down) {
    CHECK(d.type() == 2);
    CHECK(L.lattice().contains(d.lattice()));
    CHECK(is_vertex(d.lattice()) == d);
    auto up = neighbors_up(s, d);
    CHECK(std::find(up.begin(), up.end(), L) != up.end());
    for (auto& u : up) {
      CHECK(u.type() == 4);
      auto back = neighbors_down(u);
      CHECK(std::find(back.begin(), back.end(), d) != back.end());
    }
  }
  CHECK(neighbors_up(s, L).empty());

  // n = 6 minus: types 2, 4, 6
  auto s6 = make_setup(3, 6, DetSelector::minus);
  auto L6 = find_maximal_vertex(s6);
  CHECK(L6.type() == 6);
  auto d6 = neighbors_down(L6);
  std::set<int> types;
  for (auto& d : d6) {
    types.insert(d.type());
    auto up = neighbors_up(s6, d);
    CHECK(std::find(up.begin(), up.end(), L6) != up.end());
    for (auto& u : up) CHECK(u.type() <= 6);
  }
  CHECK(types == std::set<int>{2, 4});
}

TEST_CASE("graph exploration") {
  auto s = make_setup(3, 4, DetSelector::minus);
  auto L = find_maximal_vertex(s);
  auto g0 = bfs_graph(s, L, 0);
  CHECK(g0.nodes.size() == 1);
  CHECK(g0.edges.empty());
  CHECK(g0.to_dot().rfind("digraph", 0) == 0);

  auto g = bfs_graph(s, L, 2);
  auto serial = s;
  serial.parallel = false;
  auto gs = bfs_graph(serial, L, 2);
  CHECK(g.to_json() == gs.to_json());
  std::set<int> types;
  for (auto& x : g.nodes) types.insert(x.type());
  CHECK(types == std::set<int>{2, 4});
  for (auto [a, b] : g.edges) {
    CHECK(g.nodes[a].type() < g.nodes[b].type());
    CHECK(g.nodes[b].lattice().contains(g.nodes[a].lattice()));
  }
  // edge set is exactly the inclusion pairs among the nodes
  std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = 0; j < g.nodes.size(); ++j)
      if (i != j)
        CHECK(edges.count({static_cast<int>(i), static_cast<int>(j)}) ==
              (g.nodes[j].lattice().contains(g.nodes[i].lattice()) ? 1u : 0u));
  // connected
  std::vector<int> comp(g.nodes.size(), -1);
  comp[0] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [a, b] : g.edges)
      if ((comp[a] < 0) != (comp[b] < 0)) {
        comp[a] = comp[b] = 0;
        changed = true;
      }
  }
  CHECK(std::count(comp.begin(), comp.end(), 0) == static_cast<long>(g.nodes.size()));
  // intersections that are vertex lattices are common lower neighbours
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      auto meet = try_vertex(intersection(g.nodes[i].lattice(), g.nodes[j].lattice()));
      if (!meet) continue;
      for (auto k : {i, j})
        if (!(*meet == g.nodes[k])) {
          auto d = neighbors_down(g.nodes[k]);
          CHECK(std::find(d.begin(), d.end(), *meet) != d.end());
        }
    }
  auto parsed = nlohmann::json::parse(g.to_json());
  CHECK(parsed["nodes"].size() == g.nodes.size());
  CHECK(parsed["edges"].size() == g.edges.size());

  auto small = s;
  small.node_budget = 3;
  CHECK_THROWS_AS(bfs_graph(small, L, 2), TooLarge);
}

TEST_CASE("paths between vertex lattices") {
  auto s = make_setup(3, 5, DetSelector::plus);
  auto A = find_maximal_vertex(s);
  CHECK(path_between(s, A, A).empty());
  // a second maximal lattice sharing a type t_max - 2 sublattice with A
  auto D = neighbors_down(A).front();
  VertexLattice B;
  for (auto& u : neighbors_up(s, D))
    if (!(u == A) && u.type() == s.tmax.t_max) B = u;
  auto path = path_between(s, A, B);
  REQUIRE(path.size() == 3);
  CHECK(path.front() == A);
  CHECK(path.back() == B);
  CHECK(path[1].type() == s.tmax.t_max - 2);

  std::mt19937 rng(11);
  for (int n : {4, 5, 6})
    for (auto sel : kSels) {
      auto st = make_setup(3, n, sel);
      if (st.tmax.t_max < 4) continue;
      for (int trial = 0; trial < 6; ++trial) {
        auto a = random_vertex_lattice(st, rng, trial % 3);
        auto b = random_vertex_lattice(st, rng, (trial + 1) % 3);
        auto pth = path_between(st, a, b);
        if (a == b) {
          CHECK(pth.empty());
          continue;
        }
        CHECK(pth.front() == a);
        CHECK(pth.back() == b);
        for (std::size_t i = 0; i + 1 < pth.size(); ++i) CHECK(adjacent(pth[i], pth[i + 1]));
        for (auto& x : pth) CHECK(is_vertex(x.lattice()) == x);
      }
    }
}

TEST_CASE("exhaustive region, small cases") {
  for (int p : {3, 5})
    for (auto sel : kSels) {
      auto s = make_setup(p, 3, sel);
      auto r = enumerate_region(s, true);
      auto rs = enumerate_region(s, false);
      CHECK(r.integral == rs.integral);
      CHECK(r.types == rs.types);
      CHECK(r.vertices == rs.vertices);
      for (auto [t, c] : r.types) {
        CHECK(t % 2 == 0);
        CHECK(t >= 2);
        CHECK(t <= s.tmax.t_max);
      }
      CHECK(r.types.count(s.tmax.t_max));
      CHECK(r.covered_in_region + r.covered_by_climb == static_cast<std::int64_t>(r.vertices.size()));
      std::set<std::string> keys;
      for (auto& v : r.vertices) keys.insert(v.key());
      CHECK(keys.size() == r.vertices.size());
    }
  auto s = make_setup(3, 4, DetSelector::minus);
  auto r = enumerate_region(s, true);
  CHECK(r.types.count(4));
  CHECK(r.types.count(2));
  CHECK(r.covered_in_region + r.covered_by_climb == static_cast<std::int64_t>(r.vertices.size()));
}

TEST_CASE("region agrees with graph exploration") {
  for (auto [n, sel] : std::vector<std::pair<int, DetSelector>>{{4, DetSelector::minus}, {5, DetSelector::plus}}) {
    auto s = make_setup(3, n, sel);
    auto L0 = find_maximal_vertex(s);
    auto r = enumerate_region(s, true, false);
    auto g = bfs_graph(s, L0, 6);
    ZpLattice lo = L0.lattice().scaled(1), hi = L0.lattice().scaled(-1);
    std::vector<VertexLattice> inside;
    for (auto& x : g.nodes)
      if (x.lattice().contains(lo) && hi.contains(x.lattice())) inside.push_back(x);
    std::sort(inside.begin(), inside.end());
    CHECK(inside == r.vertices);
  }
}
