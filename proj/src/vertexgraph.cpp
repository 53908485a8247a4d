#include "gspin/vertexgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gspin/clifford.hpp"
#include "gspin/errors.hpp"
#include "gspin/isocrystal.hpp"
#include "json.hpp"

namespace gspin {

TmaxInfo t_max(const QuadInvariants& inv, int p) {
  int n = inv.n;
  int t = n - 1;
  if (n % 2 == 0) {
    SquareClass sign = (n / 2) % 2 ? SquareClass::of_minus_one(p) : SquareClass{};
    t = inv.det == sign ? n - 2 : n;
  }
  return {t, t / 2 - 1};
}

int chai_rapoport_defect(const QuadInvariants& v, const QuadInvariants& vprime) {
  return v.witt_index - vprime.witt_index;
}

VertexSetup make_setup(int p, int n, DetSelector sel, AmbientSource src, int precision) {
  VertexSetup s;
  s.p = p;
  s.n = n;
  s.sel = sel;
  s.v = standard_space(p, n, sel, precision);
  if (src == AmbientSource::flip_hasse) {
    s.twisted = std::make_shared<QpQuadSpace>(flip_hasse(s.v));
  } else {
    auto alg = CliffordAlgebra::standard(p, n, sel);
    s.twisted = std::make_shared<QpQuadSpace>(fixed_points(phi_from_b(alg, precision)).space);
  }
  s.scaled = std::make_shared<QpQuadSpace>(s.twisted->rescaled(PadicElement::from_int(p, p)));
  s.tmax = t_max(s.v.invariants(), p);
  return s;
}

std::optional<VertexLattice> try_vertex(const ZpLattice& L, std::string* reason) {
  auto fail = [&](const char* why) -> std::optional<VertexLattice> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  if (L.ambient().invariants().hasse != -1) return fail("ambient Hasse invariant is not -1");
  ZpLattice d = dual(L);
  if (!L.contains(d)) return fail("dual not contained in the lattice");
  if (!d.contains(L.scaled(1))) return fail("p times the lattice not contained in the dual");
  int t = quotient_length(d, L);
  if (t % 2) return fail("odd type");
  if (t == 0) return fail("self-dual lattice in the twisted space");
  return VertexLattice(L, t);
}

VertexLattice is_vertex(const ZpLattice& L) {
  std::string why;
  auto v = try_vertex(L, &why);
  if (!v) throw NotVertex("not a vertex lattice: " + why);
  return *v;
}

// ---------------------------------------------------------------------------
// quotient frames

QuotientFrame quotient_frame(const ZpLattice& big, const ZpLattice& small, int scale) {
  QuotientFrame fr;
  int p = big.prime(), n = big.dim();
  fr.p = p;
  fr.big = big;
  fr.small = small;
  FiniteField F(p, 1);
  PMatrix c = big.coordinates(small.basis());
  FqMatrix rows(n, std::vector<int>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rows[j][i] = c(i, j).residue();
  fr.pivots_ = rref(F, rows);
  rows.resize(fr.pivots_.size());
  fr.image_rows_ = rows;
  for (int j = 0; j < n; ++j)
    if (std::find(fr.pivots_.begin(), fr.pivots_.end(), j) == fr.pivots_.end()) fr.complement_.push_back(j);
  fr.dim = static_cast<int>(fr.complement_.size());
  fr.lifts = pmatrix_zero(p, n, fr.dim);
  for (int a = 0; a < fr.dim; ++a)
    for (int i = 0; i < n; ++i) fr.lifts(i, a) = big.basis()(i, fr.complement_[a]);
  fr.gram.assign(fr.dim, std::vector<int>(fr.dim));
  for (int a = 0; a < fr.dim; ++a)
    for (int b = 0; b < fr.dim; ++b)
      fr.gram[a][b] = big.gram()(fr.complement_[a], fr.complement_[b]).shift(scale).residue();
  return fr;
}

std::vector<int> QuotientFrame::reduce(const PVector& x) const {
  PMatrix c = big.coordinates(columns({x}, p, x.size()));
  int n = static_cast<int>(x.size());
  std::vector<int> cv(n);
  for (int i = 0; i < n; ++i) cv[i] = c(i, 0).residue();
  FiniteField F(p, 1);
  std::vector<int> out(dim);
  for (int a = 0; a < dim; ++a) {
    int j = complement_[a];
    int v = cv[j];
    for (std::size_t r = 0; r < pivots_.size(); ++r) v = F.sub(v, F.mul(cv[pivots_[r]], image_rows_[r][j]));
    out[a] = v;
  }
  return out;
}

namespace {

PVector combine(const PMatrix& lifts, const std::vector<int>& row, bool divide) {
  int p = lifts(0, 0).prime();
  PVector v(lifts.rows(), PadicElement::zero(p));
  for (std::size_t a = 0; a < lifts.cols(); ++a) {
    if (!row[a]) continue;
    PadicElement s = PadicElement::from_int(p, row[a]);
    for (std::size_t i = 0; i < lifts.rows(); ++i) v[i] += s * lifts(i, a);
  }
  if (divide)
    for (auto& x : v) x = x.shift(-1);
  return v;
}

ZpLattice extend_lattice(const ZpLattice& base, const std::vector<PVector>& extra) {
  if (extra.empty()) return base;
  return ZpLattice(base.ambient_ptr(), hconcat(base.basis(), columns(extra, base.prime(), base.dim())));
}

}  // namespace

ZpLattice QuotientFrame::preimage(const FqMatrix& rows, bool divide) const {
  std::vector<PVector> extra;
  for (auto& r : rows) extra.push_back(combine(lifts, r, divide));
  return extend_lattice(small, extra);
}

QuotientFrame omega_frame(const VertexLattice& L) { return quotient_frame(L.lattice(), dual(L.lattice()), 1); }

// ---------------------------------------------------------------------------
// seeds and neighbors

namespace {

ZpLattice pq_maximal(const VertexSetup& s, const ZpLattice& L) {
  ZpLattice m = maximalize(L.with_ambient(s.scaled), s.oracle);
  return m.with_ambient(s.twisted);
}

}  // namespace

VertexLattice find_maximal_vertex(const VertexSetup& s) {
  ZpLattice L = ZpLattice::standard(s.scaled);
  while (!is_integral(L)) L = L.scaled(1);
  return is_vertex(pq_maximal(s, L));
}

VertexLattice maximal_vertex_over(const VertexSetup& s, const VertexLattice& L) {
  return is_vertex(pq_maximal(s, L.lattice()));
}

std::vector<VertexLattice> neighbors_down(const VertexLattice& L) {
  std::vector<VertexLattice> out;
  int t = L.type();
  if (t <= 2) return out;
  QuotientFrame fr = omega_frame(L);
  FiniteField F(fr.p, 1);
  // U with U^perp in U is the orthogonal of a totally isotropic W
  for (int d = 1; d < t / 2; ++d)
    for (auto& w : isotropic_subspaces(F, fr.gram, d, 50'000'000, false))
      out.push_back(is_vertex(fr.preimage(fq_orthogonal(F, fr.gram, w))));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexLattice> neighbors_up(const VertexSetup&, const VertexLattice& L) {
  // L'' in p^-1 L^v since p L'' in L''^v in L^v; L''/L is then a totally
  // isotropic subspace of L^v / pL for [ , ] mod p.
  std::vector<VertexLattice> out;
  QuotientFrame fr = quotient_frame(dual(L.lattice()), L.lattice().scaled(1), 0);
  FiniteField F(fr.p, 1);
  for (int d = 1; 2 * d <= fr.dim; ++d)
    for (auto& w : isotropic_subspaces(F, fr.gram, d, 50'000'000, false)) {
      std::vector<PVector> extra;
      for (auto& r : w) extra.push_back(combine(fr.lifts, r, true));
      if (auto v = try_vertex(extend_lattice(L.lattice(), extra))) out.push_back(*v);
    }
  std::sort(out.begin(), out.end());
  return out;
}

bool adjacent(const VertexLattice& a, const VertexLattice& b) {
  if (a == b) return false;
  return a.lattice().contains(b.lattice()) || b.lattice().contains(a.lattice());
}

// ---------------------------------------------------------------------------
// graph

VertexGraph bfs_graph(const VertexSetup& s, const VertexLattice& seed, int depth) {
  std::map<std::string, std::pair<VertexLattice, int>> seen;
  std::map<std::string, std::vector<VertexLattice>> down;
  seen.emplace(seed.key(), std::make_pair(seed, 0));
  std::vector<VertexLattice> frontier{seed};
  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<std::vector<VertexLattice>> downs(frontier.size()), ups(frontier.size());
    int m = static_cast<int>(frontier.size());
#pragma omp parallel for schedule(dynamic) if (s.parallel)
    for (int i = 0; i < m; ++i) {
      downs[i] = neighbors_down(frontier[i]);
      ups[i] = neighbors_up(s, frontier[i]);
    }
    std::vector<VertexLattice> next;
    for (int i = 0; i < m; ++i) {
      down[frontier[i].key()] = downs[i];
      for (auto* list : {&downs[i], &ups[i]})
        for (auto& x : *list)
          if (seen.emplace(x.key(), std::make_pair(x, level + 1)).second) {
            next.push_back(x);
            if (static_cast<std::int64_t>(seen.size()) > s.node_budget)
              throw TooLarge("vertex graph exceeds its node budget");
          }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  std::vector<VertexLattice> rest;
  for (auto& [k, v] : seen)
    if (!down.count(k)) rest.push_back(v.first);
  std::vector<std::vector<VertexLattice>> rest_down(rest.size());
  int m = static_cast<int>(rest.size());
#pragma omp parallel for schedule(dynamic) if (s.parallel)
  for (int i = 0; i < m; ++i) rest_down[i] = neighbors_down(rest[i]);
  for (int i = 0; i < m; ++i) down[rest[i].key()] = rest_down[i];

  VertexGraph g;
  for (auto& [k, v] : seen) g.nodes.push_back(v.first);
  std::sort(g.nodes.begin(), g.nodes.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    index[g.nodes[i].key()] = static_cast<int>(i);
    g.depth.push_back(seen.at(g.nodes[i].key()).second);
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (auto& x : down.at(g.nodes[i].key())) {
      auto it = index.find(x.key());
      if (it != index.end()) g.edges.emplace_back(it->second, static_cast<int>(i));
    }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string VertexGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph vertex_lattices {\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    os << "  n" << i << " [label=\"t=" << nodes[i].type() << "\"];\n";
  for (auto [a, b] : edges)
    os << "  n" << a << " -> n" << b << " [label=\"" << nodes[b].type() - nodes[a].type() << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string VertexGraph::to_json() const {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nlohmann::ordered_json node;
    node["id"] = i;
    node["type"] = nodes[i].type();
    const PMatrix& b = nodes[i].lattice().basis();
    auto rows = nlohmann::json::array();
    for (std::size_t r = 0; r < b.rows(); ++r) {
      auto row = nlohmann::json::array();
      for (std::size_t c = 0; c < b.cols(); ++c) row.push_back(b(r, c).to_string());
      rows.push_back(row);
    }
    node["basis"] = rows;
    node["depth"] = depth[i];
    j["nodes"].push_back(node);
  }
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : edges) j["edges"].push_back({a, b});
  return j.dump();
}

// ---------------------------------------------------------------------------
// paths

namespace {

// span(p^lo_i e_i, p^hi_i f_i) + m0
ZpLattice plane_lattice(const VertexSetup& s, const MaximalDecomposition& d, const std::vector<int>& lo,
                        const std::vector<int>& hi) {
  std::vector<PVector> cols;
  for (int i = 0; i < d.rank(); ++i) {
    PVector e = d.e[i], f = d.f[i];
    for (auto& x : e) x = x.shift(lo[i]);
    for (auto& x : f) x = x.shift(hi[i]);
    cols.push_back(e);
    cols.push_back(f);
  }
  for (std::size_t j = 0; j < d.m0.cols(); ++j) cols.push_back(d.m0.column(j));
  return ZpLattice(s.twisted, columns(cols, s.p, s.n));
}

}  // namespace

std::vector<VertexLattice> path_between(const VertexSetup& s, const VertexLattice& a,
                                        const VertexLattice& b) {
  if (a == b) return {};
  VertexLattice A = maximal_vertex_over(s, a), B = maximal_vertex_over(s, b);
  MaximalDecomposition d =
      elementary_divisors(A.lattice().with_ambient(s.scaled), B.lattice().with_ambient(s.scaled), s.oracle);
  std::vector<VertexLattice> path{a, A};
  int r = d.rank();
  std::vector<int> c(r, 0);
  auto push = [&](const VertexLattice& v) {
    if (!(v == path.back())) path.push_back(v);
  };
  push(is_vertex(plane_lattice(s, d, c, std::vector<int>(r, 0))));
  for (int i = 0; i < r; ++i)
    while (c[i] < d.beta[i]) {
      std::vector<int> lo = c, hi(r);
      for (int j = 0; j < r; ++j) hi[j] = -c[j];
      lo[i] += 1;  // intersection of two neighbouring maximal lattices
      push(is_vertex(plane_lattice(s, d, lo, hi)));
      c[i] += 1;
      hi[i] = -c[i];
      push(is_vertex(plane_lattice(s, d, lo, hi)));
    }
  if (!(path.back() == B)) throw Error("path construction did not reach the second maximal lattice");
  push(b);
  // a could equal A and b could equal B; drop repeats at the ends
  std::vector<VertexLattice> out;
  for (auto& v : path)
    if (out.empty() || !(out.back() == v)) out.push_back(v);
  return out;
}

VertexLattice random_vertex_lattice(const VertexSetup& s, std::mt19937& rng, int down_steps) {
  std::uniform_int_distribution<int> entry(-s.p * s.p, s.p * s.p), expo(-2, 2);
  ZpLattice L;
  while (true) {
    PMatrix g = pmatrix_zero(s.p, s.n, s.n);
    for (int j = 0; j < s.n; ++j) {
      int e = expo(rng);
      for (int i = 0; i < s.n; ++i) g(i, j) = PadicElement::from_int(s.p, entry(rng)).shift(e);
    }
    try {
      L = ZpLattice(s.scaled, g);
      break;
    } catch (const Degenerate&) {
    }
  }
  while (!is_integral(L)) L = L.scaled(1);
  VertexLattice v = is_vertex(pq_maximal(s, L));
  for (int i = 0; i < down_steps; ++i) {
    auto nd = neighbors_down(v);
    if (nd.empty()) break;
    v = nd[std::uniform_int_distribution<std::size_t>(0, nd.size() - 1)(rng)];
  }
  return v;
}

// ---------------------------------------------------------------------------
// exhaustive region between p L0 and p^-1 L0

namespace {

// Lattice S with p^2 Z^n in S in Z^n, coordinates y = p x in the basis of
// L0. Canonical triangular basis over Z/p^2: column i has pivot p^v[i] in
// row i, zeros below it, entries above reduced modulo the pivots there.
struct IntLattice {
  std::vector<int> v;
  std::vector<std::vector<int>> cols;
  std::vector<int> key() const {
    std::vector<int> k = v;
    for (auto& c : cols) k.insert(k.end(), c.begin(), c.end());
    return k;
  }
};

struct RegionMath {
  int p, n, m;  // m = p^2
  std::vector<std::vector<int>> H;  // p * Gram(L0) mod p^2

  int val(int x) const {
    x %= m;
    if (x == 0) return 2;
    return x % p ? 0 : 1;
  }
  int inv_mod(int u) const {
    for (int x = 1; x < m; ++x)
      if (u * x % m == 1) return x;
    throw Degenerate("no inverse mod p^2");
  }
  int pw(int v) const { return v == 0 ? 1 : v == 1 ? p : m; }

  IntLattice hnf(std::vector<std::vector<int>> active) const {
    IntLattice out;
    out.v.assign(n, 2);
    out.cols.assign(n, std::vector<int>(n, 0));
    for (int i = n - 1; i >= 0; --i) {
      int best = -1, bv = 2;
      for (std::size_t a = 0; a < active.size(); ++a) {
        int vv = val(active[a][i]);
        if (vv < bv) {
          bv = vv;
          best = static_cast<int>(a);
        }
      }
      if (best < 0) continue;
      std::vector<int> g = active[best];
      active.erase(active.begin() + best);
      int w = g[i] / pw(bv);
      int winv = inv_mod(w % m);
      for (auto& x : g) x = x * winv % m;
      if (bv > 0) {
        std::vector<int> extra(n);
        for (int r = 0; r < n; ++r) extra[r] = g[r] * pw(2 - bv) % m;
        active.push_back(extra);
      }
      for (auto& h : active) {
        if (h[i] == 0) continue;
        int a = h[i] / pw(bv);
        for (int r = 0; r < n; ++r) h[r] = ((h[r] - a * g[r]) % m + m) % m;
      }
      out.v[i] = bv;
      out.cols[i] = g;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i - 1; j >= 0; --j) {
        if (out.v[j] == 2) continue;
        int a = out.cols[i][j] / pw(out.v[j]);
        if (!a) continue;
        for (int r = 0; r < n; ++r) out.cols[i][r] = ((out.cols[i][r] - a * out.cols[j][r]) % m + m) % m;
      }
    return out;
  }

  bool contains(const IntLattice& S, std::vector<int> y) const {
    for (int i = n - 1; i >= 0; --i) {
      y[i] %= m;
      if (y[i] == 0) continue;
      if (S.v[i] == 2 || val(y[i]) < S.v[i]) return false;
      int a = y[i] / pw(S.v[i]);
      for (int r = 0; r < n; ++r) y[r] = ((y[r] - a * S.cols[i][r]) % m + m) % m;
    }
    return true;
  }

  std::vector<std::vector<int>> generators(const IntLattice& S) const {
    std::vector<std::vector<int>> g;
    for (int i = 0; i < n; ++i)
      if (S.v[i] < 2) g.push_back(S.cols[i]);
    return g;
  }

  int form(const std::vector<int>& x, const std::vector<int>& y) const {
    long long s = 0;
    for (int i = 0; i < n; ++i) {
      if (!x[i]) continue;
      long long r = 0;
      for (int j = 0; j < n; ++j) r += static_cast<long long>(H[i][j]) * y[j];
      s += x[i] * (r % m);
    }
    return static_cast<int>(s % m);
  }

  // Integral index-p enlargements of S.
  std::vector<IntLattice> children(const IntLattice& S) const {
    FiniteField F(p, 1);
    // S' = {y : p y in S} is spanned by S, p Z^n and T k / p for k in ker(T mod p)
    FqMatrix tm;  // rows i: column i of T mod p
    for (int i = 0; i < n; ++i) {
      std::vector<int> r(n);
      for (int a = 0; a < n; ++a) r[a] = S.v[i] == 2 ? 0 : S.cols[i][a] % p;
      tm.push_back(r);
    }
    FqMatrix tt(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i) tt[a][i] = tm[i][a];
    std::vector<std::vector<int>> cand;
    for (auto& k : fq_kernel(F, tt, n)) {
      std::vector<long long> acc(n, 0);
      for (int i = 0; i < n; ++i)
        if (k[i] && S.v[i] < 2)
          for (int r = 0; r < n; ++r) acc[r] += static_cast<long long>(k[i]) * S.cols[i][r];
      std::vector<int> y(n);
      for (int r = 0; r < n; ++r) y[r] = static_cast<int>((acc[r] / p) % m);
      cand.push_back(y);
    }
    for (int i = 0; i < n; ++i) {
      std::vector<int> y(n, 0);
      y[i] = p;
      cand.push_back(y);
    }
    IntLattice cur = S;
    std::vector<std::vector<int>> basis;
    for (auto& y : cand) {
      if (contains(cur, y)) continue;
      basis.push_back(y);
      auto g = generators(cur);
      g.push_back(y);
      cur = hnf(g);
    }
    std::vector<IntLattice> out;
    auto gens = generators(S);
    int d = static_cast<int>(basis.size());
    std::int64_t count = projective_count(p, d);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      auto a = projective_point(p, d, idx);
      std::vector<int> y(n, 0);
      for (int k = 0; k < d; ++k)
        if (a[k])
          for (int r = 0; r < n; ++r) y[r] = (y[r] + a[k] * basis[k][r]) % m;
      if (form(y, y)) continue;
      bool ok = true;
      for (auto& g : gens)
        if (form(y, g)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      auto g = gens;
      g.push_back(y);
      out.push_back(hnf(g));
    }
    return out;
  }
};

}  // namespace

RegionReport enumerate_region(const VertexSetup& s, bool parallel, bool check_cover) {
  VertexLattice L0 = find_maximal_vertex(s);
  const ZpLattice& base = L0.lattice();
  RegionMath rm{s.p, s.n, s.p * s.p, {}};
  rm.H.assign(s.n, std::vector<int>(s.n));
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) rm.H[i][j] = static_cast<int>(base.gram()(i, j).shift(1).residue_mod(2));

  std::map<std::vector<int>, IntLattice> all;
  IntLattice start = rm.hnf({});
  all.emplace(start.key(), start);
  std::vector<IntLattice> level{start};
  while (!level.empty()) {
    std::vector<std::vector<IntLattice>> kids(level.size());
    int m = static_cast<int>(level.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < m; ++i) kids[i] = rm.children(level[i]);
    std::map<std::vector<int>, IntLattice> next;
    for (auto& ks : kids)
      for (auto& k : ks) next.emplace(k.key(), k);
    level.clear();
    for (auto& [key, lat] : next) {
      all.emplace(key, lat);
      level.push_back(lat);
    }
    if (static_cast<std::int64_t>(all.size()) > s.oracle.budget)
      throw TooLarge("region enumeration exceeds its budget");
  }

  RegionReport rep;
  rep.integral = static_cast<std::int64_t>(all.size());
  std::vector<IntLattice> nodes;
  for (auto& [k, v] : all) nodes.push_back(v);
  int total = static_cast<int>(nodes.size());
  std::vector<std::optional<VertexLattice>> vert(total);
  PMatrix b0 = base.basis();
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < total; ++i) {
    std::vector<PVector> cols;
    for (int j = 0; j < s.n; ++j) {
      PVector x(s.n, PadicElement::zero(s.p));
      for (int r = 0; r < s.n; ++r) x[r] = b0(r, j).shift(1);
      cols.push_back(x);
    }
    for (auto& g : rm.generators(nodes[i])) {
      PVector x(s.n, PadicElement::zero(s.p));
      for (int j = 0; j < s.n; ++j) {
        if (!g[j]) continue;
        PadicElement c = PadicElement::from_int(s.p, g[j]).shift(-1);
        for (int r = 0; r < s.n; ++r) x[r] += c * b0(r, j);
      }
      cols.push_back(x);
    }
    vert[i] = try_vertex(ZpLattice(s.twisted, columns(cols, s.p, s.n)));
  }
  std::vector<int> top;
  for (int i = 0; i < total; ++i)
    if (vert[i]) {
      rep.types[vert[i]->type()]++;
      rep.vertices.push_back(*vert[i]);
      if (vert[i]->type() == s.tmax.t_max) top.push_back(i);
    }
  if (check_cover) {
    for (int i = 0; i < total; ++i) {
      if (!vert[i]) continue;
      bool found = false;
      for (int j : top) {
        bool inside = true;
        for (auto& g : rm.generators(nodes[i]))
          if (!rm.contains(nodes[j], g)) {
            inside = false;
            break;
          }
        if (inside) {
          found = true;
          break;
        }
      }
      if (found) {
        rep.covered_in_region++;
      } else {
        VertexLattice up = maximal_vertex_over(s, *vert[i]);
        if (up.type() == s.tmax.t_max && up.lattice().contains(vert[i]->lattice())) rep.covered_by_climb++;
      }
    }
  }
  std::sort(rep.vertices.begin(), rep.vertices.end());
  return rep;
}

}  // namespace gspin
