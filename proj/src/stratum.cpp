#include "gspin/stratum.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gspin/errors.hpp"
#include "json.hpp"

namespace gspin {

namespace {

int fq_det(const FiniteField& F, FqMatrix m) {
  int n = static_cast<int>(m.size());
  int det = 1;
  for (int c = 0; c < n; ++c) {
    int r = c;
    while (r < n && m[r][c] == 0) ++r;
    if (r == n) return 0;
    if (r != c) {
      std::swap(m[r], m[c]);
      det = F.neg(det);
    }
    det = F.mul(det, m[c][c]);
    int inv = F.inv(m[c][c]);
    for (int i = c + 1; i < n; ++i) {
      if (!m[i][c]) continue;
      int f = F.mul(m[i][c], inv);
      for (int j = c; j < n; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[c][j]));
    }
  }
  return det;
}

std::vector<int> apply_frobenius(const FiniteField& F, std::vector<int> v) {
  for (auto& x : v) x = F.frobenius(x);
  return v;
}

std::vector<int> scaled(const FiniteField& F, std::vector<int> v, int s) {
  for (auto& x : v) x = F.mul(x, s);
  return v;
}

std::vector<int> axpy(const FiniteField& F, std::vector<int> y, int a, const std::vector<int>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = F.add(y[i], F.mul(a, x[i]));
  return y;
}

// d and the stable term of L + Phi L + ...; throws ChainOverflow on a
// chain longer than t/2.
std::pair<std::vector<int>, FqMatrix> chain_dims(const FqQuadSpace& W, const FqMatrix& L) {
  const FiniteField& F = *W.field;
  std::vector<int> dims{static_cast<int>(L.size())};
  FqMatrix sum = L, term = L;
  while (true) {
    term = fq_frobenius(F, term);
    FqMatrix next = fq_sum(F, sum, term);
    if (next.size() == sum.size()) break;
    sum = std::move(next);
    dims.push_back(static_cast<int>(sum.size()));
    if (static_cast<int>(dims.size()) - 1 > W.t / 2) throw ChainOverflow("Frobenius chain longer than t/2");
  }
  return {dims, sum};
}

}  // namespace

FqQuadSpace omega_from_vertex(const VertexLattice& L, int k) {
  FqQuadSpace W;
  W.lattice = L;
  W.frame = omega_frame(L);
  W.p = W.frame.p;
  W.t = W.frame.dim;
  W.k = k;
  W.gram = W.frame.gram;
  W.field = std::make_shared<FiniteField>(W.p, k);
  FiniteField Fp(W.p, 1);
  if (fq_rank(Fp, W.gram) != W.t) throw Degenerate("reduction of pQ on L / L^v is singular");
  if (!omega_is_nonsplit(W)) throw Degenerate("L / L^v admits a Lagrangian over F_p");
  return W;
}

bool omega_is_nonsplit(const FqQuadSpace& W) {
  FiniteField Fp(W.p, 1);
  int det = fq_det(Fp, W.gram);
  if ((W.t / 2) % 2) det = Fp.neg(det);
  return Fp.chi(det) == -1;
}

bool is_lagrangian(const FqQuadSpace& W, const FqMatrix& L) {
  const FiniteField& F = *W.field;
  if (static_cast<int>(L.size()) * 2 != W.t || fq_rank(F, L) * 2 != W.t) return false;
  for (auto& x : L)
    for (auto& y : L)
      if (fq_bilinear(F, W.gram, x, y)) return false;
  return true;
}

FqMatrix frobenius_subspace(const FqQuadSpace& W, const FqMatrix& L) { return fq_frobenius(*W.field, L); }

std::vector<FqMatrix> enumerate_lagrangians(const FqQuadSpace& W, std::int64_t budget, bool parallel) {
  return isotropic_subspaces(*W.field, W.gram, W.t / 2, budget, parallel);
}

std::int64_t count_lagrangians_recursive(const FiniteField& F, const FqMatrix& gram) {
  int n = static_cast<int>(gram.size());
  if (n == 0) return 1;
  if (n % 2) throw InputError("Lagrangians need even dimension");
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= F.q();
  std::int64_t iso = 0;
  std::vector<int> first;
  std::vector<int> v(n);
  for (std::int64_t idx = 1; idx < total; ++idx) {
    std::int64_t t = idx;
    for (auto& x : v) {
      x = static_cast<int>(t % F.q());
      t /= F.q();
    }
    if (fq_bilinear(F, gram, v, v)) continue;
    ++iso;
    if (first.empty()) first = v;
  }
  if (!iso) return 0;
  std::int64_t points = iso / (F.q() - 1);
  // l^perp / l
  FqMatrix perp = fq_orthogonal(F, gram, {first});
  FqMatrix kept{first};
  FqMatrix rest;
  for (auto& r : perp) {
    FqMatrix trial = kept;
    trial.push_back(r);
    if (fq_rank(F, trial) == static_cast<int>(trial.size())) {
      kept = trial;
      rest.push_back(r);
    }
  }
  FqMatrix sub(rest.size(), std::vector<int>(rest.size()));
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (std::size_t j = 0; j < rest.size(); ++j) sub[i][j] = fq_bilinear(F, gram, rest[i], rest[j]);
  std::int64_t lower = count_lagrangians_recursive(F, sub);
  std::int64_t per = 0, qm = 1;
  for (int i = 0; i < n / 2; ++i) {
    per += qm;
    qm *= F.q();
  }
  if ((points * lower) % per) throw Error("Lagrangian count is not an integer");
  return points * lower / per;
}

StandardFrame standard_frame(const FqQuadSpace& W) {
  if (W.k % 2) throw InputError("the standard frame lives over F_{p^2}; k must be even");
  FiniteField Fp(W.p, 1), F2(W.p, 2);
  int d = W.t / 2;
  std::vector<std::vector<int>> es, fs;
  FqMatrix comp;
  for (int i = 0; i < W.t; ++i) {
    std::vector<int> r(W.t, 0);
    r[i] = 1;
    comp.push_back(r);
  }
  for (int i = 0; i + 1 < d; ++i) {
    int m = static_cast<int>(comp.size());
    std::int64_t total = 1;
    for (int j = 0; j < m; ++j) total *= W.p;
    std::vector<int> x;
    for (std::int64_t idx = 1; idx < total && x.empty(); ++idx) {
      std::vector<int> v(W.t, 0);
      std::int64_t t = idx;
      for (int j = 0; j < m; ++j) {
        v = axpy(Fp, v, static_cast<int>(t % W.p), comp[j]);
        t /= W.p;
      }
      if (fq_bilinear(Fp, W.gram, v, v) == 0) x = v;
    }
    if (x.empty()) throw Degenerate("no isotropic vector where the Witt index requires one");
    std::vector<int> y;
    for (auto& c : comp)
      if (fq_bilinear(Fp, W.gram, x, c)) {
        y = scaled(Fp, c, Fp.inv(fq_bilinear(Fp, W.gram, x, c)));
        break;
      }
    int half = Fp.mul(fq_bilinear(Fp, W.gram, y, y), Fp.inv(2 % W.p));
    std::vector<int> f = axpy(Fp, y, Fp.neg(half), x);
    es.push_back(x);
    fs.push_back(f);
    FqMatrix planes = es;
    planes.insert(planes.end(), fs.begin(), fs.end());
    comp = fq_orthogonal(Fp, W.gram, planes);
  }
  if (comp.size() != 2) throw Degenerate("anisotropic kernel is not a plane");
  // isotropic line of the anisotropic plane over F_{p^2}
  const auto& a = comp[0];
  const auto& b = comp[1];
  int aa = fq_bilinear(F2, W.gram, a, a), ab = fq_bilinear(F2, W.gram, a, b), bb = fq_bilinear(F2, W.gram, b, b);
  int lambda = -1;
  for (int l = 0; l < F2.q() && lambda < 0; ++l) {
    int v = F2.add(aa, F2.add(F2.mul(F2.from_int(2), F2.mul(l, ab)), F2.mul(F2.mul(l, l), bb)));
    if (v == 0) lambda = l;
  }
  if (lambda < 0) throw Degenerate("anisotropic plane stays anisotropic over F_{p^2}");
  std::vector<int> x = axpy(F2, a, lambda, b);
  int s = fq_bilinear(F2, W.gram, x, apply_frobenius(F2, x));
  int mu = -1;
  for (int m = 1; m < F2.q() && mu < 0; ++m)
    if (F2.mul(F2.mul(m, F2.frobenius(m)), s) == 1) mu = m;
  std::vector<int> ed = scaled(F2, x, mu);
  std::vector<int> fd = apply_frobenius(F2, ed);
  es.push_back(ed);
  fs.push_back(fd);
  // embed F_{p^2} into F_{p^k}
  auto emb = field_embedding(F2, *W.field);
  StandardFrame fr;
  for (auto* src : {&es, &fs}) {
    FqMatrix out;
    for (auto& r : *src) {
      std::vector<int> v(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) v[i] = emb[r[i]];
      out.push_back(v);
    }
    (src == &es ? fr.e : fr.f) = out;
  }
  return fr;
}

int component_of(const FqQuadSpace& W, const StandardFrame& fr, const FqMatrix& L) {
  int d = W.t / 2;
  int meet = static_cast<int>(fq_intersection(*W.field, L, row_space(*W.field, fr.e), W.t).size());
  return (meet % 2) == (d % 2) ? 1 : -1;
}

ChainData lattice_chain(const FqQuadSpace& W, const FqMatrix& L) {
  ChainData c;
  auto [dims, stable] = chain_dims(W, L);
  c.dims = dims;
  c.d = static_cast<int>(dims.size()) - 1;
  c.stable = stable;
  for (auto& r : stable)
    for (int x : r)
      if (!W.field->in_prime_field(x)) throw Error("Phi-stable subspace is not defined over F_p");
  c.rational = stable;
  c.sublattice = is_vertex(W.frame.preimage(c.rational));
  return c;
}

bool dl_membership(const FqQuadSpace& W, const FqMatrix& L) {
  const FiniteField& F = *W.field;
  FqMatrix meet = L, term = L;
  for (int r = 1; r <= W.t / 2 && !meet.empty(); ++r) {
    term = fq_frobenius(F, term);
    meet = fq_intersection(F, meet, term, W.t);
  }
  return meet.empty();
}

FqMatrix rational_part(const FqQuadSpace& W, const FqMatrix& L) {
  const FiniteField& F = *W.field;
  FqMatrix meet = L, term = L;
  for (int r = 1; r < W.k; ++r) {
    term = fq_frobenius(F, term);
    meet = fq_intersection(F, meet, term, W.t);
  }
  return meet;
}

std::vector<SLambdaPoint> s_lambda_points(const FqQuadSpace& W, std::int64_t budget, bool parallel) {
  const FiniteField& F = *W.field;
  std::vector<SLambdaPoint> out;
  std::optional<StandardFrame> fr;
  if (W.k % 2 == 0) fr = standard_frame(W);
  for (auto& L : enumerate_lagrangians(W, budget, parallel)) {
    if (static_cast<int>(fq_sum(F, L, fq_frobenius(F, L)).size()) != W.t / 2 + 1) continue;
    SLambdaPoint pt;
    pt.L = L;
    if (fr) pt.sign = component_of(W, *fr, L);
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<SLambdaPoint> bt_stratum(const FqQuadSpace& W, std::int64_t budget, bool parallel) {
  std::vector<SLambdaPoint> out;
  for (auto& pt : s_lambda_points(W, budget, parallel))
    if (static_cast<int>(chain_dims(W, pt.L).second.size()) == W.t) out.push_back(pt);
  return out;
}

FqMatrix lift_point(const FqQuadSpace& top, const FqQuadSpace& sub, const FqMatrix& L) {
  const FiniteField& F = *top.field;
  std::vector<std::vector<int>> images;
  for (int j = 0; j < sub.t; ++j) images.push_back(top.frame.reduce(sub.frame.lifts.column(j)));
  FqMatrix rows;
  for (auto& r : L) {
    std::vector<int> v(top.t, 0);
    for (int j = 0; j < sub.t; ++j)
      if (r[j]) v = axpy(F, v, r[j], images[j]);
    rows.push_back(v);
  }
  ZpLattice d = dual(sub.lattice.lattice());
  for (std::size_t j = 0; j < d.basis().cols(); ++j) rows.push_back(top.frame.reduce(d.basis().column(j)));
  return row_space(F, rows);
}

CountTable stratum_count(const VertexLattice& L, int k, std::int64_t budget, bool parallel) {
  CountTable ct;
  FqQuadSpace W = omega_from_vertex(L, k);
  const FiniteField& F = *W.field;
  ct.t = W.t;
  ct.p = W.p;
  ct.k = k;
  auto pts = s_lambda_points(W, budget, parallel);
  ct.total = static_cast<std::int64_t>(pts.size());
  std::map<std::string, int> sign_of;
  for (auto& pt : pts) {
    if (pt.sign > 0) ct.plus++;
    if (pt.sign < 0) ct.minus++;
    sign_of[fq_key(pt.L)] = pt.sign;
  }
  ct.frobenius_flips = true;
  for (auto& pt : pts) {
    auto it = sign_of.find(fq_key(frobenius_subspace(W, pt.L)));
    if (it == sign_of.end() || (k % 2 == 0 && it->second != -pt.sign)) ct.frobenius_flips = false;
  }

  // bucket by the chain lattice
  std::map<std::string, std::set<std::string>> buckets;
  std::map<std::string, int> bucket_type;
  ct.chains_ok = ct.dl_agrees = true;
  ZpLattice Lv = dual(L.lattice());
  std::map<std::string, FqMatrix> perp_cache;
  for (auto& pt : pts) {
    ChainData c = lattice_chain(W, pt.L);
    for (std::size_t r = 1; r < c.dims.size(); ++r)
      if (c.dims[r] != c.dims[r - 1] + 1) ct.chains_ok = false;
    const VertexLattice& sub = c.sublattice;
    if (sub.type() != 2 * c.d || !L.lattice().contains(sub.lattice()) || !sub.lattice().contains(Lv))
      ct.chains_ok = false;
    // Lambda(L)^v / L^v consists of the F_p-rational vectors of L
    FqMatrix perp = fq_orthogonal(F, W.gram, c.rational);
    if (fq_key(perp) != fq_key(rational_part(W, pt.L))) ct.chains_ok = false;
    if (dl_membership(W, pt.L) != (c.d == W.t / 2)) ct.dl_agrees = false;
    buckets[sub.key()].insert(fq_key(pt.L));
    bucket_type[sub.key()] = sub.type();
    ct.bt[sub.type()]++;
  }

  // independent BT strata of every vertex sublattice
  std::vector<VertexLattice> subs = neighbors_down(L);
  subs.push_back(L);
  ct.sublattices = static_cast<std::int64_t>(subs.size());
  std::int64_t sum = 0;
  ct.buckets_match = true;
  for (auto& s : subs) {
    FqQuadSpace Ws = omega_from_vertex(s, k);
    auto bt = bt_stratum(Ws, budget, parallel);
    sum += static_cast<std::int64_t>(bt.size());
    std::set<std::string> lifted;
    for (auto& pt : bt) lifted.insert(fq_key(lift_point(W, Ws, pt.L)));
    auto it = buckets.find(s.key());
    std::set<std::string> expected = it == buckets.end() ? std::set<std::string>{} : it->second;
    if (lifted != expected) ct.buckets_match = false;
  }
  for (auto& [key, type] : bucket_type)
    if (std::none_of(subs.begin(), subs.end(), [&](const VertexLattice& s) { return s.key() == key; }))
      ct.buckets_match = false;
  ct.partition = sum == ct.total;
  return ct;
}

std::string CountTable::to_json() const {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["p"] = p;
  j["k"] = k;
  j["total"] = total;
  j["plus"] = plus;
  j["minus"] = minus;
  j["bt"] = nlohmann::json::array();
  for (auto [type, count] : bt) j["bt"].push_back({{"subvertex_type", type}, {"count", count}});
  return j.dump();
}

std::string CountTable::to_csv() const {
  std::ostringstream os;
  os << "t,p,k,total,plus,minus,subvertex_type,count\n";
  if (bt.empty()) os << t << ',' << p << ',' << k << ',' << total << ',' << plus << ',' << minus << ",,0\n";
  for (auto [type, count] : bt)
    os << t << ',' << p << ',' << k << ',' << total << ',' << plus << ',' << minus << ',' << type << ',' << count
       << '\n';
  return os.str();
}

}  // namespace gspin
