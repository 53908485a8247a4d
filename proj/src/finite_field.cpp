#include "gspin/finite_field.hpp"

#include <algorithm>
#include <sstream>

#include "gspin/errors.hpp"
#include "gspin/padic.hpp"

namespace gspin {

namespace {

using Poly = std::vector<int>;  // constant term first

Poly poly_mod(Poly a, const Poly& g, int p) {
  int dg = static_cast<int>(g.size()) - 1;
  for (int d = static_cast<int>(a.size()) - 1; d >= dg; --d) {
    int c = a[d] % p;
    if (!c) continue;
    for (int i = 0; i <= dg; ++i) a[d - dg + i] = ((a[d - dg + i] - c * g[i]) % p + p) % p;
  }
  a.resize(std::min<std::size_t>(a.size(), dg));
  return a;
}

bool divides(const Poly& f, const Poly& g, int p) {
  Poly r = poly_mod(g, f, p);
  for (int c : r)
    if (c % p) return false;
  return true;
}

bool irreducible(const Poly& g, int p) {
  int k = static_cast<int>(g.size()) - 1;
  for (int d = 1; 2 * d <= k; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long idx = 0; idx < count; ++idx) {
      Poly f(d + 1, 0);
      long long t = idx;
      for (int i = 0; i < d; ++i) {
        f[i] = static_cast<int>(t % p);
        t /= p;
      }
      f[d] = 1;
      if (divides(f, g, p)) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<int> least_irreducible(int p, int k) {
  if (k == 1) return {0, 1};
  long long count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  // idx read big-endian over (c_{k-1}, ..., c_0)
  for (long long idx = 0; idx < count; ++idx) {
    Poly g(k + 1, 0);
    long long t = idx;
    for (int i = 0; i < k; ++i) {
      g[i] = static_cast<int>(t % p);
      t /= p;
    }
    g[k] = 1;
    if (irreducible(g, p)) return g;
  }
  throw Error("no irreducible polynomial found");
}

FiniteField::FiniteField(int p, int k) : p_(p), k_(k), q_(1) {
  if (!is_odd_prime(p)) throw InputError("p must be an odd prime");
  if (k < 1) throw InputError("extension degree must be positive");
  for (int i = 0; i < k; ++i) {
    q_ *= p;
    if (q_ > 2048) throw TooLarge("finite field too large for tables: p^k > 2048");
  }
  modulus_ = least_irreducible(p, k);
  std::vector<Poly> elems(q_);
  for (int a = 0; a < q_; ++a) {
    elems[a].assign(k, 0);
    int t = a;
    for (int i = 0; i < k; ++i) {
      elems[a][i] = t % p;
      t /= p;
    }
  }
  auto encode = [&](const Poly& f) {
    int v = 0;
    for (int i = k - 1; i >= 0; --i) v = v * p + (i < static_cast<int>(f.size()) ? f[i] : 0);
    return v;
  };
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    Poly n(k);
    for (int i = 0; i < k; ++i) n[i] = (p - elems[a][i]) % p;
    neg_[a] = encode(n);
    for (int b = 0; b < q_; ++b) {
      Poly s(k);
      for (int i = 0; i < k; ++i) s[i] = (elems[a][i] + elems[b][i]) % p;
      add_[a * q_ + b] = encode(s);
      Poly prod(2 * k - 1, 0);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + elems[a][i] * elems[b][j]) % p;
      mul_[a * q_ + b] = encode(poly_mod(prod, modulus_, p));
    }
  }
  inv_.assign(q_, 0);
  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul(a, b) == 1) {
        inv_[a] = b;
        break;
      }
  frob_.resize(q_);
  chi_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    int r = 1;
    for (int i = 0; i < p; ++i) r = mul(r, a);
    frob_[a] = r;
    int c = 1;
    for (int i = 0; i < (q_ - 1) / 2; ++i) c = mul(c, a);
    chi_[a] = a == 0 ? 0 : (c == 1 ? 1 : -1);
  }
}

int FiniteField::inv(int a) const {
  if (a == 0) throw Degenerate("inverse of zero in a finite field");
  return inv_[a];
}

int FiniteField::from_int(long long v) const { return static_cast<int>(((v % p_) + p_) % p_); }

std::vector<int> rref(const FiniteField& F, FqMatrix& m) {
  std::vector<int> pivots;
  std::size_t row = 0;
  std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t r = row;
    while (r < m.size() && m[r][c] == 0) ++r;
    if (r == m.size()) continue;
    std::swap(m[r], m[row]);
    int inv = F.inv(m[row][c]);
    for (auto& x : m[row]) x = F.mul(x, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c] == 0) continue;
      int f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[row][j]));
    }
    pivots.push_back(static_cast<int>(c));
    ++row;
  }
  return pivots;
}

int fq_rank(const FiniteField& F, FqMatrix m) { return static_cast<int>(rref(F, m).size()); }

FqMatrix fq_kernel(const FiniteField& F, const FqMatrix& m, int cols) {
  FqMatrix a = m;
  auto pivots = rref(F, a);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  FqMatrix out;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<int> v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(a[r][free]);
    out.push_back(v);
  }
  return out;
}

FqMatrix row_space(const FiniteField& F, FqMatrix rows) {
  auto pivots = rref(F, rows);
  rows.resize(pivots.size());
  return rows;
}

int fq_bilinear(const FiniteField& F, const FqMatrix& gram, const std::vector<int>& x,
                const std::vector<int>& y) {
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    int row = 0;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] && gram[i][j]) row = F.add(row, F.mul(gram[i][j], y[j]));
    s = F.add(s, F.mul(x[i], row));
  }
  return s;
}

std::string fq_key(const FqMatrix& m) {
  std::ostringstream os;
  for (auto& r : m) {
    for (int x : r) os << x << ',';
    os << ';';
  }
  return os.str();
}

}  // namespace gspin

namespace gspin {

FqMatrix fq_sum(const FiniteField& F, const FqMatrix& a, const FqMatrix& b) {
  FqMatrix rows = a;
  rows.insert(rows.end(), b.begin(), b.end());
  return row_space(F, rows);
}

FqMatrix fq_intersection(const FiniteField& F, const FqMatrix& a, const FqMatrix& b, int cols) {
  if (a.empty() || b.empty()) return {};
  // c with sum c_i a_i = sum c'_j b_j: kernel of [a; -b]^T
  int m = static_cast<int>(a.size() + b.size());
  FqMatrix t(cols, std::vector<int>(m, 0));
  for (int j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < a.size(); ++i) t[j][i] = a[i][j];
    for (std::size_t i = 0; i < b.size(); ++i) t[j][a.size() + i] = F.neg(b[i][j]);
  }
  FqMatrix out;
  for (auto& c : fq_kernel(F, t, m)) {
    std::vector<int> x(cols, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (c[i])
        for (int j = 0; j < cols; ++j) x[j] = F.add(x[j], F.mul(c[i], a[i][j]));
    out.push_back(x);
  }
  return row_space(F, out);
}

FqMatrix fq_orthogonal(const FiniteField& F, const FqMatrix& gram, const FqMatrix& a) {
  int n = static_cast<int>(gram.size());
  FqMatrix ga;
  for (auto& r : a) {
    std::vector<int> g(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[i] = F.add(g[i], F.mul(gram[i][j], r[j]));
    ga.push_back(g);
  }
  return row_space(F, fq_kernel(F, ga, n));
}

FqMatrix fq_frobenius(const FiniteField& F, const FqMatrix& a) {
  FqMatrix b = a;
  for (auto& r : b)
    for (auto& x : r) x = F.frobenius(x);
  return row_space(F, b);
}

std::vector<int> field_embedding(const FiniteField& small, const FiniteField& big) {
  if (small.p() != big.p() || big.k() % small.k()) throw InputError("no field embedding");
  const auto& g = small.modulus();
  int root = -1;
  for (int r = 0; r < big.q() && root < 0; ++r) {
    int v = 0;
    for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i) v = big.add(big.mul(v, r), big.from_int(g[i]));
    if (v == 0) root = r;
  }
  std::vector<int> image(small.q());
  for (int a = 0; a < small.q(); ++a) {
    int v = 0, t = a, power = 1;
    for (int i = 0; i < small.k(); ++i) {
      v = big.add(v, big.mul(big.from_int(t % small.p()), power));
      t /= small.p();
      power = big.mul(power, root);
    }
    image[a] = v;
  }
  return image;
}

namespace {

struct IsoSearch {
  const FiniteField& F;
  const FqMatrix& gram;
  int n, d;
  std::int64_t budget;
  std::int64_t work = 0;

  std::vector<int> times_gram(const std::vector<int>& v) const {
    std::vector<int> g(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (v[j] && gram[i][j]) g[i] = F.add(g[i], F.mul(gram[i][j], v[j]));
    return g;
  }

  // rows are built with strictly decreasing pivots
  void extend(std::vector<std::vector<int>>& rows, std::vector<std::vector<int>>& grows,
              std::vector<int>& pivots, std::vector<FqMatrix>& out) {
    if (static_cast<int>(rows.size()) == d) {
      out.emplace_back(rows.rbegin(), rows.rend());
      return;
    }
    int need = d - static_cast<int>(rows.size());
    int top = pivots.empty() ? n : pivots.back();
    for (int c = top - 1; c >= need - 1; --c) extend_at(c, rows, grows, pivots, out);
  }

  void extend_at(int c, std::vector<std::vector<int>>& rows, std::vector<std::vector<int>>& grows,
                 std::vector<int>& pivots, std::vector<FqMatrix>& out) {
    std::vector<int> free;
    for (int j = c + 1; j < n; ++j)
      if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) free.push_back(j);
    int nf = static_cast<int>(free.size());
    // orthogonality to the rows so far: gw[c] + sum_f x_f gw[f] = 0
    FqMatrix sys;
    for (auto& gw : grows) {
      std::vector<int> eq(nf + 1);
      for (int i = 0; i < nf; ++i) eq[i] = gw[free[i]];
      eq[nf] = F.neg(gw[c]);
      sys.push_back(eq);
    }
    FqMatrix a = sys;
    auto piv = rref(F, a);
    if (!piv.empty() && piv.back() == nf) return;  // inconsistent
    std::vector<int> part(nf, 0);
    for (std::size_t r = 0; r < piv.size(); ++r) part[piv[r]] = a[r][nf];
    FqMatrix hom;
    for (auto& r : a) hom.emplace_back(r.begin(), r.begin() + nf);
    FqMatrix ker = fq_kernel(F, hom, nf);
    std::int64_t count = 1;
    for (std::size_t i = 0; i < ker.size(); ++i) count *= F.q();
    work += count;
    if (work > budget) throw TooLarge("isotropic subspace search exceeds its budget");
    std::vector<int> coef(ker.size(), 0), v(n);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      std::int64_t t = idx;
      for (auto& x : coef) {
        x = static_cast<int>(t % F.q());
        t /= F.q();
      }
      std::fill(v.begin(), v.end(), 0);
      v[c] = 1;
      for (int i = 0; i < nf; ++i) {
        int x = part[i];
        for (std::size_t k = 0; k < ker.size(); ++k)
          if (coef[k]) x = F.add(x, F.mul(coef[k], ker[k][i]));
        v[free[i]] = x;
      }
      auto gv = times_gram(v);
      int qv = 0;
      for (int i = 0; i < n; ++i)
        if (v[i]) qv = F.add(qv, F.mul(v[i], gv[i]));
      if (qv) continue;
      rows.push_back(v);
      grows.push_back(gv);
      pivots.push_back(c);
      extend(rows, grows, pivots, out);
      rows.pop_back();
      grows.pop_back();
      pivots.pop_back();
    }
  }
};

}  // namespace

std::vector<FqMatrix> isotropic_subspaces(const FiniteField& F, const FqMatrix& gram, int d,
                                          std::int64_t budget, bool parallel) {
  int n = static_cast<int>(gram.size());
  std::vector<FqMatrix> out;
  if (d == 0) return {FqMatrix{}};
  if (d > n) return out;
  // split by the pivot of the last row
  std::vector<std::vector<FqMatrix>> parts(n);
  std::vector<std::int64_t> work(n, 0);
  bool too_large = false;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int c = d - 1; c < n; ++c) {
    IsoSearch s{F, gram, n, d, budget};
    std::vector<std::vector<int>> rows, grows;
    std::vector<int> pivots;
    try {
      s.extend_at(c, rows, grows, pivots, parts[c]);
    } catch (const TooLarge&) {
#pragma omp atomic write
      too_large = true;
    }
    work[c] = s.work;
  }
  std::int64_t total = 0;
  for (auto w : work) total += w;
  if (too_large || total > budget) throw TooLarge("isotropic subspace search exceeds its budget");
  std::vector<std::pair<std::string, FqMatrix>> keyed;
  for (auto& part : parts)
    for (auto& m : part) keyed.emplace_back(fq_key(m), std::move(m));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [k, m] : keyed) out.push_back(std::move(m));
  return out;
}

}  // namespace gspin
