#include "gspin/lattice.hpp"

#include <algorithm>

#include "gspin/errors.hpp"
#include "gspin/finite_field.hpp"

namespace gspin {

ZpLattice::ZpLattice(SpacePtr ambient, const PMatrix& generators) : ambient_(std::move(ambient)) {
  if (!ambient_) throw InputError("lattice without ambient space");
  if (generators.rows() != static_cast<std::size_t>(ambient_->dim()))
    throw InputError("lattice generators have the wrong length");
  basis_ = hermite_form(generators);
  if (basis_.cols() != generators.rows()) throw Degenerate("lattice generators do not span the space");
  key_ = matrix_key(basis_);
  gram_ = std::make_shared<PMatrix>(basis_.transpose() * ambient_->gram() * basis_);
}

ZpLattice ZpLattice::standard(SpacePtr ambient) {
  int n = ambient->dim();
  int p = ambient->prime();
  return ZpLattice(std::move(ambient), pmatrix_identity(p, n));
}

const PMatrix& ZpLattice::gram() const { return *gram_; }

PMatrix ZpLattice::coordinates(const PMatrix& vectors) const { return solve_in_span(basis_, vectors); }

bool ZpLattice::contains(const PVector& x) const {
  PMatrix c = coordinates(columns({x}, prime(), dim()));
  return min_valuation(c) >= 0;
}

bool ZpLattice::contains(const ZpLattice& other) const {
  return min_valuation(coordinates(other.basis_)) >= 0;
}

ZpLattice ZpLattice::scaled(int k) const {
  return ZpLattice(ambient_, scale(basis_, PadicElement::power_of_p(prime(), k)));
}

ZpLattice ZpLattice::with_ambient(SpacePtr ambient) const {
  if (ambient->dim() != dim()) throw InputError("ambient dimension mismatch");
  return ZpLattice(std::move(ambient), basis_);
}

ZpLattice dual(const ZpLattice& L) {
  PMatrix b = inverse(L.ambient().gram()) * inverse(L.basis().transpose());
  return ZpLattice(L.ambient_ptr(), b);
}

bool is_integral(const ZpLattice& L) { return min_valuation(L.gram()) >= 0; }

ZpLattice lattice_sum(const ZpLattice& a, const ZpLattice& b) {
  return ZpLattice(a.ambient_ptr(), hconcat(a.basis(), b.basis()));
}

ZpLattice intersection(const ZpLattice& a, const ZpLattice& b) {
  return dual(lattice_sum(dual(a), dual(b)));
}

int quotient_length(const ZpLattice& L1, const ZpLattice& L2) {
  PMatrix c = L2.coordinates(L1.basis());
  if (min_valuation(c) < 0) throw NotContained("first lattice is not contained in the second");
  return determinant(c).valuation();
}

int discriminant_valuation(const ZpLattice& L) { return determinant(L.gram()).valuation(); }

std::vector<int> gram_divisors(const ZpLattice& L) { return elementary_divisor_valuations(L.gram()); }

std::int64_t projective_count(int p, int n) {
  std::int64_t total = 0, block = 1;
  for (int i = 0; i < n; ++i) {
    total += block;
    if (block > (std::int64_t(1) << 56) / p) return std::int64_t(1) << 60;
    block *= p;
  }
  return total;
}

std::vector<int> projective_point(int p, int n, std::int64_t idx) {
  std::vector<int> c(n, 0);
  for (int lead = 0; lead < n; ++lead) {
    std::int64_t block = 1;
    for (int i = lead + 1; i < n; ++i) block *= p;
    if (idx < block) {
      c[lead] = 1;
      for (int i = n - 1; i > lead; --i) {
        c[i] = static_cast<int>(idx % p);
        idx /= p;
      }
      return c;
    }
    idx -= block;
  }
  throw InputError("projective index out of range");
}

namespace {

// Gram entries modulo p^2 as integers.
std::vector<std::int64_t> gram_mod_p2(const ZpLattice& L) {
  if (!is_integral(L)) throw InputError("lattice is not integral");
  int n = L.dim();
  std::vector<std::int64_t> g(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i * n + j] = static_cast<std::int64_t>(L.gram()(i, j).residue_mod(2));
  return g;
}

// x/p is an integral enlargement iff G c = 0 mod p and c^T G c = 0 mod p^2.
bool enlarges(const std::vector<std::int64_t>& g, const std::vector<int>& c, int p) {
  int n = static_cast<int>(c.size());
  std::int64_t p2 = static_cast<std::int64_t>(p) * p;
  std::int64_t s = 0;
  for (int i = 0; i < n; ++i) {
    std::int64_t v = 0;
    for (int j = 0; j < n; ++j)
      if (c[j]) v += g[i * n + j] * c[j];
    v %= p2;
    if (v % p) return false;
    s += v * c[i];
  }
  return s % p2 == 0;
}

PVector enlargement_vector(const ZpLattice& L, const std::vector<int>& c) {
  int p = L.prime(), n = L.dim();
  PVector coeff(n);
  for (int i = 0; i < n; ++i) coeff[i] = PadicElement::from_int(p, c[i]);
  PVector x = mat_vec(L.basis(), coeff);
  PadicElement inv_p = PadicElement::power_of_p(p, -1);
  for (auto& v : x) v *= inv_p;
  return x;
}

// Kernel-restricted search: candidates c must lie in the radical of G mod p.
std::optional<PVector> find_enlargement(const ZpLattice& L, const OracleOptions& opts) {
  int p = L.prime(), n = L.dim();
  auto g = gram_mod_p2(L);
  FiniteField F(p, 1);
  FqMatrix gm(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm[i][j] = static_cast<int>(g[i * n + j] % p);
  FqMatrix K = fq_kernel(F, gm, n);
  int kd = static_cast<int>(K.size());
  if (kd == 0) return std::nullopt;
  std::int64_t count = projective_count(p, kd);
  if (count > opts.budget) throw TooLarge("radical too large for enlargement search");
  for (std::int64_t idx = 0; idx < count; ++idx) {
    auto a = projective_point(p, kd, idx);
    std::vector<int> c(n, 0);
    for (int r = 0; r < kd; ++r)
      for (int i = 0; i < n; ++i) c[i] = (c[i] + a[r] * K[r][i]) % p;
    if (enlarges(g, c, p)) return enlargement_vector(L, c);
  }
  return std::nullopt;
}

}  // namespace

MaximalityReport maximality_oracle(const ZpLattice& L, const OracleOptions& opts) {
  int p = L.prime(), n = L.dim();
  auto g = gram_mod_p2(L);
  MaximalityReport rep;
  rep.candidates = projective_count(p, n);
  if (rep.candidates > opts.budget)
    throw TooLarge("maximality oracle needs " + std::to_string(rep.candidates) + " candidates");
  std::int64_t best = rep.candidates;
  if (opts.parallel) {
#pragma omp parallel for schedule(static) reduction(min : best)
    for (std::int64_t idx = 0; idx < rep.candidates; ++idx)
      if (idx < best && enlarges(g, projective_point(p, n, idx), p)) best = idx;
  } else {
    for (std::int64_t idx = 0; idx < rep.candidates; ++idx)
      if (enlarges(g, projective_point(p, n, idx), p)) {
        best = idx;
        break;
      }
  }
  if (best < rep.candidates) {
    rep.maximal = false;
    rep.witness_index = best;
    rep.witness = enlargement_vector(L, projective_point(p, n, best));
  }
  return rep;
}

bool is_maximal(const ZpLattice& L, const OracleOptions& opts) { return maximality_oracle(L, opts).maximal; }

ZpLattice maximalize(const ZpLattice& L, const OracleOptions& opts) {
  if (!is_integral(L)) throw InputError("maximalize needs an integral lattice");
  ZpLattice cur = L;
  while (auto x = find_enlargement(cur, opts))
    cur = ZpLattice(cur.ambient_ptr(), hconcat(cur.basis(), columns({*x}, cur.prime(), cur.dim())));
  return cur;
}

ZpLattice anisotropic_maximal(SpacePtr ambient) {
  if (is_isotropic(*ambient)) throw InputError("space is isotropic");
  Diagonalization d = diagonalize(*ambient);
  int p = ambient->prime();
  PMatrix b = d.basis;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    PadicElement s = PadicElement::power_of_p(p, -(d.q_values[j].valuation() / 2));
    for (std::size_t i = 0; i < b.rows(); ++i) b(i, j) *= s;
  }
  return ZpLattice(std::move(ambient), b);
}

namespace {

PMatrix decomposition_basis(const MaximalDecomposition& d, int p, int n, bool twisted) {
  std::vector<PVector> cols;
  for (int i = 0; i < d.rank(); ++i) {
    PadicElement up = PadicElement::power_of_p(p, twisted ? d.beta[i] : 0);
    PadicElement down = PadicElement::power_of_p(p, twisted ? -d.beta[i] : 0);
    PVector e = d.e[i], f = d.f[i];
    for (auto& x : e) x *= up;
    for (auto& x : f) x *= down;
    cols.push_back(e);
    cols.push_back(f);
  }
  for (std::size_t j = 0; j < d.m0.cols(); ++j) cols.push_back(d.m0.column(j));
  return columns(cols, p, n);
}

// Columns of `basis` except i, j, projected away from the plane span(e, f)
// with [e, f] = 1 and Q(e) = Q(f) = 0.
PMatrix project_complement(const QpQuadSpace& V, const PMatrix& basis, std::size_t i, std::size_t j,
                           const PVector& e, const PVector& f) {
  std::vector<PVector> out;
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    if (c == i || c == j) continue;
    PVector x = basis.column(c);
    PadicElement xf = V.bracket(x, f), xe = V.bracket(x, e);
    for (std::size_t r = 0; r < x.size(); ++r) x[r] -= xf * e[r] + xe * f[r];
    out.push_back(x);
  }
  return columns(out, V.prime(), V.dim());
}

// Rows i < j where the 2 x 2 minor of the m x 2 coordinate matrix is a unit.
std::pair<std::size_t, std::size_t> unit_minor(const PMatrix& c) {
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = i + 1; j < c.rows(); ++j) {
      PadicElement d = c(i, 0) * c(j, 1) - c(j, 0) * c(i, 1);
      if (!d.is_zero() && d.valuation() == 0) return {i, j};
    }
  throw NotMaximal("hyperbolic plane is not a direct summand");
}

}  // namespace

ZpLattice MaximalDecomposition::rebuild_a(SpacePtr ambient) const {
  int p = ambient->prime(), n = ambient->dim();
  return ZpLattice(ambient, decomposition_basis(*this, p, n, false));
}

ZpLattice MaximalDecomposition::rebuild_b(SpacePtr ambient) const {
  int p = ambient->prime(), n = ambient->dim();
  return ZpLattice(ambient, decomposition_basis(*this, p, n, true));
}

MaximalDecomposition elementary_divisors(const ZpLattice& A, const ZpLattice& B, const OracleOptions& opts) {
  if (A.ambient_ptr() != B.ambient_ptr() && !(A.ambient().gram() == B.ambient().gram()))
    throw InputError("lattices live in different spaces");
  if (!is_integral(A) || find_enlargement(A, opts)) throw NotMaximal("first lattice is not maximal");
  if (!is_integral(B) || find_enlargement(B, opts)) throw NotMaximal("second lattice is not maximal");
  const QpQuadSpace& V = A.ambient();
  int p = V.prime();
  PMatrix a = A.basis(), b = B.basis();
  MaximalDecomposition out;
  while (a.cols() >= 2) {
    PMatrix t = solve_in_span(a, b);
    int k = -min_valuation(t);
    PVector e1;
    if (k > 0) {
      std::size_t col = 0;
      while (min_valuation(columns({t.column(col)}, p, t.rows())) != -k) ++col;
      e1 = b.column(col);
      PadicElement pk = PadicElement::power_of_p(p, k);
      for (auto& x : e1) x *= pk;
    } else {
      if (k < 0 || determinant(t).valuation() != 0) throw NotMaximal("nested maximal lattices differ");
      QpQuadSpace sub = V.restrict_to(a);
      auto v = find_isotropic_vector(sub);
      if (!v) break;
      e1 = mat_vec(a, *v);
    }
    // partner in A pairing to a unit with e1
    std::size_t best = a.cols();
    for (std::size_t j = 0; j < a.cols() && best == a.cols(); ++j) {
      PadicElement br = V.bracket(e1, a.column(j));
      if (!br.is_zero() && br.valuation() == 0) best = j;
    }
    if (best == a.cols()) throw NotMaximal("isotropic line pairs into p");
    PVector f = a.column(best);
    PadicElement inv = V.bracket(e1, f).inverse();
    for (auto& x : f) x *= inv;
    // make f isotropic: Q(f + s e1) = Q(f) + s + s^2 Q(e1) = 0
    PadicElement qe = V.q_value(e1), qf = V.q_value(f);
    PadicElement s = -qf;
    if (!qe.is_zero())
      for (int it = 0; it < 200; ++it) {
        PadicElement next = -qf - qe * s * s;
        if (next == s) break;
        s = next;
      }
    for (std::size_t r = 0; r < f.size(); ++r) f[r] += s * e1[r];
    PadicElement c = V.bracket(e1, f);
    PadicElement ratio = qe / c;
    PVector e = e1;
    for (std::size_t r = 0; r < e.size(); ++r) e[r] -= ratio * f[r];
    PadicElement cinv = c.inverse();
    for (auto& x : f) x *= cinv;
    // The pair (f, e) realizes B = span(p^k f, p^-k e) + ...
    out.e.push_back(f);
    out.f.push_back(e);
    out.beta.push_back(std::max(k, 0));
    PadicElement down = PadicElement::power_of_p(p, -std::max(k, 0));
    PadicElement up = PadicElement::power_of_p(p, std::max(k, 0));
    PVector eb = e, fb = f;
    for (auto& x : eb) x *= down;
    for (auto& x : fb) x *= up;
    auto [ai, aj] = unit_minor(solve_in_span(a, columns({e, f}, p, V.dim())));
    auto [bi, bj] = unit_minor(solve_in_span(b, columns({eb, fb}, p, V.dim())));
    a = project_complement(V, a, ai, aj, e, f);
    b = project_complement(V, b, bi, bj, e, f);
    if (a.cols() == 0) break;
  }
  out.m0 = a.cols() ? a : PMatrix(V.dim(), 0, PadicElement::zero(p));
  return out;
}

}  // namespace gspin
