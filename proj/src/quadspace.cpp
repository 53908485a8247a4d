#include "gspin/quadspace.hpp"

#include <algorithm>
#include <sstream>

#include "gspin/errors.hpp"

namespace gspin {

std::string QuadInvariants::label() const {
  std::ostringstream os;
  os << "n=" << n << " det=" << det.name() << " eps=" << (hasse > 0 ? "+1" : "-1")
     << " witt=" << witt_index;
  return os.str();
}

QpQuadSpace::QpQuadSpace(PMatrix gram) : gram_(std::move(gram)), cache_(std::make_shared<Cache>()) {
  if (gram_.rows() != gram_.cols()) throw InputError("Gram matrix must be square");
  if (gram_.rows() == 0) throw InputError("use QpQuadSpace::empty for the zero space");
  p_ = gram_(0, 0).prime();
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram_(i, j) != gram_(j, i)) throw InputError("Gram matrix must be symmetric (entry " + std::to_string(i) + "," +
                         std::to_string(j) + ")");
  if (determinant(gram_).is_zero()) throw Degenerate("Gram matrix is degenerate");
}

QpQuadSpace QpQuadSpace::from_rational(int p, const QMatrix& gram, int precision) {
  return QpQuadSpace(to_padic(p, gram, 1, precision));
}

QpQuadSpace QpQuadSpace::diagonal(const std::vector<PadicElement>& q_values) {
  int p = q_values.front().prime();
  PMatrix g = pmatrix_zero(p, q_values.size(), q_values.size());
  auto two = PadicElement::from_int(p, 2);
  for (std::size_t i = 0; i < q_values.size(); ++i) g(i, i) = two * q_values[i];
  return QpQuadSpace(g);
}

QpQuadSpace QpQuadSpace::empty(int p) {
  QpQuadSpace s;
  s.p_ = p;
  s.cache_ = std::make_shared<Cache>();
  return s;
}

PadicElement QpQuadSpace::bracket(const PVector& x, const PVector& y) const {
  return bilinear(gram_, x, y);
}

PadicElement QpQuadSpace::q_value(const PVector& x) const {
  return bilinear(gram_, x, x) / PadicElement::from_int(p_, 2);
}

QpQuadSpace QpQuadSpace::restrict_to(const PMatrix& basis) const {
  if (basis.cols() == 0) return empty(p_);
  return QpQuadSpace(basis.transpose() * gram_ * basis);
}

QpQuadSpace QpQuadSpace::rescaled(const PadicElement& s) const { return QpQuadSpace(scale(gram_, s)); }

namespace {

void swap_sym(PMatrix& g, PMatrix& b, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < g.rows(); ++k) std::swap(g(i, k), g(j, k));
  for (std::size_t k = 0; k < g.rows(); ++k) std::swap(g(k, i), g(k, j));
  for (std::size_t k = 0; k < b.rows(); ++k) std::swap(b(k, i), b(k, j));
}

QuadInvariants invariants_from(const Diagonalization& d, int p) {
  QuadInvariants inv;
  inv.n = static_cast<int>(d.classes.size());
  SquareClass dq;
  for (auto& c : d.classes) dq = dq * c;
  SquareClass two = square_class(PadicElement::from_int(p, 2));
  inv.det = (inv.n % 2 == 1) ? dq * two : dq;
  for (std::size_t i = 0; i < d.classes.size(); ++i)
    for (std::size_t j = i + 1; j < d.classes.size(); ++j)
      inv.hasse *= hilbert_symbol(d.classes[i], d.classes[j], p);
  return inv;
}

SquareClass q_discriminant(const Diagonalization& d) {
  SquareClass dq;
  for (auto& c : d.classes) dq = dq * c;
  return dq;
}

bool isotropic_from(const Diagonalization& d, int p) {
  int n = static_cast<int>(d.classes.size());
  if (n <= 1) return false;
  if (n >= 5) return true;
  SquareClass dq = q_discriminant(d);
  QuadInvariants inv = invariants_from(d, p);
  SquareClass m1 = SquareClass::of_minus_one(p);
  if (n == 2) return dq == m1;
  if (n == 3) return hilbert_symbol(m1, m1 * dq, p) == inv.hasse;
  return !(dq.is_square() && inv.hasse == -hilbert_symbol(m1, m1, p));
}

PMatrix truncated(const PMatrix& g, int drop) {
  PMatrix t = g;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!g(i, j).is_zero()) t(i, j) = g(i, j).truncate(std::max(1, g(i, j).precision() - drop));
  return t;
}

}  // namespace

Diagonalization diagonalize(const QpQuadSpace& space) {
  int p = space.prime();
  std::size_t n = space.dim();
  PMatrix g = space.gram();
  PMatrix b = pmatrix_identity(p, n);
  PadicElement zero = PadicElement::zero(p);
  for (std::size_t k = 0; k < n; ++k) {
    int dv = PadicElement::kZeroValuation, ov = PadicElement::kZeroValuation;
    std::size_t di = k, oi = k, oj = k;
    for (std::size_t i = k; i < n; ++i) {
      if (g(i, i).valuation() < dv) {
        dv = g(i, i).valuation();
        di = i;
      }
      for (std::size_t j = i + 1; j < n; ++j)
        if (g(i, j).valuation() < ov) {
          ov = g(i, j).valuation();
          oi = i;
          oj = j;
        }
    }
    if (dv == PadicElement::kZeroValuation && ov == PadicElement::kZeroValuation)
      throw Degenerate("degenerate Gram in diagonalization");
    if (ov < dv) {
      // e_oi <- e_oi + e_oj; its norm has valuation ov since p is odd.
      for (std::size_t r = 0; r < n; ++r) b(r, oi) += b(r, oj);
      for (std::size_t c = 0; c < n; ++c) g(oi, c) += g(oj, c);
      for (std::size_t r = 0; r < n; ++r) g(r, oi) += g(r, oj);
      di = oi;
    }
    swap_sym(g, b, k, di);
    PadicElement pivot_inv = g(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (g(i, k).is_zero()) continue;
      PadicElement factor = g(i, k) * pivot_inv;
      for (std::size_t r = 0; r < n; ++r)
        if (!b(r, k).is_zero()) b(r, i) -= factor * b(r, k);
      for (std::size_t c = k + 1; c < n; ++c)
        if (!g(k, c).is_zero()) g(i, c) -= factor * g(k, c);
      for (std::size_t r = k + 1; r < n; ++r)
        if (!g(r, k).is_zero() && r != i) g(r, i) -= factor * g(r, k);
      g(i, k) = zero;
      g(k, i) = zero;
    }
  }
  Diagonalization d;
  d.basis = b;
  auto half = PadicElement::from_int(p, 2).inverse();
  for (std::size_t i = 0; i < n; ++i) {
    d.q_values.push_back(g(i, i) * half);
    d.classes.push_back(square_class(d.q_values.back()));
  }
  return d;
}

QuadInvariants QpQuadSpace::basic_invariants() const {
  if (dim() == 0) return QuadInvariants{};
  std::call_once(cache_->basic_once, [this] {
    QuadInvariants inv = invariants_from(diagonalize(*this), p_);
    QuadInvariants check;
    try {
      check = invariants_from(diagonalize(QpQuadSpace(truncated(gram_, 4))), p_);
    } catch (const Degenerate&) {
      throw PrecisionExhausted("invariants unstable under perturbation of the last digits");
    }
    if (!(check == inv)) throw PrecisionExhausted("invariants unstable under perturbation of the last digits");
    cache_->basic = inv;
  });
  return cache_->basic;
}

const QuadInvariants& QpQuadSpace::invariants() const {
  if (dim() == 0) {
    static const QuadInvariants empty_inv{};
    return empty_inv;
  }
  std::call_once(cache_->full_once, [this] {
    QuadInvariants inv = basic_invariants();
    inv.witt_index = witt_decompose(*this).witt_index();
    cache_->full = inv;
  });
  return cache_->full;
}

QuadInvariants invariants(const QpQuadSpace& space) { return space.invariants(); }

bool is_isotropic(const QpQuadSpace& space) {
  if (space.dim() <= 1) return false;
  if (space.dim() >= 5) return true;
  return isotropic_from(diagonalize(space), space.prime());
}

PadicElement padic_sqrt(const PadicElement& c, int residue) {
  int p = c.prime();
  if (c.valuation() != 0 || legendre(c.residue(), p) != 1)
    throw InputError("square root of a non-square unit");
  if ((static_cast<long long>(residue) * residue - c.residue()) % p != 0)
    throw InputError("inconsistent residue for square root");
  PadicElement y = PadicElement::from_int(p, residue, 1, c.precision());
  PadicElement half = PadicElement::from_int(p, 2).inverse();
  for (int iter = 0; iter < 12; ++iter) {
    if (y * y == c) return y;
    y = (y + c / y) * half;
  }
  if (y * y == c) return y;
  throw PrecisionExhausted("square root iteration did not converge");
}

namespace {

// Nontrivial zero of sum r_i z_i^2 mod p, lexicographically first.
std::optional<std::vector<int>> residue_zero(const std::vector<int>& r, int p) {
  std::size_t m = std::min<std::size_t>(r.size(), 3);
  if (m < 2) return std::nullopt;
  std::vector<int> z(m, 0);
  long long total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= p;
  for (long long idx = 1; idx < total; ++idx) {
    long long t = idx;
    for (int i = static_cast<int>(m) - 1; i >= 0; --i) {
      z[i] = static_cast<int>(t % p);
      t /= p;
    }
    long long s = 0;
    for (std::size_t i = 0; i < m; ++i) s += static_cast<long long>(r[i]) * z[i] * z[i];
    if (s % p == 0) return z;
  }
  return std::nullopt;
}

PVector primitive(PVector v) {
  int mv = PadicElement::kZeroValuation;
  for (auto& x : v) mv = std::min(mv, x.valuation());
  for (auto& x : v) x = x.shift(-mv);
  return v;
}

}  // namespace

std::optional<PVector> find_isotropic_vector(const QpQuadSpace& space) {
  int p = space.prime();
  std::size_t n = space.dim();
  for (std::size_t i = 0; i < n; ++i)
    if (space.gram()(i, i).is_zero()) {
      PVector e(n, PadicElement::zero(p));
      e[i] = PadicElement::from_int(p, 1);
      return e;
    }
  Diagonalization d = diagonalize(space);
  if (n <= 1 || (n <= 4 && !isotropic_from(d, p))) return std::nullopt;

  std::vector<int> half_val(n), units_res(n);
  std::vector<PadicElement> units;
  std::vector<std::size_t> groups[2];
  for (std::size_t i = 0; i < n; ++i) {
    int v = d.q_values[i].valuation();
    int parity = ((v % 2) + 2) % 2;
    half_val[i] = (v - parity) / 2;
    units.push_back(d.q_values[i].shift(-v));
    units_res[i] = units.back().residue();
    groups[parity].push_back(i);
  }
  for (auto& group : groups) {
    std::vector<int> r;
    for (auto i : group) r.push_back(units_res[i]);
    auto z = residue_zero(r, p);
    if (!z) continue;
    std::size_t m = z->size();
    std::size_t j = m;
    for (std::size_t a = 0; a < m; ++a)
      if ((*z)[a] != 0) j = a;
    // Hensel: fix the other coordinates and solve for coordinate j exactly.
    PadicElement rhs = PadicElement::zero(p);
    for (std::size_t a = 0; a < m; ++a) {
      if (a == j || (*z)[a] == 0) continue;
      auto za = PadicElement::from_int(p, (*z)[a]);
      rhs -= units[group[a]] * za * za;
    }
    PadicElement target = rhs / units[group[j]];
    PadicElement y = padic_sqrt(target, (*z)[j]);
    PVector w(n, PadicElement::zero(p));
    for (std::size_t a = 0; a < m; ++a) {
      PadicElement za = a == j ? y : PadicElement::from_int(p, (*z)[a]);
      w[group[a]] = za.shift(-half_val[group[a]]);
    }
    PVector v = primitive(mat_vec(d.basis, w));
    if (!space.q_value(v).is_zero()) throw SearchExhausted("Hensel lift did not reach an exact zero");
    return v;
  }
  throw SearchExhausted("isotropic space but no smooth residue zero found");
}

WittDecomposition witt_decompose(const QpQuadSpace& space) {
  int p = space.prime();
  int n = space.dim();
  WittDecomposition out;
  out.kernel_basis = pmatrix_identity(p, n);
  out.kernel = space;
  if (n < 2) return out;
  // Work in a diagonal frame whose q-values have valuation 0 or 1; the
  // splitting there loses at most a couple of digits per plane.
  Diagonalization d = diagonalize(space);
  PMatrix frame = d.basis;
  std::vector<PadicElement> b(n);
  for (int i = 0; i < n; ++i) {
    int s = d.q_values[i].valuation() / 2;
    b[i] = d.q_values[i].shift(-2 * s);
    PadicElement scale = PadicElement::power_of_p(p, -s);
    for (int r = 0; r < n; ++r) frame(r, i) *= scale;
  }
  QpQuadSpace reduced = QpQuadSpace::diagonal(b);
  auto v = find_isotropic_vector(reduced);
  if (!v) return out;
  const PVector& e = *v;
  std::size_t best = 0;
  int bv = PadicElement::kZeroValuation;
  for (int j = 0; j < n; ++j) {
    if (e[j].is_zero()) continue;
    int val = b[j].valuation() + e[j].valuation();
    if (val < bv) {
      bv = val;
      best = j;
    }
  }
  // f = (e_j - Q(e_j)/c e) / c with c = [e, e_j]
  PadicElement c = PadicElement::from_int(p, 2) * b[best] * e[best];
  PadicElement cinv = c.inverse();
  PVector f(n, PadicElement::zero(p));
  PadicElement t = b[best] * cinv;
  for (int i = 0; i < n; ++i) f[i] = -(t * e[i]) * cinv;
  f[best] += cinv;
  std::size_t drop = n;
  for (int j = 0; j < n; ++j)
    if (static_cast<std::size_t>(j) != best && !e[j].is_zero() &&
        (drop == static_cast<std::size_t>(n) || e[j].valuation() < e[drop].valuation()))
      drop = j;
  if (drop == static_cast<std::size_t>(n))
    throw PrecisionExhausted("isotropic vector collapsed onto its partner");
  out.e.push_back(mat_vec(frame, e));
  out.f.push_back(mat_vec(frame, f));
  if (n == 2) {
    out.kernel_basis = PMatrix(n, 0, PadicElement::zero(p));
    out.kernel = QpQuadSpace::empty(p);
    return out;
  }
  // Projections of the remaining frame vectors span the complement.
  std::vector<PVector> projected;
  for (int j = 0; j < n; ++j) {
    if (static_cast<std::size_t>(j) == best || static_cast<std::size_t>(j) == drop) continue;
    PVector x(n, PadicElement::zero(p));
    x[j] = PadicElement::from_int(p, 1);
    PadicElement xf = reduced.bracket(x, f), xe = reduced.bracket(x, e);
    for (int i = 0; i < n; ++i) x[i] -= xf * e[i] + xe * f[i];
    projected.push_back(x);
  }
  PMatrix proj = columns(projected, p, n);
  WittDecomposition rest = witt_decompose(reduced.restrict_to(proj));
  PMatrix to_space = frame * proj;
  for (std::size_t i = 0; i < rest.e.size(); ++i) {
    out.e.push_back(mat_vec(to_space, rest.e[i]));
    out.f.push_back(mat_vec(to_space, rest.f[i]));
  }
  out.kernel_basis = rest.kernel_basis.cols() ? to_space * rest.kernel_basis
                                              : PMatrix(n, 0, PadicElement::zero(p));
  out.kernel = rest.kernel;
  return out;
}

bool isometric(const QpQuadSpace& a, const QpQuadSpace& b) {
  if (a.prime() != b.prime() || a.dim() != b.dim()) return false;
  QuadInvariants x = a.basic_invariants(), y = b.basic_invariants();
  return x.det == y.det && x.hasse == y.hasse;
}

QpQuadSpace flip_hasse(const QpQuadSpace& space) {
  if (space.dim() <= 2)
    throw DimensionTooSmall("a Hasse flip with the same determinant needs n >= 3");
  int p = space.prime();
  Diagonalization d = diagonalize(space);
  SquareClass block = d.classes[0] * d.classes[1] * d.classes[2];
  int eps = hilbert_symbol(d.classes[0], d.classes[1], p) *
            hilbert_symbol(d.classes[0], d.classes[2], p) *
            hilbert_symbol(d.classes[1], d.classes[2], p);
  std::vector<SquareClass> chosen;
  for (auto b1 : SquareClass::all()) {
    for (auto b2 : SquareClass::all()) {
      SquareClass b3 = block * b1 * b2;
      int e = hilbert_symbol(b1, b2, p) * hilbert_symbol(b1, b3, p) * hilbert_symbol(b2, b3, p);
      if (e == -eps) {
        chosen = {b1, b2, b3};
        break;
      }
    }
    if (!chosen.empty()) break;
  }
  if (chosen.empty()) throw SearchExhausted("no ternary twin found");
  for (std::size_t i = 3; i < d.classes.size(); ++i) chosen.push_back(d.classes[i]);
  std::vector<PadicElement> q;
  for (auto& c : chosen) q.push_back(c.representative(p));
  return QpQuadSpace::diagonal(q);
}

std::string to_string(DetSelector s) { return s == DetSelector::plus ? "plus" : "minus"; }

DetSelector parse_det_selector(const std::string& s) {
  if (s == "plus") return DetSelector::plus;
  if (s == "minus") return DetSelector::minus;
  throw InputError("det class must be 'plus' or 'minus', got '" + s + "'");
}

std::vector<long long> standard_tail(int p, int n, DetSelector sel) {
  if (n < 3) throw DimensionTooSmall("the ambient space needs n >= 3");
  std::vector<long long> tail(n - 2, 1);
  // (-1)^{floor(n/2)} * det = (-1)^{floor(n/2) + 1} * 2^{n-2} * prod c_i
  long long sign = ((n / 2 + 1) % 2 == 0) ? 1 : -1;
  int cls = legendre(sign, p) * (n % 2 == 1 ? legendre(2, p) : 1);
  bool want_square = sel == DetSelector::plus;
  if ((cls == 1) != want_square) tail.back() = least_nonresidue(p);
  return tail;
}

QMatrix standard_gram(int p, int n, DetSelector sel) {
  auto tail = standard_tail(p, n, sel);
  QMatrix g(n, n, mpq_class(0));
  g(0, 1) = g(1, 0) = 1;
  for (int i = 2; i < n; ++i) g(i, i) = static_cast<long>(2 * tail[i - 2]);
  return g;
}

QpQuadSpace standard_space(int p, int n, DetSelector sel, int precision) {
  return QpQuadSpace::from_rational(p, standard_gram(p, n, sel), precision);
}

}  // namespace gspin
