#include "gspin/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gspin/errors.hpp"

namespace gspin {

PMatrix pmatrix_zero(int p, std::size_t rows, std::size_t cols, int f, int precision) {
  (void)precision;
  return PMatrix(rows, cols, PadicElement::zero(p, f));
}

PMatrix pmatrix_identity(int p, std::size_t n, int f, int precision) {
  PMatrix m = pmatrix_zero(p, n, n, f);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = PadicElement::from_int(p, 1, f, precision);
  return m;
}

PMatrix to_padic(int p, const QMatrix& m, int f, int precision) {
  PMatrix r = pmatrix_zero(p, m.rows(), m.cols(), f);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = PadicElement::from_rational(p, m(i, j), f, precision);
  return r;
}

PMatrix operator*(const PMatrix& a, const PMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix shape mismatch in product");
  const PadicElement& z = a.rows() && a.cols() ? a(0, 0) : b(0, 0);
  PMatrix c(a.rows(), b.cols(), PadicElement::zero(z.prime(), z.degree()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const PadicElement& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
    }
  return c;
}

PMatrix operator+(const PMatrix& a, const PMatrix& b) {
  PMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

PMatrix operator-(const PMatrix& a, const PMatrix& b) {
  PMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

PMatrix scale(const PMatrix& a, const PadicElement& s) {
  PMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

PVector mat_vec(const PMatrix& a, const PVector& v) {
  PVector out(a.rows(), PadicElement::zero(v.front().prime(), v.front().degree()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero() && !v[j].is_zero()) out[i] += a(i, j) * v[j];
  return out;
}

PMatrix hconcat(const PMatrix& a, const PMatrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  PMatrix c(a.rows(), a.cols() + b.cols(), a(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

PMatrix columns(const std::vector<PVector>& cols, int p, std::size_t rows, int f) {
  PMatrix m = pmatrix_zero(p, rows, cols.size(), f);
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

PMatrix frobenius(const PMatrix& a) {
  PMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j).frobenius();
  return c;
}

PMatrix embed(const PMatrix& a) {
  PMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j).embed();
  return c;
}

PadicElement bilinear(const PMatrix& gram, const PVector& x, const PVector& y) {
  PadicElement acc = PadicElement::zero(x.front().prime(), x.front().degree());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!y[j].is_zero() && !gram(i, j).is_zero()) acc += x[i] * gram(i, j) * y[j];
  }
  return acc;
}

int min_valuation(const PMatrix& a) {
  int v = PadicElement::kZeroValuation;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) v = std::min(v, a(i, j).valuation());
  return v;
}

bool is_integral(const PMatrix& a) { return min_valuation(a) >= 0; }

namespace {

// Row pivot with least valuation in column `col` among rows >= `from`.
int best_row(const PMatrix& m, std::size_t col, std::size_t from) {
  int best = -1;
  int bv = PadicElement::kZeroValuation;
  for (std::size_t i = from; i < m.rows(); ++i) {
    int v = m(i, col).valuation();
    if (v < bv) {
      bv = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void swap_rows(PMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace

PadicElement determinant(const PMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
  PMatrix m = a;
  std::size_t n = m.rows();
  PadicElement det = PadicElement::from_int(a(0, 0).prime(), 1, a(0, 0).degree());
  for (std::size_t c = 0; c < n; ++c) {
    int r = best_row(m, c, c);
    if (r < 0) return PadicElement::zero(a(0, 0).prime(), a(0, 0).degree());
    if (static_cast<std::size_t>(r) != c) {
      swap_rows(m, r, c);
      det = -det;
    }
    det *= m(c, c);
    PadicElement inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      PadicElement factor = m(i, c) * inv;
      for (std::size_t j = c + 1; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= factor * m(c, j);
      m(i, c) = PadicElement::zero(det.prime(), det.degree());
    }
  }
  return det;
}

PMatrix solve_in_span(const PMatrix& basis, const PMatrix& vectors) {
  std::size_t n = basis.rows(), m = basis.cols(), k = vectors.cols();
  if (vectors.rows() != n) throw InputError("shape mismatch in solve");
  const PadicElement& ref = n && m ? basis(0, 0) : vectors(0, 0);
  PadicElement zero = PadicElement::zero(ref.prime(), ref.degree());
  PMatrix aug(n, m + k, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug(i, j) = basis(i, j);
    for (std::size_t j = 0; j < k; ++j) aug(i, m + j) = vectors(i, j);
  }
  for (std::size_t c = 0; c < m; ++c) {
    int r = best_row(aug, c, c);
    if (r < 0) throw Degenerate("basis is rank deficient");
    swap_rows(aug, r, c);
    PadicElement inv = aug(c, c).inverse();
    for (std::size_t j = c; j < m + k; ++j) aug(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || aug(i, c).is_zero()) continue;
      PadicElement factor = aug(i, c);
      for (std::size_t j = c + 1; j < m + k; ++j)
        if (!aug(c, j).is_zero()) aug(i, j) -= factor * aug(c, j);
      aug(i, c) = zero;
    }
  }
  for (std::size_t i = m; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (!aug(i, m + j).is_zero()) throw NotContained("vector outside the span");
  PMatrix x(m, k, zero);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) x(i, j) = aug(i, m + j);
  return x;
}

PMatrix inverse(const PMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("inverse of a non-square matrix");
  return solve_in_span(a, pmatrix_identity(a(0, 0).prime(), a.rows(), a(0, 0).degree()));
}

namespace {

// Reduced row echelon form with least-valuation pivots; returns pivot columns.
std::vector<std::size_t> rref(PMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    int r = best_row(m, c, row);
    if (r < 0) continue;
    swap_rows(m, r, row);
    PadicElement inv = m(row, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
    PadicElement zero = PadicElement::zero(inv.prime(), inv.degree());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c).is_zero()) continue;
      PadicElement factor = m(i, c);
      for (std::size_t j = c + 1; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= factor * m(row, j);
      m(i, c) = zero;
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

PMatrix kernel(const PMatrix& a) {
  PMatrix m = a;
  auto pivots = rref(m);
  const PadicElement& ref = a(0, 0);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<PVector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    PVector v(a.cols(), PadicElement::zero(ref.prime(), ref.degree()));
    v[free] = PadicElement::from_int(ref.prime(), 1, ref.degree());
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(v);
  }
  return columns(basis, ref.prime(), a.cols(), ref.degree());
}

int rank(const PMatrix& a) {
  PMatrix m = a;
  return static_cast<int>(rref(m).size());
}

PMatrix hermite_form(const PMatrix& generators) {
  std::size_t n = generators.rows();
  const PadicElement& ref = generators(0, 0);
  int p = ref.prime(), f = ref.degree();
  PadicElement zero = PadicElement::zero(p, f);
  std::vector<PVector> active;
  for (std::size_t j = 0; j < generators.cols(); ++j) active.push_back(generators.column(j));

  struct Pivot {
    int row;
    int exponent;
    PVector col;
  };
  std::vector<Pivot> pivots;
  for (int r = static_cast<int>(n) - 1; r >= 0 && !active.empty(); --r) {
    int best = -1;
    int bv = PadicElement::kZeroValuation;
    for (std::size_t j = 0; j < active.size(); ++j) {
      int v = active[j][r].valuation();
      if (v < bv) {
        bv = v;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) continue;
    PVector col = std::move(active[best]);
    active.erase(active.begin() + best);
    PadicElement pk = PadicElement::power_of_p(p, bv, f);
    PadicElement unit_inv = pk / col[r];
    for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i)
      if (!col[i].is_zero()) col[i] *= unit_inv;
    col[r] = pk;
    for (auto& other : active) {
      if (other[r].is_zero()) continue;
      PadicElement factor = other[r] / pk;
      for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i)
        if (!col[i].is_zero()) other[i] -= factor * col[i];
      other[r] = zero;
    }
    pivots.push_back({r, bv, std::move(col)});
  }
  // Reduce entries above each pivot, highest pivot row first.
  std::sort(pivots.begin(), pivots.end(), [](const Pivot& x, const Pivot& y) { return x.row < y.row; });
  for (int a = static_cast<int>(pivots.size()) - 1; a >= 0; --a) {
    const Pivot& piv = pivots[a];
    PadicElement pk = piv.col[piv.row];
    for (std::size_t b = a + 1; b < pivots.size(); ++b) {
      PVector& other = pivots[b].col;
      const PadicElement& x = other[piv.row];
      if (x.is_zero()) continue;
      PadicElement rep = x.digits_below(piv.exponent);
      PadicElement y = (x - rep) / pk;
      if (!y.is_zero())
        for (int i = 0; i < piv.row; ++i)
          if (!piv.col[i].is_zero()) other[i] -= y * piv.col[i];
      other[piv.row] = rep;
    }
  }
  PMatrix out(n, pivots.size(), zero);
  for (std::size_t j = 0; j < pivots.size(); ++j) out.set_column(j, pivots[j].col);
  return out;
}

std::vector<int> elementary_divisor_valuations(const PMatrix& a) {
  PMatrix m = a;
  std::vector<int> out;
  std::vector<bool> row_used(m.rows(), false), col_used(m.cols(), false);
  std::size_t steps = std::min(m.rows(), m.cols());
  for (std::size_t step = 0; step < steps; ++step) {
    int bv = PadicElement::kZeroValuation;
    std::size_t br = 0, bc = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!col_used[j] && m(i, j).valuation() < bv) {
          bv = m(i, j).valuation();
          br = i;
          bc = j;
        }
    }
    if (bv == PadicElement::kZeroValuation) break;
    out.push_back(bv);
    row_used[br] = col_used[bc] = true;
    PadicElement inv = m(br, bc).inverse();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (row_used[i] || m(i, bc).is_zero()) continue;
      PadicElement factor = m(i, bc) * inv;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!col_used[j] && !m(br, j).is_zero()) m(i, j) -= factor * m(br, j);
      m(i, bc) = PadicElement::zero(inv.prime(), inv.degree());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> hermite_pivot_rows(const PMatrix& hermite) {
  std::vector<int> rows;
  for (std::size_t j = 0; j < hermite.cols(); ++j) {
    int r = -1;
    for (int i = static_cast<int>(hermite.rows()) - 1; i >= 0; --i)
      if (!hermite(i, j).is_zero()) {
        r = i;
        break;
      }
    rows.push_back(r);
  }
  return rows;
}

std::string matrix_key(const PMatrix& a) {
  std::ostringstream os;
  os << a.rows() << 'x' << a.cols() << ':';
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) os << a(i, j).to_string() << ';';
  return os.str();
}

// ---- rational helpers ----

QMatrix qmatrix_identity(std::size_t n) {
  QMatrix m(n, n, mpq_class(0));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix qkernel(const QMatrix& a) {
  QMatrix m = a;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t r = row;
    while (r < m.rows() && m(r, c) == 0) ++r;
    if (r == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(row, j));
    mpq_class inv = 1 / m(row, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      mpq_class factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (m(row, j) != 0) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::size_t nfree = m.cols() - pivots.size();
  QMatrix k(m.cols(), nfree, mpq_class(0));
  std::size_t col = 0;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    k(free, col) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) k(pivots[r], col) = -m(r, free);
    ++col;
  }
  return k;
}

std::optional<QMatrix> qsolve(const QMatrix& a, const QMatrix& b) {
  std::size_t n = a.rows(), k = b.cols();
  QMatrix m(n, n + k, mpq_class(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < k; ++j) m(i, n + j) = b(i, j);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && m(r, c) == 0) ++r;
    if (r == n) return std::nullopt;
    for (std::size_t j = 0; j < n + k; ++j) std::swap(m(r, j), m(c, j));
    mpq_class inv = 1 / m(c, c);
    for (std::size_t j = c; j < n + k; ++j) m(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      mpq_class factor = m(i, c);
      for (std::size_t j = c; j < n + k; ++j)
        if (m(c, j) != 0) m(i, j) -= factor * m(c, j);
    }
  }
  QMatrix x(n, k, mpq_class(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) x(i, j) = m(i, n + j);
  return x;
}

bool q_is_p_integral(const mpq_class& q, int p) {
  return q == 0 || valuation(q.get_den(), p) == 0;
}

int q_residue(const mpq_class& q, int p) {
  if (!q_is_p_integral(q, p)) throw InputError("residue of a non-integral rational");
  mpz_class pp = p, num = q.get_num() % pp, den = q.get_den() % pp;
  if (num < 0) num += p;
  if (den < 0) den += p;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t());
  mpz_class r = (num * inv) % pp;
  return static_cast<int>(r.get_si());
}

std::vector<int> elementary_divisor_valuations(const QMatrix& a, int p) {
  QMatrix m = a;
  std::size_t n = std::min(m.rows(), m.cols());
  std::vector<int> out;
  std::vector<bool> row_used(m.rows(), false), col_used(m.cols(), false);
  for (std::size_t step = 0; step < n; ++step) {
    int bv = PadicElement::kZeroValuation;
    std::size_t br = 0, bc = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (col_used[j] || m(i, j) == 0) continue;
        int v = valuation(m(i, j), p);
        if (v < bv) {
          bv = v;
          br = i;
          bc = j;
        }
      }
    }
    if (bv == PadicElement::kZeroValuation) break;
    out.push_back(bv);
    row_used[br] = col_used[bc] = true;
    mpq_class inv = 1 / m(br, bc);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (row_used[i] || m(i, bc) == 0) continue;
      mpq_class factor = m(i, bc) * inv;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!col_used[j] && m(br, j) != 0) m(i, j) -= factor * m(br, j);
      m(i, bc) = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gspin
