#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gspin/matrix.hpp"
#include "gspin/padic.hpp"

namespace gspin {

struct QuadInvariants {
  int n = 0;
  SquareClass det;  // class of det(Gram)
  int hasse = 1;    // prod_{i<j} (a_i, a_j) over a diagonalization Q = sum a_i x_i^2
  int witt_index = 0;

  bool operator==(const QuadInvariants&) const = default;
  std::string label() const;
};

struct WittDecomposition;

// Nondegenerate quadratic space over Q_p given by the Gram matrix of
// [x, y] = Q(x + y) - Q(x) - Q(y), so Q(x) = x^T G x / 2.
class QpQuadSpace {
 public:
  QpQuadSpace() = default;
  explicit QpQuadSpace(PMatrix gram);
  static QpQuadSpace from_rational(int p, const QMatrix& gram, int precision = 0);
  // Diagonal space sum a_i x_i^2.
  static QpQuadSpace diagonal(const std::vector<PadicElement>& q_values);
  static QpQuadSpace empty(int p);

  int prime() const { return p_; }
  int dim() const { return static_cast<int>(gram_.rows()); }
  const PMatrix& gram() const { return gram_; }

  PadicElement bracket(const PVector& x, const PVector& y) const;
  PadicElement q_value(const PVector& x) const;
  // Space on the span of the columns of `basis`.
  QpQuadSpace restrict_to(const PMatrix& basis) const;
  // Same space with the form multiplied by s.
  QpQuadSpace rescaled(const PadicElement& s) const;

  // Dimension, det class and Hasse invariant; certified stable.
  const QuadInvariants& invariants() const;
  // Same without the Witt index (no isotropic-vector search).
  QuadInvariants basic_invariants() const;

 private:
  struct Cache {
    std::once_flag basic_once, full_once;
    QuadInvariants basic, full;
  };
  int p_ = 0;
  PMatrix gram_;
  std::shared_ptr<Cache> cache_;
};

struct Diagonalization {
  PMatrix basis;                      // columns e_i, B^T G B diagonal
  std::vector<PadicElement> q_values;  // a_i = Q(e_i)
  std::vector<SquareClass> classes;
};

// Symmetric elimination with least-valuation pivots; the change of basis is
// in GL_n(Z_p), so it is also a Jordan splitting of the standard lattice.
Diagonalization diagonalize(const QpQuadSpace& space);
QuadInvariants invariants(const QpQuadSpace& space);
bool is_isotropic(const QpQuadSpace& space);
// Primitive v with Q(v) = 0 to working precision, or none.
std::optional<PVector> find_isotropic_vector(const QpQuadSpace& space);

struct WittDecomposition {
  std::vector<PVector> e, f;  // [e_i, f_j] = delta_ij, Q(e_i) = Q(f_i) = 0
  PMatrix kernel_basis;       // n x (n - 2r), possibly with zero columns
  QpQuadSpace kernel;
  int witt_index() const { return static_cast<int>(e.size()); }
};

WittDecomposition witt_decompose(const QpQuadSpace& space);
bool isometric(const QpQuadSpace& a, const QpQuadSpace& b);
// Same dimension and determinant, opposite Hasse invariant.
QpQuadSpace flip_hasse(const QpQuadSpace& space);

// Square root of a unit square in Q_p whose residue is `residue`.
PadicElement padic_sqrt(const PadicElement& c, int residue);

// Determinant selector for the ambient V of dimension n:
// plus  <=> (-1)^{floor(n/2)} det V is a square,
// minus <=> it is the nonsquare unit class.
enum class DetSelector { plus, minus };
std::string to_string(DetSelector s);
DetSelector parse_det_selector(const std::string& s);

// Q-values c_3..c_n of the orthogonal tail (units 1 or u).
std::vector<long long> standard_tail(int p, int n, DetSelector sel);
// Gram [[0,1],[1,0]] + diag(2c_3, ..., 2c_n).
QMatrix standard_gram(int p, int n, DetSelector sel);
QpQuadSpace standard_space(int p, int n, DetSelector sel, int precision = 0);

}  // namespace gspin
