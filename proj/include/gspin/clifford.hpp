#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gspin/matrix.hpp"
#include "gspin/quadspace.hpp"

namespace gspin {

class CliffordAlgebra;
using CliffordPtr = std::shared_ptr<const CliffordAlgebra>;

// Sparse element: monomial bitmask (bit i-1 for x_i, factors in increasing
// order) -> exact rational coefficient; zero coefficients are absent.
class CliffordElement {
 public:
  using Terms = std::map<std::uint32_t, mpq_class>;

  CliffordElement() = default;
  CliffordElement(CliffordPtr alg, Terms terms);

  const CliffordPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  mpq_class coeff(std::uint32_t mask) const;
  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;
  bool is_even() const;
  bool is_odd() const;
  // Coefficients of x_1..x_n if the element lies in V.
  std::optional<std::vector<mpq_class>> as_vector() const;

  CliffordElement operator+(const CliffordElement& o) const;
  CliffordElement operator-(const CliffordElement& o) const;
  CliffordElement operator-() const;
  CliffordElement operator*(const CliffordElement& o) const;
  CliffordElement operator*(const mpq_class& s) const;
  bool operator==(const CliffordElement& o) const { return terms_ == o.terms_; }
  bool operator!=(const CliffordElement& o) const { return terms_ != o.terms_; }

  std::string to_string() const;

 private:
  CliffordPtr alg_;
  Terms terms_;
};

// C(V) for V = Q^n with a rational Gram matrix of the bracket.
class CliffordAlgebra : public std::enable_shared_from_this<CliffordAlgebra> {
 public:
  // Builds the multiplication tables eagerly; n <= 10.
  static CliffordPtr create(int p, const QMatrix& gram);
  // Gram of the standard basis: [x1,x2] = 1, Q(x1) = Q(x2) = 0, then 2c_i.
  static CliffordPtr standard(int p, int n, DetSelector sel = DetSelector::plus);

  int prime() const { return p_; }
  int dim() const { return n_; }
  std::uint32_t size() const { return 1u << n_; }
  const QMatrix& gram() const { return gram_; }
  mpq_class q_value(int i) const { return gram_(i, i) / 2; }

  CliffordElement zero() const;
  CliffordElement scalar(const mpq_class& t) const;
  CliffordElement generator(int i) const;  // x_i, 1-based
  CliffordElement monomial(std::uint32_t mask) const;
  CliffordElement vector(const std::vector<mpq_class>& coeffs) const;

  // Product of two monomials as sparse terms.
  const CliffordElement::Terms& monomial_product(std::uint32_t a, std::uint32_t b) const {
    return products_[static_cast<std::size_t>(a) * size() + b];
  }
  const CliffordElement::Terms& monomial_reverse(std::uint32_t a) const { return reversed_[a]; }
  // Trace of left multiplication by the monomial.
  const mpq_class& monomial_trace(std::uint32_t a) const { return traces_[a]; }

 private:
  CliffordAlgebra() = default;
  void build();

  int p_ = 0, n_ = 0;
  QMatrix gram_;
  std::vector<CliffordElement::Terms> products_, reversed_;
  std::vector<mpq_class> traces_;
};

CliffordElement involution(const CliffordElement& a);
// Trace of left multiplication divided by 2^{floor(n/2)}.
mpq_class reduced_trace(const CliffordElement& a);
// Matrix of left multiplication in the monomial basis (column = image).
QMatrix left_regular(const CliffordElement& a);
// Basis of the center as elements.
std::vector<CliffordElement> center(const CliffordPtr& alg);
std::optional<CliffordElement> inverse(const CliffordElement& a);

struct GSpinElement {
  CliffordElement g;
  mpq_class eta;   // g* g
  QMatrix action;  // column i = g x_i g^-1 in the basis x_1..x_n
};

struct GSpinCheck {
  std::optional<GSpinElement> element;
  std::string reason;  // empty when accepted
  explicit operator bool() const { return element.has_value(); }
};

GSpinCheck is_gspin(const CliffordElement& g);
GSpinElement gspin_product(const GSpinElement& a, const GSpinElement& b);

// t^-1 x1 x2 + x2 x1.
CliffordElement mu(const CliffordPtr& alg, const mpq_class& t);
// x3 (p^-1 x1 + x2).
CliffordElement basic_b(const CliffordPtr& alg);
// (x1 + x2) x3: q-values 1 and Q(x3) on orthogonal vectors, so delta* = -delta.
CliffordElement default_delta(const CliffordPtr& alg);

// Trd(c1 delta c2*); throws BadDelta unless delta* = -delta.
mpq_class psi_delta(const CliffordElement& c1, const CliffordElement& c2, const CliffordElement& delta);
// Gram matrix of psi_delta on the monomial basis.
QMatrix psi_matrix(const CliffordPtr& alg, const CliffordElement& delta);
struct PerfectionReport {
  bool integral = false;
  int rank_mod_p = 0;
  bool perfect = false;
};
PerfectionReport psi_perfection(const CliffordPtr& alg, const CliffordElement& delta);

// Basis x1 x_T (weight -1, i.e. t^-1) and x2 x_T (weight 0) of C(V).
struct WeightVector {
  CliffordElement z;
  int weight;
};
std::vector<WeightVector> cocharacter_weights(const CliffordPtr& alg);

std::string mask_name(std::uint32_t mask);

}  // namespace gspin
