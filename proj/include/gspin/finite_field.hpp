#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gspin {

// F_q with q = p^k as F_p[x]/(g), g the lexicographically least monic
// irreducible of degree k. Elements are integers in [0, q) read as base-p
// coefficient vectors (constant term first).
class FiniteField {
 public:
  FiniteField(int p, int k);

  int p() const { return p_; }
  int k() const { return k_; }
  int q() const { return q_; }
  // Coefficients of g, constant term first, leading 1 included.
  const std::vector<int>& modulus() const { return modulus_; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
  int neg(int a) const { return neg_[a]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int inv(int a) const;
  int frobenius(int a) const { return frob_[a]; }
  int from_int(long long v) const;
  bool in_prime_field(int a) const { return a < p_; }
  // Quadratic character on F_q^x (1, -1; 0 for 0).
  int chi(int a) const { return chi_[a]; }

 private:
  int p_, k_, q_;
  std::vector<int> modulus_;
  std::vector<int> add_, mul_, neg_, inv_, frob_, chi_;
};

// Lexicographically least monic irreducible of degree k over F_p.
std::vector<int> least_irreducible(int p, int k);

using FqMatrix = std::vector<std::vector<int>>;  // row-major

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(const FiniteField& F, FqMatrix& m);
int fq_rank(const FiniteField& F, FqMatrix m);
// Rows spanning the right kernel {x : m x = 0}.
FqMatrix fq_kernel(const FiniteField& F, const FqMatrix& m, int cols);
// Rows of a in RREF with zero rows dropped.
FqMatrix row_space(const FiniteField& F, FqMatrix rows);
// x^T G y.
int fq_bilinear(const FiniteField& F, const FqMatrix& gram, const std::vector<int>& x,
                const std::vector<int>& y);
std::string fq_key(const FqMatrix& m);

// Row spaces in RREF.
FqMatrix fq_sum(const FiniteField& F, const FqMatrix& a, const FqMatrix& b);
FqMatrix fq_intersection(const FiniteField& F, const FqMatrix& a, const FqMatrix& b, int cols);
// {x : x^T G a = 0 for every row a}.
FqMatrix fq_orthogonal(const FiniteField& F, const FqMatrix& gram, const FqMatrix& a);
// Entrywise Frobenius, re-echelonized.
FqMatrix fq_frobenius(const FiniteField& F, const FqMatrix& a);

// Image of the generator x of `small` (degree dividing k) inside F; maps
// elements of `small` into `big` by their coefficient vectors.
std::vector<int> field_embedding(const FiniteField& small, const FiniteField& big);

// Totally isotropic subspaces of dimension d for the symmetric form `gram`
// (odd p), each once, as RREF row matrices sorted by key. The search fixes
// rows from the largest pivot down, so every echelon form arises once.
std::vector<FqMatrix> isotropic_subspaces(const FiniteField& F, const FqMatrix& gram, int d,
                                          std::int64_t budget = 50'000'000, bool parallel = true);

}  // namespace gspin
