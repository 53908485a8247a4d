#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gspin/matrix.hpp"
#include "gspin/quadspace.hpp"

namespace gspin {

using SpacePtr = std::shared_ptr<const QpQuadSpace>;

// Full-rank Z_p-lattice in a quadratic space. The basis is kept in
// canonical Hermite form, so equal lattices have equal bases and keys.
class ZpLattice {
 public:
  ZpLattice() = default;
  // Lattice generated by the columns of `generators` (must span the space).
  ZpLattice(SpacePtr ambient, const PMatrix& generators);
  // Z_p^n in the coordinates of the ambient space.
  static ZpLattice standard(SpacePtr ambient);

  const QpQuadSpace& ambient() const { return *ambient_; }
  const SpacePtr& ambient_ptr() const { return ambient_; }
  int prime() const { return ambient_->prime(); }
  int dim() const { return ambient_->dim(); }
  const PMatrix& basis() const { return basis_; }
  // Gram matrix of the bracket on the basis.
  const PMatrix& gram() const;
  const std::string& key() const { return key_; }

  // Coordinates of the columns of `vectors` in the lattice basis.
  PMatrix coordinates(const PMatrix& vectors) const;
  bool contains(const PVector& x) const;
  bool contains(const ZpLattice& other) const;
  bool operator==(const ZpLattice& o) const { return key_ == o.key_; }
  bool operator!=(const ZpLattice& o) const { return key_ != o.key_; }
  bool operator<(const ZpLattice& o) const { return key_ < o.key_; }

  // p^k L.
  ZpLattice scaled(int k) const;
  // Same basis viewed in another space of equal dimension.
  ZpLattice with_ambient(SpacePtr ambient) const;

 private:
  SpacePtr ambient_;
  PMatrix basis_;
  std::string key_;
  std::shared_ptr<PMatrix> gram_;
};

// {x : [x, L] in Z_p}.
ZpLattice dual(const ZpLattice& L);
// Q(L) in Z_p.
bool is_integral(const ZpLattice& L);
ZpLattice lattice_sum(const ZpLattice& a, const ZpLattice& b);
ZpLattice intersection(const ZpLattice& a, const ZpLattice& b);
// Length of L2 / L1 for L1 in L2; throws NotContained otherwise.
int quotient_length(const ZpLattice& L1, const ZpLattice& L2);
// Valuation of det of the Gram matrix.
int discriminant_valuation(const ZpLattice& L);
// Sorted valuations of the elementary divisors of the Gram matrix.
std::vector<int> gram_divisors(const ZpLattice& L);

struct OracleOptions {
  std::int64_t budget = 20'000'000;  // candidate cap for exhaustive searches
  bool parallel = true;
};

struct MaximalityReport {
  bool maximal = true;
  // Least candidate index (in projective enumeration order) whose
  // enlargement L + Z_p x/p is integral, with x in ambient coordinates.
  std::optional<std::int64_t> witness_index;
  std::optional<PVector> witness;
  std::int64_t candidates = 0;
};

// Exhaustive check over all (p^n - 1)/(p - 1) index-p superlattices.
MaximalityReport maximality_oracle(const ZpLattice& L, const OracleOptions& opts = {});
bool is_maximal(const ZpLattice& L, const OracleOptions& opts = {});
// Enlarges an integral lattice to a maximal one by index-p steps.
ZpLattice maximalize(const ZpLattice& L, const OracleOptions& opts = {});
// {x : Q(x) in Z_p} in an anisotropic space.
ZpLattice anisotropic_maximal(SpacePtr ambient);

// A = sum span(e_i, f_i) + M0, B = sum span(p^beta_i e_i, p^-beta_i f_i) + M0.
struct MaximalDecomposition {
  std::vector<PVector> e, f;
  std::vector<int> beta;  // non-increasing
  PMatrix m0;             // basis of the anisotropic block (n x (n - 2r))
  int rank() const { return static_cast<int>(e.size()); }
  ZpLattice rebuild_a(SpacePtr ambient) const;
  ZpLattice rebuild_b(SpacePtr ambient) const;
};

MaximalDecomposition elementary_divisors(const ZpLattice& A, const ZpLattice& B,
                                         const OracleOptions& opts = {});

// Number of points of P^{n-1}(F_p).
std::int64_t projective_count(int p, int n);
// The idx-th point of P^{n-1}(F_p): first nonzero coordinate is 1, the
// remaining coordinates read as a base-p counter.
std::vector<int> projective_point(int p, int n, std::int64_t idx);

}  // namespace gspin
