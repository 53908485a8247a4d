#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gspin/finite_field.hpp"
#include "gspin/vertexgraph.hpp"

namespace gspin {

// Omega_0 = L / L^v with the reduction of pQ, and its base change to
// F_{p^k}. Subspaces are RREF row matrices over F_{p^k}.
struct FqQuadSpace {
  int p = 0, t = 0, k = 1;
  FqMatrix gram;  // over F_p, valid over F_{p^k} as is
  std::shared_ptr<const FiniteField> field;
  VertexLattice lattice;
  QuotientFrame frame;
};

FqQuadSpace omega_from_vertex(const VertexLattice& L, int k = 1);
// (-1)^{t/2} det is a nonsquare in F_p.
bool omega_is_nonsplit(const FqQuadSpace& W);

bool is_lagrangian(const FqQuadSpace& W, const FqMatrix& L);
FqMatrix frobenius_subspace(const FqQuadSpace& W, const FqMatrix& L);
std::vector<FqMatrix> enumerate_lagrangians(const FqQuadSpace& W, std::int64_t budget = 50'000'000,
                                            bool parallel = true);
// Number of Lagrangians by peeling isotropic lines: N(W) = #points(W) *
// N(l^perp / l) / #points(Lagrangian).
std::int64_t count_lagrangians_recursive(const FiniteField& F, const FqMatrix& gram);

// Hyperbolic frame over F_{p^2} (embedded in F_{p^k}): Phi fixes e_i, f_i
// for i < d and swaps e_d, f_d. Needs k even.
struct StandardFrame {
  FqMatrix e, f;
  FqMatrix reference() const { return e; }
};
StandardFrame standard_frame(const FqQuadSpace& W);

// +1 iff dim(L cap span(e_1..e_d)) = d mod 2.
int component_of(const FqQuadSpace& W, const StandardFrame& fr, const FqMatrix& L);

struct ChainData {
  int d = 0;                 // number of strict steps
  std::vector<int> dims;     // dim of L + ... + Phi^r L, r = 0..d
  FqMatrix stable;           // the Phi-stable term
  FqMatrix rational;         // the same rows over F_p
  VertexLattice sublattice;  // preimage of `rational` in L
};

ChainData lattice_chain(const FqQuadSpace& W, const FqMatrix& L);
// L cap Phi L cap ... cap Phi^{t/2} L = 0.
bool dl_membership(const FqQuadSpace& W, const FqMatrix& L);
// F_p-rational vectors of L: L cap Phi L cap ... cap Phi^{k-1} L.
FqMatrix rational_part(const FqQuadSpace& W, const FqMatrix& L);

struct SLambdaPoint {
  FqMatrix L;
  int sign = 0;  // 0 when k is odd (no frame over F_{p^k})
};

std::vector<SLambdaPoint> s_lambda_points(const FqQuadSpace& W, std::int64_t budget = 50'000'000,
                                          bool parallel = true);
// Points whose Frobenius chain fills Omega.
std::vector<SLambdaPoint> bt_stratum(const FqQuadSpace& W, std::int64_t budget = 50'000'000,
                                     bool parallel = true);
// Image of a point of S_{L'} (L' a vertex sublattice) in Omega of `top`.
FqMatrix lift_point(const FqQuadSpace& top, const FqQuadSpace& sub, const FqMatrix& L);

struct CountTable {
  int t = 0, p = 0, k = 0;
  std::int64_t total = 0, plus = 0, minus = 0;
  std::map<int, std::int64_t> bt;  // sublattice type -> points
  // checks
  bool partition = false;       // independent BT strata of all sublattices sum to total
  bool buckets_match = false;   // and agree set-wise with the chain buckets
  bool chains_ok = false;       // unit steps, even-type vertex sublattices
  bool dl_agrees = false;       // intersection and sum criteria agree
  bool frobenius_flips = false;  // Phi-stable with opposite signs
  std::int64_t sublattices = 0;
  std::string to_json() const;
  std::string to_csv() const;
};

CountTable stratum_count(const VertexLattice& L, int k, std::int64_t budget = 50'000'000,
                         bool parallel = true);

}  // namespace gspin
