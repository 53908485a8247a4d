#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gspin/errors.hpp"
#include "gspin/finite_field.hpp"
#include "gspin/lattice.hpp"
#include "gspin/quadspace.hpp"

namespace gspin {

struct TmaxInfo {
  int t_max = 0;
  int dim = 0;  // t_max / 2 - 1
};

// Largest vertex type for the self-dual side V over Q_p (p fixes the
// class of -1).
TmaxInfo t_max(const QuadInvariants& inv, int p);
// Witt index of V minus Witt index of V'.
int chai_rapoport_defect(const QuadInvariants& v, const QuadInvariants& vprime);

enum class AmbientSource { flip_hasse, fixed_points };

// V, the twisted space V' (Hasse -1) and V' with the form pQ.
struct VertexSetup {
  int p = 0, n = 0;
  DetSelector sel = DetSelector::plus;
  QpQuadSpace v;
  SpacePtr twisted;
  SpacePtr scaled;
  TmaxInfo tmax;
  OracleOptions oracle;
  std::int64_t node_budget = 100'000;
  bool parallel = true;
};

VertexSetup make_setup(int p, int n, DetSelector sel, AmbientSource src = AmbientSource::flip_hasse,
                       int precision = 0);

class VertexLattice {
 public:
  VertexLattice() = default;
  const ZpLattice& lattice() const { return lattice_; }
  int type() const { return type_; }
  const std::string& key() const { return lattice_.key(); }
  bool operator==(const VertexLattice& o) const { return lattice_ == o.lattice_; }
  bool operator<(const VertexLattice& o) const {
    return type_ != o.type_ ? type_ < o.type_ : lattice_ < o.lattice_;
  }

 private:
  friend std::optional<VertexLattice> try_vertex(const ZpLattice& L, std::string* reason);
  VertexLattice(ZpLattice L, int t) : lattice_(std::move(L)), type_(t) {}
  ZpLattice lattice_;
  int type_ = 0;
};

// p L in L^v in L with even positive type; throws NotVertex naming the
// failed condition.
VertexLattice is_vertex(const ZpLattice& L);
std::optional<VertexLattice> try_vertex(const ZpLattice& L, std::string* reason = nullptr);

// F_p-vector space big / small (p big in small) with a basis of lifts and
// the form p^scale [ , ] mod p.
struct QuotientFrame {
  int p = 0;
  int dim = 0;
  PMatrix lifts;            // n x dim, vectors of big
  FqMatrix gram;            // dim x dim over F_p
  ZpLattice big, small;
  // Coordinates of x in big (mod small).
  std::vector<int> reduce(const PVector& x) const;
  // small + span(lifts * rows), rows over F_p; `divide` scales lifts by 1/p.
  ZpLattice preimage(const FqMatrix& rows, bool divide = false) const;

 private:
  friend QuotientFrame quotient_frame(const ZpLattice&, const ZpLattice&, int);
  std::vector<int> pivots_, complement_;
  FqMatrix image_rows_;  // RREF of small mod p big
};

QuotientFrame quotient_frame(const ZpLattice& big, const ZpLattice& small, int scale);
// Omega_0 = L / L^v with the reduction of pQ.
QuotientFrame omega_frame(const VertexLattice& L);

VertexLattice find_maximal_vertex(const VertexSetup& s);
// A vertex lattice containing L of type t_max.
VertexLattice maximal_vertex_over(const VertexSetup& s, const VertexLattice& L);
std::vector<VertexLattice> neighbors_down(const VertexLattice& L);
std::vector<VertexLattice> neighbors_up(const VertexSetup& s, const VertexLattice& L);

struct VertexGraph {
  std::vector<VertexLattice> nodes;             // sorted by (type, key)
  std::vector<std::pair<int, int>> edges;       // (smaller, larger) indices
  std::vector<int> depth;                       // BFS distance from the seed
  std::string to_dot() const;
  std::string to_json() const;
};

VertexGraph bfs_graph(const VertexSetup& s, const VertexLattice& seed, int depth);

// Full chain from a to b (inclusive), consecutive members adjacent; empty
// when a == b.
std::vector<VertexLattice> path_between(const VertexSetup& s, const VertexLattice& a,
                                        const VertexLattice& b);
bool adjacent(const VertexLattice& a, const VertexLattice& b);

// Maximal vertex lattice of a random pQ-integral lattice, then `down_steps`
// random steps to smaller types.
VertexLattice random_vertex_lattice(const VertexSetup& s, std::mt19937& rng, int down_steps = 1);

struct RegionReport {
  std::int64_t integral = 0;  // pQ-integral lattices in the region
  std::map<int, std::int64_t> types;  // vertex lattices per type
  std::vector<VertexLattice> vertices;
  std::int64_t covered_in_region = 0;  // inside a type-t_max member of the region
  std::int64_t covered_by_climb = 0;   // needed neighbors_up outside the region
};

// All lattices M with p L0 in M in p^-1 L0, L0 = find_maximal_vertex(s),
// searched over pQ-integral ones by index-p steps, then filtered.
RegionReport enumerate_region(const VertexSetup& s, bool parallel, bool check_cover = true);

}  // namespace gspin
