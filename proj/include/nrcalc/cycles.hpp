#pragma once

// Integer cycle arithmetic on resolution dual graphs.
//
//   DualGraph   weighted graph: vertices carry a genus and a self-intersection,
//               edges carry intersection multiplicities.  Valid inputs are
//               connected with a negative-definite intersection matrix.
//   Cycle       an integer coefficient per vertex, tied to its graph instance.
//
// On top of the pairing we provide the canonical pairing K.E_i (by adjunction,
// so that p_a(E_i) = g_i), arithmetic genus, anti-nef tests, the incremental
// fundamental-cycle construction with its certificate sequence, a brute-force
// minimal-anti-nef search used as an independent oracle, the Z-perpendicular /
// central-component analysis with its stabilization threshold, the cone-like
// vanishing shortcut with optional exhaustive cycle enumeration, and the star
// graphs attached to the blowup family together with their distinguished
// cycles.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nrcalc {

struct GraphVertex {
  int id = 0;        // external identifier, unique within a graph
  long genus = 0;    // >= 0
  long self_int = -1;  // E_i^2, <= -1
};

struct GraphEdge {
  int a = 0;
  int b = 0;
  long mult = 1;  // E_a . E_b, >= 1
};

// Immutable weighted dual graph.  Construction validates shape (unique ids,
// genus >= 0, self-intersections <= -1, edge endpoints distinct and known, no
// duplicate vertex pair); connectivity and negative definiteness are separate
// predicates so that callers can report them precisely.
class DualGraph {
 public:
  using Ptr = std::shared_ptr<const DualGraph>;

  static Ptr make(std::vector<GraphVertex> vertices, std::vector<GraphEdge> edges);

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<GraphVertex>& vertices() const { return vertices_; }
  const GraphVertex& vertex(int i) const;
  const std::vector<GraphEdge>& edges() const { return edges_; }

  // Index of the vertex with the given external id; InputError if unknown.
  int index_of(int id) const;

  // E_i . E_j (self-intersection on the diagonal).
  long pairing(int i, int j) const;

  // K . E_i = -E_i^2 + 2 g_i - 2, the unique value making p_a(E_i) = g_i.
  long canonical_pairing(int i) const;

  bool connected() const;
  // Sylvester test on leading principal minors, computed exactly by
  // fraction-free elimination.
  bool negative_definite() const;
  // InputError unless connected and negative definite.
  void require_resolution_shape() const;

 private:
  DualGraph() = default;
  int index_of_impl(int id) const;
  std::vector<GraphVertex> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<long>> matrix_;
  std::map<int, int> index_by_id_;
};

// Integer cycle sum(c_i E_i) on a fixed graph instance.  Mixing cycles from
// different graph objects is an InputError even if the graphs look alike.
class Cycle {
 public:
  Cycle(DualGraph::Ptr graph, std::vector<long> coeffs);
  static Cycle zero(DualGraph::Ptr graph);
  static Cycle unit(DualGraph::Ptr graph, int vertex_index);

  const DualGraph::Ptr& graph() const { return graph_; }
  const std::vector<long>& coeffs() const { return coeffs_; }
  long coeff(int i) const;

  bool is_zero() const;
  bool is_effective() const;  // all coefficients >= 0
  bool is_positive() const;   // effective and nonzero

  Cycle operator+(const Cycle& o) const;
  Cycle operator-(const Cycle& o) const;
  Cycle scaled(long k) const;
  bool operator==(const Cycle& o) const;
  bool operator!=(const Cycle& o) const { return !(*this == o); }

  std::string to_string() const;  // e.g. "E0 + 2*E3" using external ids

 private:
  DualGraph::Ptr graph_;
  std::vector<long> coeffs_;
};

// Bilinear intersection pairing; InputError on graph mismatch.
long intersect(const Cycle& y, const Cycle& w);
long intersect(const Cycle& y, int vertex_index);
// K . Y by linearity from the per-vertex canonical pairing.
long canonical_intersect(const Cycle& y);
// Arithmetic genus (Y^2 + K.Y)/2 + 1; requires Y positive.  The numerator is
// always even for integral cycles; a parity failure means corrupted state and
// raises ComputeError.
long arithmetic_genus(const Cycle& y);
// Y.E_i <= 0 for every vertex.
bool anti_nef(const Cycle& y);

// Incremental construction of the fundamental cycle: starting from a single
// vertex, repeatedly add any vertex that the running cycle meets positively
// until the cycle is anti-nef.  The visit order is deterministic (lowest
// index first) so outputs are reproducible.  `sequence` lists the vertex
// added at each step, starting with the seed; by construction every later
// step satisfies Y.E_j > 0 just before adding E_j, and the result re-verifies
// that certificate.
struct FundamentalCycle {
  Cycle z;
  std::vector<int> sequence;
};
FundamentalCycle laufer_fundamental_cycle(const DualGraph::Ptr& graph);

// Independent oracle: enumerate every cycle with coefficients in [1, box] and
// keep the anti-nef ones.  (On a connected graph an effective anti-nef cycle
// has full support, so coefficient 0 never occurs in a minimal witness.)
// `minimal` is the coefficientwise minimum over the anti-nef cycles found and
// `minimal_is_anti_nef` reports whether that minimum is itself anti-nef; when
// it is, it is the unique minimal anti-nef cycle within the box.
//
// The enumeration is organized as a depth-first walk that abandons a branch
// only once some fully-decided row can provably no longer return to <= 0
// (undecided coordinates contribute nonnegative off-diagonal mass, at least
// one unit each), so the walk still sees every anti-nef cycle in the box;
// `candidates` counts the complete coefficient vectors actually evaluated.
struct MinimalAntiNefSearch {
  long candidates = 0;
  long anti_nef_found = 0;
  std::optional<Cycle> minimal;
  bool minimal_is_anti_nef = false;
};
MinimalAntiNefSearch minimal_anti_nef_bruteforce(const DualGraph::Ptr& graph, long box);
// Same search over the product box [1, bounds[0]] x ... x [1, bounds[n-1]].
// Bounding each coordinate by a known anti-nef cycle is sound for minimality
// checks: the coefficientwise minimum over *all* positive anti-nef cycles is
// itself anti-nef (the minimum of two anti-nef cycles is anti-nef, because
// for min(Y,W).E_i one may assume the i-th coefficient comes from Y and then
// min(Y,W).E_i <= Y.E_i <= 0), hence lies inside any such product box.
MinimalAntiNefSearch minimal_anti_nef_bruteforce(const DualGraph::Ptr& graph,
                                                 const std::vector<long>& bounds);

// Analysis of the locus where an anti-nef cycle Z is numerically trivial.
// Requires Z anti-nef and Z.E_{e0} = 0; a strictly negative central pairing
// belongs to the complementary regime and is refused with an InputError
// mentioning "case (2)".
//
//   z_perp        all vertex indices with Z.E_i = 0
//   b_vertices    connected component of z_perp through e0
//   z_b           fundamental cycle of the subgraph induced on b_vertices,
//                 written in ambient coordinates
//   checks        Z + Z_B anti-nef; Z_B meets every outside neighbour of B in
//                 exactly 1; -Z_B.E_{e0} >= -Z_X^2 for the ambient
//                 fundamental cycle Z_X
//   s_star        [[ (2 g(e0) - 2) / (-Z_B.E_{e0}) ]], the level from which
//                 the associated q-sequence is predicted to stabilize
struct ZPerpReport {
  std::vector<int> z_perp;
  std::vector<int> b_vertices;
  Cycle z_b;
  long zb_dot_e0 = 0;
  long zx_self = 0;
  bool z_plus_zb_anti_nef = false;
  bool attach_pairing_one = false;
  bool descent_bound = false;
  long s_star = 0;
};
ZPerpReport z_perp_and_B(const Cycle& z, int e0);

// Cone-like vanishing test for a nef divisor given by its pairings d_i =
// D.E_i: the cohomology of O(D) vanishes as soon as D.E_{e0} exceeds
// 2 g(e0) - 2.  Optionally enumerates the positivity-reachable cycles (the
// same incremental sequences that build the fundamental cycle) up to `cap`
// and records two empirical confirmations: every reachable V either contains
// the central vertex and has p_a(V) = g(e0), or avoids it, lives on a tree of
// genus-0 vertices, and has p_a(V) = 0; and the number of reachable V with
// V.D <= 2 p_a(V) - 2, which must be zero whenever the shortcut fires.
struct ConelikeVanishing {
  bool vanishes = false;
  long d_dot_e0 = 0;
  long threshold = 0;  // 2 g(e0) - 2
  bool enumerated = false;
  bool cap_exceeded = false;
  long cycles_seen = 0;
  bool dichotomy_ok = true;
  long inequality_violations = 0;
};
ConelikeVanishing conelike_vanishing(const DualGraph::Ptr& graph, int e0,
                                     const std::vector<long>& d_pairings,
                                     bool enumerate_cycles = false,
                                     long cap = 100000);

// Star-shaped resolution graph of the blowup family: a central curve of genus
// (d-1)(d-2)/2 with self-intersection -2d and d arms of r rational vertices
// (-2, ..., -2, -1).  Carries the distinguished anti-nef cycle z_r (1 on the
// center, j+1 on arm position j), the cohomological cycle c_r (d-2 on the
// center, max(d-2-j, 0) on arm position j), and the fundamental cycle z_x
// from the incremental construction.  Construction verifies: z_r anti-nef,
// z_r.E0 = 0, z_r.E_{i,r} = -1 on every arm tip, z_r.c_r = 0 exactly when
// r >= d-2, z_x^2 = -d, and p_a(z_x) = (d-1)(d-2)/2; violations raise
// ComputeError.
struct StarFamily {
  DualGraph::Ptr graph;
  int d = 0;
  int r = 0;
  int e0 = 0;                          // index of the central vertex
  std::vector<std::vector<int>> arms;  // arms[i][j-1] = index of E_{i+1,j}
  Cycle z_r;
  Cycle c_r;
  Cycle z_x;
  long z_r_dot_c_r = 0;
};
StarFamily build_star_graph(int d, int r);

}  // namespace nrcalc
