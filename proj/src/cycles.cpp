#include "nrcalc/cycles.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "nrcalc/curve.hpp"
#include "nrcalc/errors.hpp"

namespace nrcalc {

namespace {

// Fraction-free determinant (Bareiss).  Entries here are tiny (graph weights),
// but 128-bit intermediates keep even a full 16x16 minor comfortably exact.
__int128 bareiss_det(std::vector<std::vector<__int128>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  __int128 det = a[n - 1][n - 1];
  return sign > 0 ? det : -det;
}

void require_same_graph(const Cycle& y, const Cycle& w) {
  if (y.graph().get() != w.graph().get())
    throw InputError("cycles belong to different graphs");
}

}  // namespace

DualGraph::Ptr DualGraph::make(std::vector<GraphVertex> vertices,
                               std::vector<GraphEdge> edges) {
  if (vertices.empty()) throw InputError("graph needs at least one vertex");
  auto g = std::shared_ptr<DualGraph>(new DualGraph());
  const int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) {
    const auto& v = vertices[i];
    if (v.genus < 0) throw InputError("vertex genus must be >= 0");
    if (v.self_int > -1) throw InputError("vertex self-intersection must be <= -1");
    if (!g->index_by_id_.emplace(v.id, i).second)
      throw InputError("duplicate vertex id " + std::to_string(v.id));
  }
  g->vertices_ = std::move(vertices);
  g->matrix_.assign(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) g->matrix_[i][i] = g->vertices_[i].self_int;
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.a == e.b) throw InputError("edge endpoints must be distinct vertices");
    if (e.mult < 1) throw InputError("edge multiplicity must be >= 1");
    int i = g->index_of_impl(e.a);
    int j = g->index_of_impl(e.b);
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second)
      throw InputError("duplicate edge between ids " + std::to_string(e.a) + " and " +
                       std::to_string(e.b));
    g->matrix_[i][j] = e.mult;
    g->matrix_[j][i] = e.mult;
  }
  g->edges_ = std::move(edges);
  return g;
}

const GraphVertex& DualGraph::vertex(int i) const {
  if (i < 0 || i >= size()) throw InputError("vertex index out of range");
  return vertices_[i];
}

int DualGraph::index_of(int id) const { return index_of_impl(id); }

int DualGraph::index_of_impl(int id) const {
  auto it = index_by_id_.find(id);
  if (it == index_by_id_.end())
    throw InputError("unknown vertex id " + std::to_string(id));
  return it->second;
}

long DualGraph::pairing(int i, int j) const {
  if (i < 0 || i >= size() || j < 0 || j >= size())
    throw InputError("vertex index out of range");
  return matrix_[i][j];
}

long DualGraph::canonical_pairing(int i) const {
  const auto& v = vertex(i);
  return -v.self_int + 2 * v.genus - 2;
}

bool DualGraph::connected() const {
  const int n = size();
  std::vector<char> seen(n, 0);
  std::deque<int> todo{0};
  seen[0] = 1;
  int reached = 1;
  while (!todo.empty()) {
    int i = todo.front();
    todo.pop_front();
    for (int j = 0; j < n; ++j)
      if (j != i && matrix_[i][j] != 0 && !seen[j]) {
        seen[j] = 1;
        ++reached;
        todo.push_back(j);
      }
  }
  return reached == n;
}

bool DualGraph::negative_definite() const {
  const int n = size();
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<__int128>> a(k, std::vector<__int128>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a[i][j] = matrix_[i][j];
    __int128 det = bareiss_det(std::move(a));
    bool ok = (k % 2 == 0) ? det > 0 : det < 0;
    if (!ok) return false;
  }
  return true;
}

void DualGraph::require_resolution_shape() const {
  if (!connected()) throw InputError("graph is not connected");
  if (!negative_definite())
    throw InputError("intersection form is not negative definite");
}

Cycle::Cycle(DualGraph::Ptr graph, std::vector<long> coeffs)
    : graph_(std::move(graph)), coeffs_(std::move(coeffs)) {
  if (!graph_) throw InputError("cycle needs a graph");
  if (static_cast<int>(coeffs_.size()) != graph_->size())
    throw InputError("cycle coefficient count does not match the graph");
}

Cycle Cycle::zero(DualGraph::Ptr graph) {
  if (!graph) throw InputError("cycle needs a graph");
  std::vector<long> c(graph->size(), 0);
  return Cycle(std::move(graph), std::move(c));
}

Cycle Cycle::unit(DualGraph::Ptr graph, int vertex_index) {
  auto y = zero(std::move(graph));
  if (vertex_index < 0 || vertex_index >= y.graph_->size())
    throw InputError("vertex index out of range");
  y.coeffs_[vertex_index] = 1;
  return y;
}

long Cycle::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size()))
    throw InputError("vertex index out of range");
  return coeffs_[i];
}

bool Cycle::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](long c) { return c == 0; });
}

bool Cycle::is_effective() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](long c) { return c >= 0; });
}

bool Cycle::is_positive() const { return is_effective() && !is_zero(); }

Cycle Cycle::operator+(const Cycle& o) const {
  require_same_graph(*this, o);
  std::vector<long> c(coeffs_);
  for (size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
  return Cycle(graph_, std::move(c));
}

Cycle Cycle::operator-(const Cycle& o) const {
  require_same_graph(*this, o);
  std::vector<long> c(coeffs_);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
  return Cycle(graph_, std::move(c));
}

Cycle Cycle::scaled(long k) const {
  std::vector<long> c(coeffs_);
  for (auto& x : c) x *= k;
  return Cycle(graph_, std::move(c));
}

bool Cycle::operator==(const Cycle& o) const {
  return graph_.get() == o.graph_.get() && coeffs_ == o.coeffs_;
}

std::string Cycle::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < graph_->size(); ++i) {
    long c = coeffs_[i];
    if (c == 0) continue;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    long a = c < 0 ? -c : c;
    if (a != 1) out << a << "*";
    out << "E" << graph_->vertex(i).id;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

long intersect(const Cycle& y, const Cycle& w) {
  require_same_graph(y, w);
  const auto& g = *y.graph();
  long total = 0;
  for (int i = 0; i < g.size(); ++i) {
    if (y.coeffs()[i] == 0) continue;
    long row = 0;
    for (int j = 0; j < g.size(); ++j) row += g.pairing(i, j) * w.coeffs()[j];
    total += y.coeffs()[i] * row;
  }
  return total;
}

long intersect(const Cycle& y, int vertex_index) {
  const auto& g = *y.graph();
  if (vertex_index < 0 || vertex_index >= g.size())
    throw InputError("vertex index out of range");
  long total = 0;
  for (int j = 0; j < g.size(); ++j)
    total += g.pairing(vertex_index, j) * y.coeffs()[j];
  return total;
}

long canonical_intersect(const Cycle& y) {
  const auto& g = *y.graph();
  long total = 0;
  for (int i = 0; i < g.size(); ++i) total += y.coeffs()[i] * g.canonical_pairing(i);
  return total;
}

long arithmetic_genus(const Cycle& y) {
  if (!y.is_positive())
    throw InputError("arithmetic genus needs a positive cycle");
  long numerator = intersect(y, y) + canonical_intersect(y);
  if (numerator % 2 != 0)
    throw ComputeError("internal invariant violated: odd arithmetic-genus numerator");
  return numerator / 2 + 1;
}

bool anti_nef(const Cycle& y) {
  for (int i = 0; i < y.graph()->size(); ++i)
    if (intersect(y, i) > 0) return false;
  return true;
}

FundamentalCycle laufer_fundamental_cycle(const DualGraph::Ptr& graph) {
  if (!graph) throw InputError("fundamental cycle needs a graph");
  graph->require_resolution_shape();
  const int n = graph->size();

  FundamentalCycle out{Cycle::unit(graph, 0), {0}};
  // Negative definiteness bounds the coefficients, so termination is certain;
  // the step cap only guards against corrupted state.
  const long step_cap = 1000000;
  for (long steps = 0;; ++steps) {
    if (steps > step_cap)
      throw ComputeError("internal invariant violated: cycle construction did not settle");
    int add = -1;
    for (int j = 0; j < n; ++j)
      if (intersect(out.z, j) > 0) {
        add = j;
        break;
      }
    if (add < 0) break;
    out.sequence.push_back(add);
    out.z = out.z + Cycle::unit(graph, add);
  }

  // Replay the sequence as a certificate: each step must have met the running
  // cycle positively, and the end result must be anti-nef.
  Cycle replay = Cycle::unit(graph, out.sequence.at(0));
  for (size_t i = 1; i < out.sequence.size(); ++i) {
    if (intersect(replay, out.sequence[i]) <= 0)
      throw ComputeError("internal invariant violated: non-positive step in cycle sequence");
    replay = replay + Cycle::unit(graph, out.sequence[i]);
  }
  if (!(replay == out.z) || !anti_nef(out.z))
    throw ComputeError("internal invariant violated: cycle sequence does not certify");
  return out;
}

namespace {

// Complete walk over the product box.  `rows` carries the row sums of the
// decided coordinates; `unit_tail[k][i]` is the unit contribution sum over
// the undecided coordinates j >= k of row i (all off-diagonal there, hence
// nonnegative), the least those coordinates can ever add.  A decided row
// whose sum plus that floor is positive certifies the whole branch fails
// anti-nef, so skipping it loses no candidate.
struct BoxWalk {
  const std::vector<long>& bounds;
  int n;
  std::vector<long> m;  // flattened pairing matrix, row-major
  std::vector<long> y;
  std::vector<long> rows;
  std::vector<std::vector<long>> unit_tail;
  std::vector<long> least;
  bool have_least = false;
  MinimalAntiNefSearch res;

  BoxWalk(const DualGraph& graph, const std::vector<long>& b)
      : bounds(b), n(graph.size()), m(n * n), y(n, 0), rows(n, 0),
        unit_tail(n + 1, std::vector<long>(n, 0)), least(n, 0) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i * n + j] = graph.pairing(i, j);
    for (int k = n - 1; k >= 0; --k)
      for (int i = 0; i < n; ++i)
        unit_tail[k][i] = unit_tail[k + 1][i] + (i == k ? 0 : m[i * n + k]);
  }

  void walk(int k) {
    for (long v = 1; v <= bounds[k]; ++v) {
      y[k] = v;
      for (int i = 0; i < n; ++i) rows[i] += m[i * n + k];
      // Rows other than k only grow as v grows, so the first value that
      // strands such a row strands every later one too.
      bool dead_forever = false;
      bool dead_here = false;
      for (int i = 0; i <= k; ++i)
        if (rows[i] + unit_tail[k + 1][i] > 0) {
          dead_here = true;
          if (i != k) dead_forever = true;
        }
      if (!dead_here) {
        if (k + 1 == n) {
          ++res.candidates;
          // At full depth the prune floor is zero, so surviving here already
          // means anti-nef; re-check each row anyway so a pruning bug cannot
          // silently misclassify a candidate.
          bool ok = true;
          for (int i = 0; i < n && ok; ++i) ok = rows[i] <= 0;
          if (ok) {
            ++res.anti_nef_found;
            if (!have_least) {
              least = y;
              have_least = true;
            } else {
              for (int i = 0; i < n; ++i) least[i] = std::min(least[i], y[i]);
            }
          }
        } else {
          walk(k + 1);
        }
      }
      if (dead_forever) break;
    }
    for (int i = 0; i < n; ++i) rows[i] -= m[i * n + k] * y[k];
    y[k] = 0;
  }
};

MinimalAntiNefSearch box_search(const DualGraph::Ptr& graph,
                                const std::vector<long>& bounds) {
  BoxWalk walk(*graph, bounds);
  walk.walk(0);
  MinimalAntiNefSearch res = std::move(walk.res);
  if (walk.have_least) {
    res.minimal = Cycle(graph, walk.least);
    res.minimal_is_anti_nef = anti_nef(*res.minimal);
  }
  return res;
}

}  // namespace

MinimalAntiNefSearch minimal_anti_nef_bruteforce(const DualGraph::Ptr& graph, long box) {
  if (!graph) throw InputError("search needs a graph");
  if (box < 1) throw InputError("search box must be >= 1");
  graph->require_resolution_shape();
  const int n = graph->size();
  long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= box;
    if (total > 20000000)
      throw InputError("brute-force box too large for exhaustive search");
  }
  return box_search(graph, std::vector<long>(n, box));
}

MinimalAntiNefSearch minimal_anti_nef_bruteforce(const DualGraph::Ptr& graph,
                                                 const std::vector<long>& bounds) {
  if (!graph) throw InputError("search needs a graph");
  graph->require_resolution_shape();
  const int n = graph->size();
  if (static_cast<int>(bounds.size()) != n)
    throw InputError("one bound per vertex is required");
  double total = 1;
  for (long b : bounds) {
    if (b < 1) throw InputError("search bounds must be >= 1");
    total *= static_cast<double>(b);
    if (total > 1e16) throw InputError("brute-force box too large for exhaustive search");
  }
  return box_search(graph, bounds);
}

ZPerpReport z_perp_and_B(const Cycle& z, int e0) {
  const auto& graph = z.graph();
  graph->require_resolution_shape();
  const int n = graph->size();
  if (e0 < 0 || e0 >= n) throw InputError("central vertex index out of range");
  if (!z.is_positive() || !anti_nef(z))
    throw InputError("the analyzed cycle must be positive and anti-nef");
  if (intersect(z, e0) != 0)
    throw InputError(
        "the cycle meets the central curve, which is case (2); this analysis "
        "needs Z.E0 = 0");

  ZPerpReport rep{.z_perp = {}, .b_vertices = {}, .z_b = Cycle::zero(graph)};
  for (int i = 0; i < n; ++i)
    if (intersect(z, i) == 0) rep.z_perp.push_back(i);

  // Connected component of the trivial locus through the central vertex.
  std::set<int> perp(rep.z_perp.begin(), rep.z_perp.end());
  std::set<int> comp{e0};
  std::deque<int> todo{e0};
  while (!todo.empty()) {
    int i = todo.front();
    todo.pop_front();
    for (int j : perp)
      if (!comp.count(j) && graph->pairing(i, j) != 0) {
        comp.insert(j);
        todo.push_back(j);
      }
  }
  rep.b_vertices.assign(comp.begin(), comp.end());

  // Fundamental cycle of the induced subgraph, sent back to ambient
  // coordinates.  A principal submatrix of a negative-definite form stays
  // negative definite, and the component is connected by construction.
  std::vector<GraphVertex> sub_vertices;
  for (int i : rep.b_vertices) sub_vertices.push_back(graph->vertex(i));
  std::vector<GraphEdge> sub_edges;
  for (const auto& e : graph->edges()) {
    int i = graph->index_of(e.a);
    int j = graph->index_of(e.b);
    if (comp.count(i) && comp.count(j)) sub_edges.push_back(e);
  }
  auto sub = DualGraph::make(std::move(sub_vertices), std::move(sub_edges));
  auto sub_z = laufer_fundamental_cycle(sub);
  std::vector<long> ambient(n, 0);
  for (int k = 0; k < sub->size(); ++k)
    ambient[graph->index_of(sub->vertex(k).id)] = sub_z.z.coeffs()[k];
  rep.z_b = Cycle(graph, std::move(ambient));

  rep.zb_dot_e0 = intersect(rep.z_b, e0);
  auto zx = laufer_fundamental_cycle(graph);
  rep.zx_self = intersect(zx.z, zx.z);

  rep.z_plus_zb_anti_nef = anti_nef(z + rep.z_b);
  rep.attach_pairing_one = true;
  for (int i = 0; i < n; ++i) {
    if (comp.count(i)) continue;
    bool touches = false;
    for (int j : rep.b_vertices) touches = touches || graph->pairing(i, j) != 0;
    if (touches && intersect(rep.z_b, i) != 1) rep.attach_pairing_one = false;
  }
  rep.descent_bound = -rep.zb_dot_e0 >= -rep.zx_self;
  rep.s_star = upper_bracket_frac(2 * graph->vertex(e0).genus - 2, -rep.zb_dot_e0);
  return rep;
}

ConelikeVanishing conelike_vanishing(const DualGraph::Ptr& graph, int e0,
                                     const std::vector<long>& d_pairings,
                                     bool enumerate_cycles, long cap) {
  if (!graph) throw InputError("vanishing test needs a graph");
  graph->require_resolution_shape();
  const int n = graph->size();
  if (e0 < 0 || e0 >= n) throw InputError("central vertex index out of range");
  if (static_cast<int>(d_pairings.size()) != n)
    throw InputError("divisor pairing vector does not match the graph");
  for (long d : d_pairings)
    if (d < 0) throw InputError("the divisor must be nef (all pairings >= 0)");

  const long g0 = graph->vertex(e0).genus;
  ConelikeVanishing rep;
  rep.threshold = 2 * g0 - 2;
  rep.d_dot_e0 = d_pairings[e0];
  rep.vanishes = rep.d_dot_e0 > rep.threshold;
  if (!enumerate_cycles) return rep;

  // Enumerate every cycle reachable by positivity steps from a single vertex
  // (the same moves that build the fundamental cycle).  The set is finite:
  // all members lie below the fundamental cycle.
  rep.enumerated = true;
  std::set<std::vector<long>> seen;
  std::deque<std::vector<long>> todo;
  for (int j = 0; j < n; ++j) {
    std::vector<long> c(n, 0);
    c[j] = 1;
    if (seen.insert(c).second) todo.push_back(c);
  }
  while (!todo.empty()) {
    if (static_cast<long>(seen.size()) > cap) {
      rep.cap_exceeded = true;
      break;
    }
    auto c = todo.front();
    todo.pop_front();
    Cycle y(graph, c);
    for (int j = 0; j < n; ++j)
      if (intersect(y, j) > 0) {
        auto up = c;
        ++up[j];
        if (seen.insert(up).second) todo.push_back(up);
      }
  }
  rep.cycles_seen = static_cast<long>(seen.size());

  for (const auto& c : seen) {
    Cycle v(graph, c);
    long pa = arithmetic_genus(v);
    long v_dot_d = 0;
    for (int i = 0; i < n; ++i) v_dot_d += c[i] * d_pairings[i];
    if (c[e0] >= 1) {
      if (pa != g0) rep.dichotomy_ok = false;
    } else {
      // Away from the center the support must be a tree of genus-0 vertices.
      long support = 0, edge_count = 0;
      bool rational = true;
      for (int i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        ++support;
        rational = rational && graph->vertex(i).genus == 0;
        for (int j = i + 1; j < n; ++j)
          if (c[j] != 0) edge_count += graph->pairing(i, j);
      }
      if (!rational || edge_count != support - 1 || pa != 0) rep.dichotomy_ok = false;
    }
    if (v_dot_d <= 2 * pa - 2) ++rep.inequality_violations;
  }
  return rep;
}

StarFamily build_star_graph(int d, int r) {
  if (d < 3) throw InputError("star graph needs d >= 3");
  if (r < 1) throw InputError("star graph needs r >= 1");

  const long g = static_cast<long>(d - 1) * (d - 2) / 2;
  std::vector<GraphVertex> vertices;
  vertices.push_back({0, g, -2L * d});
  std::vector<GraphEdge> edges;
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= r; ++j) {
      int id = (i - 1) * r + j;
      vertices.push_back({id, 0, j == r ? -1 : -2});
      edges.push_back({j == 1 ? 0 : id - 1, id, 1});
    }
  auto graph = DualGraph::make(std::move(vertices), std::move(edges));

  StarFamily fam{.graph = graph,
                 .d = d,
                 .r = r,
                 .e0 = graph->index_of(0),
                 .arms = {},
                 .z_r = Cycle::zero(graph),
                 .c_r = Cycle::zero(graph),
                 .z_x = Cycle::zero(graph)};
  std::vector<long> zc(graph->size(), 0), cc(graph->size(), 0);
  zc[fam.e0] = 1;
  cc[fam.e0] = d - 2;
  for (int i = 1; i <= d; ++i) {
    std::vector<int> arm;
    for (int j = 1; j <= r; ++j) {
      int idx = graph->index_of((i - 1) * r + j);
      arm.push_back(idx);
      zc[idx] = j + 1;
      cc[idx] = std::max(d - 2 - j, 0);
    }
    fam.arms.push_back(std::move(arm));
  }
  fam.z_r = Cycle(graph, std::move(zc));
  fam.c_r = Cycle(graph, std::move(cc));
  fam.z_x = laufer_fundamental_cycle(graph).z;
  fam.z_r_dot_c_r = intersect(fam.z_r, fam.c_r);

  auto fail = [](const std::string& what) {
    throw ComputeError("internal invariant violated: star graph " + what);
  };
  if (!anti_nef(fam.z_r)) fail("z_r is not anti-nef");
  if (intersect(fam.z_r, fam.e0) != 0) fail("z_r does not annihilate the center");
  for (const auto& arm : fam.arms)
    if (intersect(fam.z_r, arm.back()) != -1) fail("z_r misses -1 on an arm tip");
  if ((fam.z_r_dot_c_r == 0) != (r >= d - 2)) fail("z_r.c_r sign breaks the dichotomy");
  if (intersect(fam.z_x, fam.z_x) != -d) fail("fundamental cycle self-intersection");
  if (arithmetic_genus(fam.z_x) != g) fail("fundamental cycle arithmetic genus");
  return fam;
}

}  // namespace nrcalc
