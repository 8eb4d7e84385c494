#include "nrcalc/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "nrcalc/curve.hpp"
#include "nrcalc/cycles.hpp"
#include "nrcalc/drivers.hpp"
#include "nrcalc/errors.hpp"
#include "nrcalc/qseq.hpp"
#include "nrcalc/report.hpp"

namespace nrcalc {

namespace {

// Collects exact checks; remembers the first failure so the criterion line
// can name it.
struct Tally {
  bool pass = true;
  long count = 0;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    ++count;
    if (!ok && pass) {
      pass = false;
      first_failure = what;
    }
  }
  // Fold in checks performed in bulk without per-check strings.
  void absorb(long extra) { count += extra; }
};

std::string where(const FamilyReport& rep) {
  std::string s = rep.family;
  if (!rep.params.empty()) s += " " + rep.params;
  if (!rep.field.empty()) s += " over " + rep.field;
  return s;
}

void require_report(Tally& t, const FamilyReport& rep) {
  for (const auto& c : rep.checks)
    t.require(c.pass, where(rep) + ": check " + c.id +
                          (c.detail.empty() ? "" : " (" + c.detail + ")"));
}

long value_of(const FamilyReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.values)
    if (k == key) return v;
  throw ComputeError("internal invariant violated: value " + key +
                     " missing from " + where(rep));
}

// ---------------------------------------------------------------------------
// Shared instance grid.  Criteria 1-4 consume slices of it; criteria 6-7
// sweep all of it, so "every computed instance" means exactly this list.
// Built once per process; every run is seeded and deterministic.

struct Registry {
  std::vector<FamilyReport> reports;

  const FamilyReport& get(const std::string& family, const std::string& params,
                          const std::string& field = "") const {
    for (const auto& r : reports)
      if (r.family == family && r.params == params &&
          (field.empty() || r.field == field))
        return r;
    throw ComputeError("internal invariant violated: instance " + family + " " +
                       params + " missing from the acceptance grid");
  }
};

const Registry& instances() {
  static const Registry reg = [] {
    Registry r;
    ClosureRunOptions rat;  // rationals, default horizons, seed 1
    for (int d = 3; d <= 6; ++d)
      r.reports.push_back(run_hypersurface_family(d, rat));
    for (int d = 3; d <= 5; ++d)
      for (int m = 1; m <= 3; ++m)
        r.reports.push_back(run_blowup_family(d, m, rat));
    ClosureRunOptions fin = rat;
    fin.field = FieldMode::prime(32003);
    for (int g = 2; g <= 3; ++g) {
      r.reports.push_back(run_veronese_family(g, rat));
      r.reports.push_back(run_veronese_family(g, fin));
    }
    for (int g = 2; g <= 6; ++g) {
      r.reports.push_back(run_hyperelliptic_bounds(g, 1));
      r.reports.push_back(run_hyperelliptic_bounds(g, g));
    }
    r.reports.push_back(run_ci_bounds({2, 2}));
    r.reports.push_back(run_ci_bounds({2, 3}));
    r.reports.push_back(run_ci_bounds({3, 3}));
    for (int d = 3; d <= 5; ++d)
      for (int m = 1; m <= 3; ++m)
        r.reports.push_back(run_star_family(d, m));
    return r;
  }();
  return reg;
}

// ---------------------------------------------------------------------------
// Criterion 1: maximal-ideal cones over degree-d plane curves.  The full
// pipeline output must match the combinatorial closed form q(n) = C(d-n,3)
// and the reduction numbers nr = br = d-1.

Tally criterion_1() {
  Tally t;
  for (int d = 3; d <= 6; ++d) {
    const auto& rep = instances().get("hypersurface", "d=" + std::to_string(d));
    require_report(t, rep);
    const std::string at = where(rep);
    const auto& qs = *rep.qseq;
    t.require(qs.n_max >= d, at + ": horizon reaches n=d");
    for (int n = 0; n <= qs.n_max; ++n)
      t.require(qs.q[n] == binom(d - n, 3),
                at + ": q(" + std::to_string(n) + ") = C(" +
                    std::to_string(d - n) + ",3)");
    t.require(qs.nr == d - 1, at + ": nr = d-1");
    t.require(qs.br == d - 1, at + ": br = d-1");
  }
  return t;
}

// ---------------------------------------------------------------------------
// Criterion 2: blowup families.  The quotient lengths must follow the tails
// of the series (1-t^d)(1-t^{r+1})/(1-t)^2; here the coefficients come from
// the four-ramp closed form (1/(1-t)^2 has coefficients j+1 and the numerator
// shifts it four ways), a derivation disjoint from the engine's counting.

long series_coeff(int d, int r, long j) {
  auto ramp = [](long x) { return x >= 0 ? x + 1 : 0; };
  return ramp(j) - ramp(j - d) - ramp(j - (r + 1)) + ramp(j - d - (r + 1));
}

long series_tail(int d, int r, long from) {
  long total = 0;
  for (long j = from; j <= static_cast<long>(d) + r; ++j)
    total += series_coeff(d, r, j);  // coefficients vanish past d-1+r
  return total;
}

Tally criterion_2() {
  Tally t;
  for (int d = 3; d <= 5; ++d)
    for (int r = 1; r <= 3; ++r) {
      const auto& rep = instances().get(
          "blowup", "d=" + std::to_string(d) + " r=" + std::to_string(r));
      require_report(t, rep);
      const std::string at = where(rep);
      const auto& qs = *rep.qseq;

      long col_q = value_of(rep, "colength_Q");
      t.require(col_q == static_cast<long>(d) * (r + 1), at + ": len(R/Q) = d(r+1)");
      t.require(col_q == series_tail(d, r, 0), at + ": len(R/Q) = full series sum");
      t.require(value_of(rep, "colength_I") == series_tail(d, r, r + 1),
                at + ": len(I/Q) = series tail from r+1");
      for (int n = 1; n <= qs.n_max; ++n)
        t.require(qs.lengths[n - 1] ==
                      series_tail(d, r, static_cast<long>(n + 1) * (r + 1)),
                  at + ": L(" + std::to_string(n) + ") = series tail from " +
                      std::to_string((n + 1) * (r + 1)));
      // The quadratic closed form for q(1) comes from a descent that runs
      // for r <= d-1 only; beyond that the ideal is maximal from the start
      // and q(1) stays at pg = C(d,3).  The two agree on r in {d-2, d-1}.
      long q1 = r <= d - 1 ? binom(d - 1, 3) +
                                 static_cast<long>(r) * (2 * d - r - 3) / 2
                           : binom(d, 3);
      t.require(qs.q[1] == q1,
                at + ": q(1) = " + std::to_string(q1) +
                    (r <= d - 1 ? " (descent closed form)" : " (= pg)"));
      int expected = (d - 1 + r) / (r + 1);  // ceil((d-1)/(r+1))
      t.require(qs.nr == expected, at + ": nr = ceil((d-1)/(r+1))");
      t.require(qs.br == expected, at + ": br = ceil((d-1)/(r+1))");
      t.require((qs.br == 1) == (r >= d - 2),
                at + ": maximal-from-the-start exactly when r >= d-2");
    }
  return t;
}

// ---------------------------------------------------------------------------
// Criterion 3: the Veronese-subring family, over the rationals and over
// F_32003, with the two runs agreeing detail for detail.

Tally criterion_3() {
  Tally t;
  for (int g = 2; g <= 3; ++g) {
    const std::string p = "g=" + std::to_string(g);
    const auto& rq = instances().get("veronese", p, "rationals");
    const auto& rf = instances().get("veronese", p, "fp:32003");
    for (const FamilyReport* rep : {&rq, &rf}) {
      require_report(t, *rep);
      const std::string at = where(*rep);
      const auto& qs = *rep->qseq;
      t.require(value_of(*rep, "colength_I") == g, at + ": len(A/I) = g");
      t.require(value_of(*rep, "colength_Q") == 4L * g - 2, at + ": len(A/Q) = 4g-2");
      t.require(value_of(*rep, "dependence_degree") == 2,
                at + ": monic dependence over the (g+1)-st power at degree 2");
      for (int n = 1; n <= qs.n_max; ++n)
        t.require(qs.lengths[n - 1] == (n == g ? 1 : 0),
                  at + ": L(" + std::to_string(n) + ") is the unit jump at n=g");
      for (int n = 0; n <= qs.n_max; ++n)
        t.require(qs.q[n] == std::max<long>(g - n, 0),
                  at + ": q(" + std::to_string(n) + ") = max(g-n,0)");
      t.require(qs.nr == 1, at + ": nr = 1");
      t.require(qs.br == g + 1 && qs.br == qs.pg + 1, at + ": br = g+1 = pg+1");
    }
    t.require(rq.qseq->pg == rf.qseq->pg && rq.qseq->lengths == rf.qseq->lengths &&
                  rq.qseq->q == rf.qseq->q && rq.qseq->nr == rf.qseq->nr &&
                  rq.qseq->br == rf.qseq->br,
              "veronese " + p + ": q-sequences identical over both fields");
    t.require(rq.values == rf.values,
              "veronese " + p + ": reported values identical over both fields");
    bool same = rq.checks.size() == rf.checks.size();
    for (size_t i = 0; same && i < rq.checks.size(); ++i)
      same = rq.checks[i].id == rf.checks[i].id &&
             rq.checks[i].pass == rf.checks[i].pass;
    t.require(same, "veronese " + p + ": same checks pass over both fields");
  }
  return t;
}

// ---------------------------------------------------------------------------
// Criterion 4: cross-oracle stabilization.  The stabilized q of the (4,1)
// blowup family must equal the geometric genus of the contracted model,
// computed on the curve side with no closure arithmetic at all.

Tally criterion_4() {
  Tally t;
  const auto& rep = instances().get("blowup", "d=4 r=1");
  require_report(t, rep);
  auto down = pg_blowdown(4, 1);
  t.require(down.has_value(), "pg_blowdown(4,1) admits the closed form");
  t.require(down.has_value() && *down == 3, "pg_blowdown(4,1) = 3");
  t.require(value_of(rep, "pg_blowdown") == 3,
            "blowup d=4 r=1: reported blowdown genus is 3");
  t.require(rep.qseq->q_inf == 3, "blowup d=4 r=1: q_inf = 3");
  return t;
}

// ---------------------------------------------------------------------------
// Criterion 5: cycle lattice.  Exhaustive enumeration of connected
// negative-definite dual graphs on up to five vertices with weights in
// [-4,-1]; negative definiteness forces every edge multiplicity below 4
// (m^2 < w_i w_j <= 16), so multiplicities 0..3 cover everything in range.
// Genera alternate over {0,1}; they do not enter either cycle algorithm.
// The generator prunes on leading principal minors (Sylvester), and each
// surviving matrix is re-validated through the library's own connectivity
// and definiteness predicates before the comparison runs.

struct LatticeSweep {
  int n = 0;
  long m[5][5] = {};
  long graphs = 0;
  long disagreements = 0;
  std::string first;

  long det_leading(int k) const {
    long a[5][5];
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a[i][j] = m[i][j];
    long prev = 1, sign = 1;
    for (int p = 0; p < k; ++p) {
      if (a[p][p] == 0) {
        int s = -1;
        for (int i = p + 1; i < k; ++i)
          if (a[i][p] != 0) {
            s = i;
            break;
          }
        if (s < 0) return 0;
        for (int j = 0; j < k; ++j) std::swap(a[p][j], a[s][j]);
        sign = -sign;
      }
      for (int i = p + 1; i < k; ++i)
        for (int j = p + 1; j < k; ++j)
          a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
      prev = a[p][p];
    }
    return sign * a[k - 1][k - 1];
  }

  bool connected_mask() const {
    unsigned seen = 1, frontier = 1;
    while (frontier) {
      unsigned next = 0;
      for (int i = 0; i < n; ++i)
        if (frontier >> i & 1)
          for (int j = 0; j < n; ++j)
            if (m[i][j] > 0 && !(seen >> j & 1)) {
              next |= 1u << j;
              seen |= 1u << j;
            }
      frontier = next;
    }
    return seen == (1u << n) - 1;
  }

  std::string describe() const {
    std::string s = "graph #" + std::to_string(graphs) + " [diag";
    for (int i = 0; i < n; ++i) s += " " + std::to_string(m[i][i]);
    s += "; edges";
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (m[i][j] > 0)
          s += " " + std::to_string(i) + "-" + std::to_string(j) + "x" +
               std::to_string(m[i][j]);
    return s + "]";
  }

  void fail(const std::string& what) {
    ++disagreements;
    if (first.empty()) first = describe() + ": " + what;
  }

  void leaf() {
    if (!connected_mask()) return;
    ++graphs;
    std::vector<GraphVertex> vs;
    std::vector<GraphEdge> es;
    for (int i = 0; i < n; ++i)
      vs.push_back({i, i % 2, static_cast<int>(m[i][i])});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (m[i][j] > 0) es.push_back({i, j, static_cast<int>(m[i][j])});
    auto g = DualGraph::make(std::move(vs), std::move(es));
    if (!g->connected() || !g->negative_definite()) {
      fail("library disagrees with the generator about shape");
      return;
    }
    auto fc = laufer_fundamental_cycle(g);
    // Bounding each coordinate by the incremental result is sound: the true
    // coefficientwise minimum lies under any anti-nef cycle, so a wrong
    // incremental answer in either direction still shows up inside the box.
    auto search = minimal_anti_nef_bruteforce(g, fc.z.coeffs());
    if (!search.minimal.has_value())
      fail("no anti-nef cycle inside the product box");
    else if (!search.minimal_is_anti_nef)
      fail("coefficientwise minimum is not itself anti-nef");
    else if (!(*search.minimal == fc.z))
      fail("incremental cycle " + fc.z.to_string() +
           " differs from exhaustive minimum " + search.minimal->to_string());
  }

  void rec(int k) {
    if (k == n) {
      leaf();
      return;
    }
    for (long w = -4; w <= -1; ++w) {
      m[k][k] = w;
      std::vector<long> mult(k, 0);
      for (;;) {
        bool admissible = true;
        for (int i = 0; i < k && admissible; ++i)
          admissible = mult[i] * mult[i] < m[i][i] * w;
        if (admissible) {
          for (int i = 0; i < k; ++i) m[i][k] = m[k][i] = mult[i];
          long det = det_leading(k + 1);
          if (((k + 1) % 2 == 0) ? det > 0 : det < 0) rec(k + 1);
        }
        int pos = 0;
        while (pos < k && mult[pos] == 3) mult[pos++] = 0;
        if (pos == k) break;
        ++mult[pos];
      }
    }
    for (int i = 0; i < k; ++i) m[i][k] = m[k][i] = 0;
  }
};

Tally criterion_5() {
  Tally t;
  LatticeSweep sweep;
  for (sweep.n = 1; sweep.n <= 5; ++sweep.n) sweep.rec(0);
  t.require(sweep.disagreements == 0,
            sweep.first.empty() ? "cycle comparison" : sweep.first);
  // Census pin: the count is determined by the fixed enumeration range, so a
  // drift here means the generator itself regressed.
  t.require(sweep.graphs == 1286091,
            "graph census: found " + std::to_string(sweep.graphs) +
                ", expected 1286091");
  t.absorb(sweep.graphs - 1);

  for (int d = 3; d <= 5; ++d)
    for (int r = 1; r <= 3; ++r) {
      const auto& rep = instances().get(
          "star", "d=" + std::to_string(d) + " r=" + std::to_string(r));
      require_report(t, rep);
      t.require(value_of(rep, "pa_z_x") ==
                    static_cast<long>(d - 1) * (d - 2) / 2,
                where(rep) + ": p_a(Z_X) = (d-1)(d-2)/2");
    }
  return t;
}

// ---------------------------------------------------------------------------
// Criterion 6: bound invariants across every computed instance, plus the
// closed-form case bounds recomputed from scratch.

Tally criterion_6() {
  Tally t;
  for (const auto& rep : instances().reports) {
    if (!rep.qseq) continue;
    const auto& qs = *rep.qseq;
    const std::string at = where(rep);
    t.require(qs.nr <= qs.br, at + ": nr <= br");
    t.require(qs.br <= qs.pg + 1, at + ": br <= pg+1");
    t.require(qs.pg >= binom(qs.nr, 2), at + ": pg >= C(nr,2)");
  }
  for (int d = 3; d <= 5; ++d)
    for (int r = 1; r <= 3; ++r) {
      const auto& rep = instances().get(
          "blowup", "d=" + std::to_string(d) + " r=" + std::to_string(r));
      long g = static_cast<long>(d - 1) * (d - 2) / 2;
      long bound = upper_bracket_frac(2 * g - 2, d) + 1;
      t.require(rep.qseq->br <= bound,
                where(rep) + ": br <= [[ (2g-2)/d ]] + 1 = " + std::to_string(bound));
      t.require(value_of(rep, "br_bound_orthogonal") == bound,
                where(rep) + ": library bound agrees with the direct formula");
    }
  for (int d = 3; d <= 10; ++d)
    t.require(curve_br_bounds(PlaneCurve{d}).bound_general == d - 1,
              "plane degree " + std::to_string(d) + ": gonality-case bound = d-1");
  for (int g = 2; g <= 6; ++g)
    for (int b = 1; b <= 3; ++b)
      t.require(curve_br_bounds(Hyperelliptic{g, b}).bound_general == g + 1,
                "hyperelliptic g=" + std::to_string(g) + " b=" + std::to_string(b) +
                    ": gonality-case bound = g+1");
  CompleteIntersection ci{{2, 2}};
  t.require(curve_a_invariant(ci) == 0, "CI(2,2): a-invariant = 0");
  t.require(curve_br_bounds(ci).nr_maximal_prediction == 2,
            "CI(2,2): predicted maximal nr = a+2 = 2");
  t.require(curve_br_bounds(ci).bound_general == 2,
            "CI(2,2): gonality-case bound = 2");
  return t;
}

// ---------------------------------------------------------------------------
// Criterion 7: identity suite.  Second differences on every reconstructed
// report, Riemann-Roch on every curve model with cohomology tables, and
// arithmetic-genus additivity on 1000 seeded random cycle pairs per graph.

Tally criterion_7() {
  Tally t;
  for (const auto& rep : instances().reports) {
    if (!rep.qseq) continue;
    const auto& qs = *rep.qseq;
    bool ok = true;
    for (int n = 1; n < qs.n_max; ++n)
      ok = ok && qs.q[n + 1] + qs.q[n - 1] - 2 * qs.q[n] == qs.lengths[n - 1];
    t.require(ok, where(rep) + ": second-difference identity");
    t.absorb(std::max(qs.n_max - 1, 0));
  }

  std::vector<CurveModel> models;
  for (int d = 3; d <= 10; ++d) models.push_back(PlaneCurve{d});
  for (int g = 2; g <= 6; ++g)
    for (int b = 1; b <= 3; ++b) models.push_back(Hyperelliptic{g, b});
  for (const auto& c : models) {
    long g = curve_genus(c);
    long deg = curve_deg_d(c);
    int hi = static_cast<int>(curve_a_invariant(c)) + 4;
    bool ok = true;
    for (int n = 0; n <= hi; ++n) {
      H01 h = curve_h0_h1(c, n);
      ok = ok && h.h0 - h.h1 == deg * n - g + 1;
    }
    t.require(ok, curve_describe(c) + ": h0 - h1 = n deg - g + 1 on n=0.." +
                      std::to_string(hi));
    t.absorb(hi);
  }

  std::vector<DualGraph::Ptr> graphs;
  for (int d = 3; d <= 5; ++d)
    for (int r = 1; r <= 3; ++r) graphs.push_back(build_star_graph(d, r).graph);
  graphs.push_back(DualGraph::make({{0, 1, -3}}, {}));
  graphs.push_back(DualGraph::make({{0, 0, -2}, {1, 1, -2}, {2, 0, -2}},
                                   {{0, 1, 1}, {1, 2, 1}}));
  graphs.push_back(DualGraph::make(
      {{0, 0, -2}, {1, 0, -2}, {2, 0, -2}, {3, 0, -2}},
      {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}));
  graphs.push_back(DualGraph::make({{0, 1, -2}, {1, 0, -4}}, {{0, 1, 2}}));

  std::mt19937_64 rng(97);
  for (size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    auto random_cycle = [&] {
      std::vector<long> c(g->size());
      bool nonzero = false;
      for (auto& x : c) {
        x = static_cast<long>(rng() % 7);
        nonzero = nonzero || x > 0;
      }
      if (!nonzero) c[0] = 1;
      return Cycle(g, std::move(c));
    };
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      Cycle y1 = random_cycle();
      Cycle y2 = random_cycle();
      ok = arithmetic_genus(y1 + y2) ==
           arithmetic_genus(y1) + arithmetic_genus(y2) + intersect(y1, y2) - 1;
    }
    t.require(ok, "additivity of p_a on graph " + std::to_string(gi) + " of " +
                      std::to_string(graphs.size()));
    t.absorb(999);
  }
  return t;
}

struct Criterion {
  int number;
  const char* headline;
  Tally (*fn)();
};

constexpr Criterion kCriteria[] = {
    {1, "maximal-ideal cones d=3..6: q(n) = C(d-n,3) and nr = br = d-1",
     criterion_1},
    {2,
     "blowup families d=3..5, r=1..3: series lengths, q(1) closed form, "
     "nr = br = ceil((d-1)/(r+1)), dichotomy at r = d-2",
     criterion_2},
    {3,
     "veronese g=2,3: closure jump certified and identical over rationals "
     "and fp:32003",
     criterion_3},
    {4, "blowup d=4 r=1: stabilized q equals the blowdown genus 3", criterion_4},
    {5,
     "incremental fundamental cycle matches the exhaustive minimum on all "
     "1286091 small graphs; star families d=3..5, r=1..3 verified",
     criterion_5},
    {6,
     "nr <= br <= pg+1, pg >= C(nr,2) across every instance; orthogonal, "
     "gonality and complete-intersection case bounds",
     criterion_6},
    {7,
     "second differences, Riemann-Roch, and p_a additivity on 1000 random "
     "cycle pairs per graph",
     criterion_7},
};

}  // namespace

bool run_acceptance(std::ostream& out, const AcceptanceOptions& opt) {
  if (opt.only && (*opt.only < 1 || *opt.only > 7))
    throw InputError("criterion number must be between 1 and 7");

  bool all = true;
  int ran = 0, passed = 0;
  for (const auto& c : kCriteria) {
    if (opt.only && *opt.only != c.number) continue;
    ++ran;
    auto t0 = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = c.fn();
    } catch (const std::exception& e) {
      t.pass = false;
      t.first_failure = std::string("aborted: ") + e.what();
    }
    std::fprintf(stderr, "[timing] criterion %d: %.2fs\n", c.number,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               t0)
                     .count());
    if (t.pass) {
      ++passed;
      out << "criterion " << c.number << ": pass — " << c.headline << " ("
          << t.count << " checks)\n";
    } else {
      all = false;
      out << "criterion " << c.number << ": FAIL — " << t.first_failure << "\n";
    }
  }
  out << "acceptance: " << passed << "/" << ran << " criteria passed\n";
  return all;
}

}  // namespace nrcalc
