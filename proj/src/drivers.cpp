#include "nrcalc/drivers.hpp"

#include <algorithm>
#include <sstream>

#include "nrcalc/closure.hpp"
#include "nrcalc/curve.hpp"
#include "nrcalc/cycles.hpp"
#include "nrcalc/errors.hpp"
#include "nrcalc/graph_io.hpp"
#include "nrcalc/ideal.hpp"
#include "nrcalc/qseq.hpp"
#include "nrcalc/ring.hpp"

namespace nrcalc {

namespace {

std::string seq_str(const std::vector<long>& v) {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ")";
  return out.str();
}

// Coefficient of t^j in (1 + ... + t^(d-1))(1 + ... + t^r) and the tail sums
// beyond a starting degree: the blowup quotient lengths in closed form.
long stairs_coeff(int d, int r, long j) {
  long c = 0;
  for (long u = 0; u < d; ++u)
    if (j - u >= 0 && j - u <= r) ++c;
  return c;
}

long stairs_tail(int d, int r, long from) {
  long c = 0;
  for (long j = from; j <= static_cast<long>(d) - 1 + r; ++j) c += stairs_coeff(d, r, j);
  return c;
}

// The identities every q-sequence must satisfy, re-verified on the final
// report so they are visible per family.
void add_qseq_checks(FamilyReport& rep, const QSequenceReport& qs) {
  bool second = true;
  for (int n = 1; n < qs.n_max; ++n)
    second = second &&
             (qs.q[n + 1] + qs.q[n - 1] - 2 * qs.q[n] == qs.lengths[n - 1]);
  rep.check("qseq.second_difference", second,
            "q(n+1) + q(n-1) - 2 q(n) = L(n) at every interior level");

  bool mono = true;
  for (int n = 0; n < qs.n_max; ++n) mono = mono && qs.q[n + 1] <= qs.q[n];
  rep.check("qseq.nonincreasing", mono, "q " + seq_str(qs.q));

  rep.check("qseq.nr_le_br", qs.nr <= qs.br,
            "nr=" + std::to_string(qs.nr) + " br=" + std::to_string(qs.br));
  rep.check("qseq.br_le_pg_plus_one", qs.br <= qs.pg + 1,
            "br=" + std::to_string(qs.br) + " pg=" + std::to_string(qs.pg));
  rep.check("qseq.pg_ge_nr_choose_2", qs.pg >= binom(qs.nr, 2),
            "pg=" + std::to_string(qs.pg) + " C(nr,2)=" + std::to_string(binom(qs.nr, 2)));

  bool stable = true;
  for (int n = std::max(qs.br - 1, 0); n <= qs.n_max; ++n)
    stable = stable && qs.q[n] == qs.q_inf;
  rep.check("qseq.stable_from_br_minus_1", stable,
            "q levels off at q_inf=" + std::to_string(qs.q_inf));
}

void add_riemann_roch_check(FamilyReport& rep, const CurveModel& curve, int n_hi) {
  long g = curve_genus(curve);
  long deg = curve_deg_d(curve);
  bool ok = true;
  for (int n = 0; n <= n_hi; ++n) {
    H01 h = curve_h0_h1(curve, n);
    ok = ok && (h.h0 - h.h1 == deg * n - g + 1);
  }
  rep.check("curve.riemann_roch", ok,
            "h0 - h1 = n deg - g + 1 for n = 0.." + std::to_string(n_hi));
}

template <ScalarField K>
FamilyReport hypersurface_impl(int d, const ClosureRunOptions& opt) {
  auto ring = RingPresentation<K>::fermat_hypersurface(d, opt.field);
  auto fam = ClosureFamily<K>::maximal_ideal(ring, opt.seed);
  int n_max = opt.n_max.value_or(fam.default_n_max());

  FamilyReport rep;
  rep.family = "hypersurface";
  rep.params = "d=" + std::to_string(d);
  rep.field = opt.field.describe();
  rep.seed = opt.seed;
  rep.seeded = true;
  rep.qseq = fam.run(n_max);

  long mult = fam.pair_times_closure_colength(0);
  rep.value("colength_Q", mult);
  rep.value("resamples", fam.resamples());

  rep.check("closure.reduction_certified", fam.has_reduction(),
            "two sampled forms certified on the whole-grade window");
  rep.check("closure.multiplicity", mult == d,
            "len(R/Q)=" + std::to_string(mult) + " equals d");

  PlaneCurve curve{d};
  rep.check("curve.pg_match", rep.qseq->pg == curve_pg(curve),
            "pg=" + std::to_string(rep.qseq->pg));
  bool qmatch = true;
  for (int k = 0; k <= n_max; ++k)
    qmatch = qmatch && rep.qseq->q[k] == curve_q_k_maximal(curve, k);
  rep.check("curve.q_values_match", qmatch,
            "q " + seq_str(rep.qseq->q) + " equals the cohomology tail sums");
  add_riemann_roch_check(rep, curve, 2 * d + 2);
  add_qseq_checks(rep, *rep.qseq);
  return rep;
}

template <ScalarField K>
FamilyReport blowup_impl(int d, int r, const ClosureRunOptions& opt) {
  auto ring = RingPresentation<K>::fermat_hypersurface(d, opt.field);
  auto fam = ClosureFamily<K>::blowup(ring, r, opt.seed);
  int n_max = opt.n_max.value_or(fam.default_n_max());

  FamilyReport rep;
  rep.family = "blowup";
  rep.params = "d=" + std::to_string(d) + " r=" + std::to_string(r);
  rep.field = opt.field.describe();
  rep.seed = opt.seed;
  rep.seeded = true;
  rep.qseq = fam.run(n_max);

  long col_q = fam.pair_times_closure_colength(0);
  long col_i = col_q - fam.closure_colength(1);
  rep.value("colength_Q", col_q);
  rep.value("colength_I", col_i);
  rep.value("resamples", fam.resamples());

  rep.check("closure.reduction_certified", fam.has_reduction(),
            "linear form plus sampled degree-(r+1) form certified");
  rep.check("blowup.colength_Q", col_q == static_cast<long>(d) * (r + 1),
            "len(R/Q)=" + std::to_string(col_q) + " equals d(r+1)");
  rep.check("blowup.colength_I", col_i == stairs_tail(d, r, r + 1),
            "len(I/Q)=" + std::to_string(col_i) + " equals the staircase tail");

  bool stair = true;
  for (int n = 1; n <= n_max; ++n)
    stair = stair && rep.qseq->lengths[n - 1] == stairs_tail(d, r, (n + 1L) * (r + 1));
  rep.check("blowup.staircase_lengths", stair,
            "L " + seq_str(rep.qseq->lengths) + " follows the series tails");

  // The descent recursion q(1; r) = q(1; r-1) + d-r-1 holds for r <= d-1
  // and sums to the quadratic below; past that the ideal is maximal from
  // the start (r >= d-2), so q(1) stays at pg.  Both expressions agree on
  // the overlap r in {d-2, d-1}.
  long q1_formula =
      r <= d - 1
          ? binom(d - 1, 3) + static_cast<long>(r) * (2 * d - r - 3) / 2
          : binom(d, 3);
  rep.check("blowup.q1_closed_form", rep.qseq->q[1] == q1_formula,
            "q(1)=" + std::to_string(rep.qseq->q[1]) + " expected " +
                std::to_string(q1_formula));
  int nr_formula = (d - 1 + r) / (r + 1);
  rep.check("blowup.nr_closed_form",
            rep.qseq->nr == nr_formula && rep.qseq->br == nr_formula,
            "nr=br=" + std::to_string(nr_formula));
  rep.check("blowup.pg_ideal_dichotomy", (rep.qseq->br == 1) == (r >= d - 2),
            "br=1 exactly when r >= d-2");

  if (auto pg_down = pg_blowdown(d, r)) {
    rep.value("pg_blowdown", *pg_down);
    rep.check("blowup.q_inf_blowdown", rep.qseq->q_inf == *pg_down,
              "q_inf=" + std::to_string(rep.qseq->q_inf) +
                  " equals the blowdown geometric genus");
  }

  // Resolution-side predictions for the same datum.
  auto star = build_star_graph(d, r);
  auto zp = z_perp_and_B(star.z_r, star.e0);
  rep.value("s_star", zp.s_star);
  rep.check("graph.descent_bound", zp.descent_bound,
            "-Z_B.E0=" + std::to_string(-zp.zb_dot_e0) +
                " >= -Z_X^2=" + std::to_string(-zp.zx_self));
  if (zp.s_star <= n_max) {
    bool stable = true;
    for (int n = static_cast<int>(zp.s_star); n <= n_max; ++n)
      stable = stable && rep.qseq->q[n] == rep.qseq->q_inf;
    rep.check("graph.q_stable_from_s_star", stable,
              "q levels off from s*=" + std::to_string(zp.s_star));
  }

  PlaneCurve curve{d};
  long br_bound = curve_br_bounds(curve).bound_orthogonal;
  rep.value("br_bound_orthogonal", br_bound);
  rep.check("bound.br_le_orthogonal", rep.qseq->br <= br_bound,
            "br=" + std::to_string(rep.qseq->br) + " <= " + std::to_string(br_bound));
  rep.check("curve.pg_match", rep.qseq->pg == curve_pg(curve),
            "pg=" + std::to_string(rep.qseq->pg));
  add_riemann_roch_check(rep, curve, 2 * d + 2);
  add_qseq_checks(rep, *rep.qseq);
  return rep;
}

template <ScalarField K>
FamilyReport veronese_impl(int g, const ClosureRunOptions& opt) {
  auto ring = RingPresentation<K>::veronese(g, opt.field);
  auto fam = ClosureFamily<K>::vero(ring);
  int n_max = opt.n_max.value_or(fam.default_n_max());

  FamilyReport rep;
  rep.family = "veronese";
  rep.params = "g=" + std::to_string(g);
  rep.field = opt.field.describe();
  rep.seed = opt.seed;
  rep.seeded = true;
  rep.qseq = fam.run(n_max);

  long col_i = ideal_colength(fam.ideal());
  long col_q = fam.pair_times_closure_colength(0);
  rep.value("colength_I", col_i);
  rep.value("colength_Q", col_q);

  rep.check("veronese.colength_I", col_i == g,
            "len(A/I)=" + std::to_string(col_i) + " equals g");
  rep.check("veronese.colength_Q", col_q == 4L * g - 2,
            "len(A/Q)=" + std::to_string(col_q) + " equals 4g-2");
  rep.check("veronese.first_power_absorbed",
            is_reduction_certificate(*ring, fam.ideal(), fam.reduction(), 1),
            "I^2 = QI certified by filtered colengths");

  const auto& w = fam.vero_extra_generator();
  int t = g + 1;
  bool jump =
      fam.closure_component(t, t).dim() == fam.ideal().power_component(t, t).dim() + 1 &&
      fam.closure_component(t, t).contains(w.nf) &&
      !fam.ideal().power_component(t, t).contains(w.nf);
  rep.check("veronese.closure_jump", jump,
            "the closure of I^(g+1) gains exactly the one non-power element");

  rep.check("veronese.prefilter_admits_witness",
            vero_closure_prefilter(*ring, w, t).outcome == PrefilterOutcome::NotRejected,
            "the x-part degree screen lets the closure element through");

  auto cert = find_dependence(*ring, fam.ideal(), t, w, opt.u_max);
  rep.value("dependence_degree", cert ? cert->u : -1);
  rep.check("veronese.dependence_certificate", cert.has_value() && cert->u == 2,
            cert ? "monic degree-" + std::to_string(cert->u) +
                       " equation over I^(g+1), replayed exactly"
                 : "no dependence found up to degree " + std::to_string(opt.u_max));

  rep.check("veronese.row_reduction_excludes", fam.pair_module_excludes(g, w),
            "the witness reduces to a nonzero remainder against Q cl(I^g)");

  bool lengths_ok = true;
  for (int n = 1; n <= n_max; ++n)
    lengths_ok = lengths_ok && rep.qseq->lengths[n - 1] == (n == g ? 1 : 0);
  rep.check("veronese.length_spike", lengths_ok,
            "L " + seq_str(rep.qseq->lengths) + " is the single unit jump at n=g");

  bool q_ok = true;
  for (int n = 0; n <= n_max; ++n)
    q_ok = q_ok && rep.qseq->q[n] == std::max<long>(g - n, 0);
  rep.check("veronese.q_closed_form", q_ok,
            "q " + seq_str(rep.qseq->q) + " equals max(g-n, 0)");
  rep.check("veronese.nr_br_extremes",
            rep.qseq->nr == 1 && rep.qseq->br == g + 1 &&
                rep.qseq->br == rep.qseq->pg + 1,
            "nr=1 while br=g+1 attains the pg+1 ceiling");

  add_riemann_roch_check(rep, Hyperelliptic{g, g}, 2 * g + 2);
  add_qseq_checks(rep, *rep.qseq);
  return rep;
}

}  // namespace

FieldMode parse_field(const std::string& spec) {
  if (spec == "q" || spec == "Q" || spec == "rationals") return FieldMode::rationals();
  if (spec.rfind("fp:", 0) == 0) {
    const std::string digits = spec.substr(3);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("field spec '" + spec + "' needs fp:<prime>");
    unsigned long p = 0;
    try {
      p = std::stoul(digits);
    } catch (const std::exception&) {
      throw InputError("field spec '" + spec + "' needs fp:<prime>");
    }
    if (p > 2147483647UL) throw InputError("prime field modulus too large");
    return FieldMode::prime(static_cast<std::uint32_t>(p));
  }
  throw InputError("unknown field spec '" + spec + "' (use q or fp:<prime>)");
}

FamilyReport run_hypersurface_family(int d, const ClosureRunOptions& opt) {
  if (d < 3) throw InputError("hypersurface family needs d >= 3");
  if (opt.field.divides(d))
    throw InputError("field characteristic divides the defining degree d");
  if (opt.field.kind == FieldMode::Kind::Rationals)
    return hypersurface_impl<Rat>(d, opt);
  return hypersurface_impl<Fp>(d, opt);
}

FamilyReport run_blowup_family(int d, int r, const ClosureRunOptions& opt) {
  if (d < 3) throw InputError("blowup family needs d >= 3");
  if (r < 1) throw InputError("blowup family needs r >= 1");
  if (opt.field.divides(d))
    throw InputError("field characteristic divides the defining degree d");
  if (opt.field.kind == FieldMode::Kind::Rationals) return blowup_impl<Rat>(d, r, opt);
  return blowup_impl<Fp>(d, r, opt);
}

FamilyReport run_veronese_family(int g, const ClosureRunOptions& opt) {
  if (g < 2) throw InputError("veronese family needs g >= 2");
  if (opt.field.divides(2L * g + 2))
    throw InputError("field characteristic divides 2g+2");
  if (opt.field.kind == FieldMode::Kind::Rationals) return veronese_impl<Rat>(g, opt);
  return veronese_impl<Fp>(g, opt);
}

FamilyReport run_hyperelliptic_bounds(int g, int b) {
  Hyperelliptic curve{g, b};
  curve_validate(curve);

  FamilyReport rep;
  rep.family = "hyperelliptic";
  rep.params = "g=" + std::to_string(g) + " b=" + std::to_string(b);

  auto bounds = curve_br_bounds(curve);
  rep.value("genus", curve_genus(curve));
  rep.value("deg_D", curve_deg_d(curve));
  rep.value("pg", curve_pg(curve));
  rep.value("q_1", curve_q_k_maximal(curve, 1));
  rep.value("a_invariant", curve_a_invariant(curve));
  rep.value("gonality", bounds.gon.value);
  rep.value("br_bound_orthogonal", bounds.bound_orthogonal);
  rep.value("br_bound_general", bounds.bound_general);
  rep.value("nr_maximal_prediction", bounds.nr_maximal_prediction);

  rep.check("bound.general_closed_form", bounds.bound_general == g + 1,
            "[[ (2g-2)/2 ]] + 1 = g+1 for the degree-2 pencil");
  long a = curve_a_invariant(curve);
  rep.check("curve.a_invariant_boundary",
            curve_h0_h1(curve, static_cast<int>(a)).h1 > 0 &&
                curve_h0_h1(curve, static_cast<int>(a) + 1).h1 == 0,
            "h1 vanishes exactly after n=a");
  add_riemann_roch_check(rep, curve, 2 * g + 4);
  return rep;
}

FamilyReport run_ci_bounds(const std::vector<int>& degrees) {
  CompleteIntersection curve{degrees};
  curve_validate(curve);

  FamilyReport rep;
  rep.family = "ci";
  std::ostringstream params;
  params << "degrees=";
  for (size_t i = 0; i < degrees.size(); ++i) params << (i ? "x" : "") << degrees[i];
  rep.params = params.str();

  auto bounds = curve_br_bounds(curve);
  long a = curve_a_invariant(curve);
  long deg = curve_deg_d(curve);
  long genus = curve_genus(curve);
  rep.value("degree", deg);
  rep.value("genus", genus);
  rep.value("a_invariant", a);
  rep.value("gonality_lower", bounds.gon.value);
  rep.value("br_bound_general", bounds.bound_general);
  rep.value("nr_maximal_prediction", bounds.nr_maximal_prediction);

  rep.check("curve.genus_degree_consistency", genus == deg * a / 2 + 1,
            "2g - 2 = deg * a for the hyperplane polarization");
  rep.check("bound.prediction_is_a_plus_2", bounds.nr_maximal_prediction == a + 2,
            "predicted maximal nr is a+2 = " + std::to_string(a + 2));
  return rep;
}

FamilyReport run_star_family(int d, int r) {
  auto star = build_star_graph(d, r);

  FamilyReport rep;
  rep.family = "star";
  rep.params = "d=" + std::to_string(d) + " r=" + std::to_string(r);

  long g = star.graph->vertex(star.e0).genus;
  rep.value("vertices", star.graph->size());
  rep.value("central_genus", g);
  rep.value("z_x_self", intersect(star.z_x, star.z_x));
  rep.value("pa_z_x", arithmetic_genus(star.z_x));
  rep.value("z_r_dot_c_r", star.z_r_dot_c_r);

  rep.check("graph.z_r_anti_nef", anti_nef(star.z_r), star.z_r.to_string());
  rep.check("graph.z_r_central_zero", intersect(star.z_r, star.e0) == 0,
            "Z_r.E0 = 0");
  bool tips = true;
  for (const auto& arm : star.arms) tips = tips && intersect(star.z_r, arm.back()) == -1;
  rep.check("graph.z_r_arm_tips", tips, "Z_r meets every arm tip in -1");
  rep.check("graph.pg_ideal_dichotomy", (star.z_r_dot_c_r == 0) == (r >= d - 2),
            "Z_r.C_r=" + std::to_string(star.z_r_dot_c_r) +
                " vanishes exactly when r >= d-2");
  rep.check("graph.z_x_self", intersect(star.z_x, star.z_x) == -d, "Z_X^2 = -d");
  rep.check("graph.pa_z_x", arithmetic_genus(star.z_x) == g,
            "p_a(Z_X) = (d-1)(d-2)/2");

  auto zp = z_perp_and_B(star.z_r, star.e0);
  rep.value("zb_dot_e0", zp.zb_dot_e0);
  rep.value("s_star", zp.s_star);
  rep.check("graph.z_plus_zb_anti_nef", zp.z_plus_zb_anti_nef,
            "Z_r + Z_B stays anti-nef");
  rep.check("graph.attach_pairing_one", zp.attach_pairing_one,
            "Z_B meets each outside neighbour of B in 1");
  rep.check("graph.descent_bound", zp.descent_bound,
            "-Z_B.E0=" + std::to_string(-zp.zb_dot_e0) +
                " >= -Z_X^2=" + std::to_string(-zp.zx_self));

  std::vector<long> dual(star.graph->size());
  for (int i = 0; i < star.graph->size(); ++i) dual[i] = -intersect(star.z_x, i);
  auto vanish = conelike_vanishing(star.graph, star.e0, dual, star.graph->size() <= 10);
  rep.value("dual_z_x_central", vanish.d_dot_e0);
  rep.value("central_threshold", vanish.threshold);
  if (vanish.enumerated && !vanish.cap_exceeded) {
    rep.check("graph.reachable_dichotomy", vanish.dichotomy_ok,
              std::to_string(vanish.cycles_seen) +
                  " reachable cycles split into central/rational-tree cases");
    if (vanish.vanishes)
      rep.check("graph.vanishing_inequalities", vanish.inequality_violations == 0,
                "V.D > 2 p_a(V) - 2 on every reachable cycle");
  }

  if (star.graph->size() <= 8) {
    auto search = minimal_anti_nef_bruteforce(star.graph, 6);
    rep.check("graph.minimal_matches_bruteforce",
              search.minimal.has_value() && search.minimal_is_anti_nef &&
                  *search.minimal == star.z_x,
              "incremental cycle equals the boxed exhaustive minimum");
  }
  return rep;
}

FamilyReport run_graph_file(const std::string& path) {
  auto bundle = load_graph_file(path);
  bundle.graph->require_resolution_shape();

  FamilyReport rep;
  rep.family = "graph";
  rep.params = "file=" + path;
  rep.value("vertices", bundle.graph->size());

  rep.check("graph.connected", bundle.graph->connected(), "");
  rep.check("graph.negative_definite", bundle.graph->negative_definite(),
            "leading principal minors alternate in sign");

  auto fc = laufer_fundamental_cycle(bundle.graph);
  rep.value("z_x_self", intersect(fc.z, fc.z));
  rep.value("pa_z_x", arithmetic_genus(fc.z));
  rep.check("graph.fundamental_anti_nef", anti_nef(fc.z), fc.z.to_string());

  double budget = 1;
  for (int i = 0; i < bundle.graph->size(); ++i) budget *= 6;
  if (budget <= 2e7) {
    auto search = minimal_anti_nef_bruteforce(bundle.graph, 6);
    rep.check("graph.minimal_matches_bruteforce",
              search.minimal.has_value() && search.minimal_is_anti_nef &&
                  *search.minimal == fc.z,
              "incremental cycle equals the boxed exhaustive minimum");
  }

  for (const auto& [name, cycle] : bundle.cycles) {
    bool an = anti_nef(cycle);
    std::string detail = cycle.to_string();
    if (cycle.is_positive())
      detail += "  p_a=" + std::to_string(arithmetic_genus(cycle));
    rep.check("graph.cycle_" + name + "_anti_nef", an, detail);
  }
  return rep;
}

}  // namespace nrcalc
