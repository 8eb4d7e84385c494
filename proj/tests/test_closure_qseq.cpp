#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "nrcalc/closure.hpp"
#include "nrcalc/curve.hpp"
#include "nrcalc/errors.hpp"
#include "nrcalc/field.hpp"
#include "nrcalc/ideal.hpp"
#include "nrcalc/qseq.hpp"
#include "nrcalc/ring.hpp"

using namespace nrcalc;

namespace {

// Coefficient of t^j in (1 + t + ... + t^(d-1)) (1 + t + ... + t^r), and the
// tail sums that the blowup quotient lengths must reproduce.
long stairs_coeff(int d, int r, int j) {
  long c = 0;
  for (int u = 0; u < d; ++u)
    if (j - u >= 0 && j - u <= r) ++c;
  return c;
}

long stairs_tail(int d, int r, int from) {
  long c = 0;
  for (int j = from; j <= d - 1 + r; ++j) c += stairs_coeff(d, r, j);
  return c;
}

}  // namespace

TEST_CASE("maximal-ideal family: quartic cone") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(4, fm);
  auto fam = ClosureFamily<Rat>::maximal_ideal(ring, /*seed=*/11);

  CHECK(fam.has_reduction());
  CHECK(fam.reduction().is_homogeneous());
  // Two general linear forms cut the cone down to deg-many points.
  CHECK(fam.pair_times_closure_colength(0) == 4);

  // Every power of the maximal ideal is integrally closed and spans whole
  // grades from n on.
  for (int n = 0; n <= 4; ++n)
    for (int t = 0; t <= 6; ++t) {
      CHECK(fam.closure_component(n, t).dim() == (t >= n ? ring->hilbert(t) : 0));
      if (t >= n) CHECK(fam.closure_component(n, t).same_space(
          fam.ideal().power_component(n, t)));
    }

  auto rep = fam.run(fam.default_n_max());
  CHECK(rep.pg == 4);
  CHECK(rep.lengths == std::vector<long>{2, 1, 0, 0});
  CHECK(rep.q == std::vector<long>{4, 1, 0, 0, 0});
  CHECK(rep.nr == 3);
  CHECK(rep.br == 3);
  CHECK(rep.q_inf == 0);
  // The curve-side closed form gives the same q-values.
  for (int k = 0; k <= 4; ++k) CHECK(rep.q[k] == curve_q_k_maximal(PlaneCurve{4}, k));
}

TEST_CASE("maximal-ideal family: cubic cone over both fields") {
  std::vector<long> q_rat, q_fp;
  {
    auto ring = RingPresentation<Rat>::fermat_hypersurface(3, FieldMode::rationals());
    auto fam = ClosureFamily<Rat>::maximal_ideal(ring, 5);
    auto rep = fam.run(3);
    q_rat = rep.q;
    CHECK(rep.nr == 2);
    CHECK(rep.br == 2);
    CHECK(rep.pg == 1);
    CHECK(rep.lengths == std::vector<long>{1, 0, 0});
  }
  {
    auto ring = RingPresentation<Fp>::fermat_hypersurface(3, FieldMode::prime(32003));
    auto fam = ClosureFamily<Fp>::maximal_ideal(ring, 5);
    auto rep = fam.run(3);
    q_fp = rep.q;
    CHECK(rep.nr == 2);
    CHECK(rep.br == 2);
  }
  CHECK(q_rat == q_fp);
  CHECK(q_rat == std::vector<long>{1, 0, 0, 0});
}

TEST_CASE("blowup family: telescoped powers match the generic engine") {
  FieldMode fm = FieldMode::rationals();
  for (auto [d, r] : {std::pair{3, 1}, std::pair{4, 2}}) {
    auto ring = RingPresentation<Rat>::fermat_hypersurface(d, fm);
    auto fam = ClosureFamily<Rat>::blowup(ring, r, /*seed=*/3);
    for (int s = 0; s <= 3; ++s)
      for (int t = 0; t <= 2 * (r + 1) + 3; ++t)
        CHECK(fam.closure_component(s, t).same_space(fam.ideal().power_component(s, t)));
  }
}

TEST_CASE("blowup family: lengths follow the staircase series") {
  FieldMode fm = FieldMode::rationals();
  for (auto [d, r] : {std::pair{3, 1}, std::pair{4, 1}, std::pair{4, 2}, std::pair{5, 2}}) {
    CAPTURE(d);
    CAPTURE(r);
    auto ring = RingPresentation<Rat>::fermat_hypersurface(d, fm);
    auto fam = ClosureFamily<Rat>::blowup(ring, r, /*seed=*/17);

    CHECK(fam.pair_times_closure_colength(0) == static_cast<long>(d) * (r + 1));
    // len(I / Q) = len(R/Q) - len(R/I) must equal the degree >= r+1 tail.
    long len_i = fam.closure_colength(1);
    CHECK(fam.pair_times_closure_colength(0) - len_i == stairs_tail(d, r, r + 1));

    auto rep = fam.run(fam.default_n_max());
    int nr_expected = (d - 1 + r) / (r + 1);
    CHECK(rep.nr == nr_expected);
    CHECK(rep.br == nr_expected);
    CHECK(rep.pg == binom(d, 3));
    // L(n) = tail of the staircase series beyond (n+1)(r+1).
    for (int n = 1; n <= rep.n_max; ++n)
      CHECK(rep.lengths[n - 1] == stairs_tail(d, r, (n + 1) * (r + 1)));
    // q(1) closed form, and the p_g-ideal dichotomy via br = 1.
    CHECK(rep.q[1] == binom(d - 1, 3) + static_cast<long>(r) * (2 * d - r - 3) / 2);
    CHECK((rep.br == 1) == (r >= d - 2));
  }
}

TEST_CASE("blowup family: q_inf matches the blowdown genus in its regime") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(4, fm);
  auto fam = ClosureFamily<Rat>::blowup(ring, 1, /*seed=*/23);
  auto rep = fam.run(fam.default_n_max());
  auto pg_oracle = pg_blowdown(4, 1);
  REQUIRE(pg_oracle.has_value());
  CHECK(rep.q_inf == *pg_oracle);
  CHECK(rep.q_inf == 3);
}

TEST_CASE("vero family: the full genus-2 story over the rationals") {
  FieldMode fm = FieldMode::rationals();
  const int g = 2;
  auto ring = RingPresentation<Rat>::veronese(g, fm);
  auto fam = ClosureFamily<Rat>::vero(ring);

  CHECK(ideal_colength(fam.ideal()) == g);
  CHECK_FALSE(fam.reduction().is_homogeneous());
  CHECK(fam.pair_times_closure_colength(0) == 4 * g - 2);
  CHECK(is_reduction_certificate(*ring, fam.ideal(), fam.reduction(), 1));

  // Closure jumps by exactly the one extra generator at level g+1.
  const auto& w = fam.vero_extra_generator();
  REQUIRE(w.grade);
  CHECK(*w.grade == g + 1);
  int t = g + 1;
  CHECK(fam.closure_component(g + 1, t).dim() ==
        fam.ideal().power_component(g + 1, t).dim() + 1);
  CHECK(fam.closure_component(g + 1, t).contains(w.nf));
  CHECK_FALSE(fam.ideal().power_component(g + 1, t).contains(w.nf));

  // Row reduction certifies w is not in Q closure(I^g) --- the length-1
  // quotient witness --- while w is certainly in Q closure(I^(g+1)) + S.
  CHECK(fam.pair_module_excludes(g, w));
  CHECK(fam.length_L(g) == 1);

  auto rep = fam.run(fam.default_n_max());
  CHECK(rep.pg == g);
  CHECK(rep.lengths == std::vector<long>{0, 1, 0, 0});
  CHECK(rep.q == std::vector<long>{2, 1, 0, 0, 0});
  CHECK(rep.nr == 1);
  CHECK(rep.br == g + 1);
  CHECK(rep.br == rep.pg + 1);
  CHECK(rep.q_inf == 0);
}

TEST_CASE("vero family: genus 3 over the prime field, both-field spot check") {
  const int g = 3;
  auto ring_fp = RingPresentation<Fp>::veronese(g, FieldMode::prime(32003));
  auto fam_fp = ClosureFamily<Fp>::vero(ring_fp);
  CHECK(ideal_colength(fam_fp.ideal()) == g);
  CHECK(fam_fp.pair_times_closure_colength(0) == 4 * g - 2);
  auto rep = fam_fp.run(fam_fp.default_n_max());
  CHECK(rep.pg == 3);
  CHECK(rep.lengths == std::vector<long>{0, 0, 1, 0, 0});
  CHECK(rep.q == std::vector<long>{3, 2, 1, 0, 0, 0});
  CHECK(rep.nr == 1);
  CHECK(rep.br == 4);

  // The rational-field run of the critical length agrees.
  auto ring_q = RingPresentation<Rat>::veronese(g, FieldMode::rationals());
  auto fam_q = ClosureFamily<Rat>::vero(ring_q);
  CHECK(fam_q.length_L(g) == 1);
  CHECK(fam_q.length_L(1) == 0);
}

TEST_CASE("vero family: closure prefilter and the sign involution") {
  FieldMode fm = FieldMode::rationals();
  for (int g : {2, 3}) {
    auto ring = RingPresentation<Rat>::veronese(g, fm);
    auto fam = ClosureFamily<Rat>::vero(ring);

    // x z^(g-1) has grade 2 <= g: any x-multiple is rejected outright.
    auto xz = ring->monomial_element(1, 0, g - 1);
    auto pre = vero_closure_prefilter(*ring, xz, 2);
    CHECK(pre.outcome == PrefilterOutcome::Rejected);
    // ... and indeed it is not in the (integrally closed) square.
    CHECK_FALSE(fam.closure_component(2, 2).contains(xz.nf));

    // w itself passes the screen at level g+1 (z-degree 0 <= 0).
    const auto& w = fam.vero_extra_generator();
    CHECK(vero_closure_prefilter(*ring, w, g + 1).outcome == PrefilterOutcome::NotRejected);

    // w times z^(2g) (a grade-2 element) has z-degree 2g > (g+3)-(g+1):
    // rejected at level g+3 by the z-degree screen.
    auto wz = ring->element(w.nf * ring->monomial_element(0, 0, 2 * g).nf);
    CHECK(vero_closure_prefilter(*ring, wz, g + 3).outcome == PrefilterOutcome::Rejected);
    // w times y^(2g) keeps z-degree 0 and genuinely sits in the closure at
    // level g+3, so the screen lets it through.
    auto wy = ring->element(w.nf * ring->monomial_element(0, 2 * g, 0).nf);
    CHECK(vero_closure_prefilter(*ring, wy, g + 3).outcome == PrefilterOutcome::NotRejected);
    // A pure power-type element defers to the power test.
    auto y2 = ring->monomial_element(0, 2 * g, 0);
    CHECK(vero_closure_prefilter(*ring, y2, 2).outcome == PrefilterOutcome::PowerTestSettles);

    // sigma negates exactly the x part and is an involution fixing the ideal.
    auto mixed = ring->element(xz.nf + y2.nf);
    auto sig = sigma_conjugate(*ring, mixed);
    CHECK(sig.nf.to_string() != mixed.nf.to_string());
    CHECK(sigma_conjugate(*ring, sig).nf.to_string() == mixed.nf.to_string());
    for (const auto& gen : fam.ideal().gens()) {
      auto im = sigma_conjugate(*ring, gen);
      int tg = *gen.grade;
      CHECK(fam.ideal().component(tg).contains(im.nf));
    }
  }
}

TEST_CASE("vero family: grade mismatch and bad inputs are refused") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::veronese(2, fm);
  auto fam = ClosureFamily<Rat>::vero(ring);
  auto w = fam.vero_extra_generator();
  CHECK_THROWS_AS(vero_closure_prefilter(*ring, w, 2), InputError);  // w has grade 3
  CHECK_THROWS_AS(fam.length_L(0), InputError);
  CHECK_THROWS_AS(fam.closure_component(-1, 0), InputError);

  auto standard = RingPresentation<Rat>::fermat_hypersurface(3, fm);
  auto mx = standard->monomial_element(0, 1, 0);
  CHECK_THROWS_AS(vero_closure_prefilter(*standard, mx, 1), InputError);
  CHECK_THROWS_AS(ClosureFamily<Rat>::vero(standard), InputError);
}

TEST_CASE("reduction sampling: certificates, determinism, exhaustion") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(3, fm);
  auto fam = ClosureFamily<Rat>::maximal_ideal(ring, 7);

  // Same seed, same pair; the sample is certified, so it is a reduction.
  auto fam2 = ClosureFamily<Rat>::maximal_ideal(ring, 7);
  CHECK(fam.reduction().q1.nf.to_string() == fam2.reduction().q1.nf.to_string());
  CHECK(fam.reduction().q2.nf.to_string() == fam2.reduction().q2.nf.to_string());

  // A pair with a common zero on the cone is never a reduction.
  ParameterPair<Rat> thin{ring->monomial_element(0, 1, 0),
                          ring->element(ring->monomial_element(0, 2, 0).nf)};
  for (int s = 1; s <= 3; ++s) CHECK_FALSE(is_reduction_certificate(*ring, fam.ideal(), thin, s));
  // A pair with a unit component is not even inside the ideal.
  MultiPoly<Rat> shifted = ring->monomial_element(0, 1, 0).nf;
  shifted = shifted + MultiPoly<Rat>(ring->vars(), make_mono(0, 0, 0), ring->one());
  ParameterPair<Rat> unit{ring->element(shifted), ring->monomial_element(0, 0, 1)};
  CHECK_FALSE(is_reduction_certificate(*ring, fam.ideal(), unit, 1));

  // The vero ideal's lowest-grade generators share the factor y^(g-1), so
  // sampled combinations can never be a system of parameters.
  auto vring = RingPresentation<Rat>::veronese(2, fm);
  auto vfam = ClosureFamily<Rat>::vero(vring);
  CHECK_THROWS_AS(sample_minimal_reduction(*vring, vfam.ideal(), 1, 2, 3), ComputeError);
}

TEST_CASE("form-plus-tail family: powers are the closure") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(5, fm);
  auto y = ring->monomial_element(0, 1, 0);
  auto fam = ClosureFamily<Rat>::form_plus_tail(ring, y, 3);

  // I^2 = (y^2) + y R_{>=3} + R_{>=6}: in grade 4 and 5 that is y * R_{t-1}.
  for (int t : {4, 5}) {
    std::vector<MultiPoly<Rat>> rows;
    auto b = ring->basis(t - 1);
    for (int i = 0; i < b->dim(); ++i)
      rows.push_back(y.nf * MultiPoly<Rat>(ring->vars(), b->mono(i), ring->one()));
    CHECK(fam.closure_component(2, t).same_space(Subspace<Rat>::span(ring->basis(t), rows)));
  }
  CHECK(fam.closure_component(2, 6).dim() == ring->hilbert(6));
  CHECK(fam.closure_component(2, 1).dim() == 0);
  CHECK(fam.closure_component(2, 2).dim() == 1);

  CHECK_THROWS_AS(fam.run(3), InputError);  // no reduction pair attached
  CHECK_THROWS_AS(ClosureFamily<Rat>::form_plus_tail(ring, y, 1), InputError);
}

TEST_CASE("fault hook: a corrupted closure oracle changes the answer") {
  FieldMode fm = FieldMode::rationals();
  const int g = 2;
  auto ring = RingPresentation<Rat>::veronese(g, fm);

  auto clean = ClosureFamily<Rat>::vero(ring);
  CHECK(clean.length_L(g) == 1);

  setenv("NRCALC_FAULT", "closure_oracle", 1);
  auto faulty = ClosureFamily<Rat>::vero(ring);
  long faulted = faulty.length_L(g);
  unsetenv("NRCALC_FAULT");
  CHECK(faulted == 0);  // the dropped generator silently flattens the jump

  auto fresh = ClosureFamily<Rat>::vero(ring);
  CHECK(fresh.length_L(g) == 1);
}
