#include <vector>

#include "doctest.h"
#include "nrcalc/curve.hpp"
#include "nrcalc/errors.hpp"
#include "nrcalc/field.hpp"
#include "nrcalc/poly.hpp"
#include "nrcalc/qseq.hpp"
#include "nrcalc/ring.hpp"
#include "nrcalc/valuation.hpp"

using namespace nrcalc;

TEST_CASE("upper bracket: least integer strictly above the fraction") {
  CHECK(upper_bracket_frac(2, 1) == 3);
  CHECK(upper_bracket_frac(5, 2) == 3);
  CHECK(upper_bracket_frac(0, 6) == 1);
  CHECK(upper_bracket_frac(4, 8) == 1);
  CHECK(upper_bracket_frac(-1, 2) == 0);
  CHECK(upper_bracket_frac(-4, 2) == -1);
  CHECK_THROWS_AS(upper_bracket_frac(1, 0), InputError);
}

TEST_CASE("binomial helper") {
  CHECK(binom(5, 2) == 10);
  CHECK(binom(4, 0) == 1);
  CHECK(binom(3, 5) == 0);
  CHECK(binom(6, -1) == 0);
  CHECK(binom(10, 3) == 120);
}

// Riemann-Roch is the independent oracle: on a genus-g curve any divisor
// class of degree m has h0 - h1 = m - g + 1, h1 = 0 once m > 2g - 2, and
// h0 = 0 for m < 0. The closed forms must satisfy all three.
TEST_CASE("plane curve h0/h1 against Riemann-Roch") {
  for (int d = 1; d <= 8; ++d) {
    PlaneCurve c{d};
    long g = curve_genus(c);
    CHECK(g == binom(d - 1, 2));
    for (int n = 0; n <= 20; ++n) {
      auto [h0, h1] = curve_h0_h1(c, n);
      long m = static_cast<long>(n) * d;
      CHECK(h0 - h1 == m - g + 1);
      CHECK(h0 >= 0);
      CHECK(h1 >= 0);
      if (m > 2 * g - 2) CHECK(h1 == 0);
    }
    // h^1 of nH on a smooth plane curve counts degree-(d-3-n) forms.
    for (int n = 0; n <= d; ++n) CHECK(curve_h0_h1(c, n).h1 == binom(d - 1 - n, 2));
  }
}

TEST_CASE("hyperelliptic h0/h1 against Riemann-Roch") {
  for (int g = 2; g <= 6; ++g)
    for (int b = 1; b <= 3; ++b) {
      Hyperelliptic c{g, b};
      CHECK(curve_genus(c) == g);
      CHECK(curve_deg_d(c) == 2 * b);
      for (int n = 0; n <= 20; ++n) {
        auto [h0, h1] = curve_h0_h1(c, n);
        long m = 2L * n * b;
        CHECK(h0 - h1 == m - g + 1);
        CHECK(h0 >= 1);  // multiples of the g^1_2 always move
        CHECK(h1 >= 0);
        if (m > 2 * g - 2) CHECK(h1 == 0);
        // Multiples of the hyperelliptic pencil are special as long as
        // h1 > 0 is possible at all: h0(n b D0) = n b + 1 in that range.
        if (n * b <= g - 1) CHECK(h0 == static_cast<long>(n) * b + 1);
      }
    }
}

TEST_CASE("pg and q_k closed forms") {
  for (int d = 1; d <= 10; ++d) {
    PlaneCurve c{d};
    CHECK(curve_pg(c) == binom(d, 3));
    for (int k = 0; k <= d; ++k) CHECK(curve_q_k_maximal(c, k) == binom(d - k, 3));
  }
  for (int g = 2; g <= 6; ++g) {
    // b = g is the veronese-family polarization: only n = 0 contributes h^1.
    Hyperelliptic c{g, g};
    CHECK(curve_pg(c) == g);
    CHECK(curve_q_k_maximal(c, 1) == 0);
    // b = 1: h^1(m D0) = g - m down to zero, so q_k telescopes to C(g+1-k, 2).
    Hyperelliptic fine{g, 1};
    CHECK(curve_pg(fine) == g * (g + 1L) / 2);
    for (int k = 0; k <= g + 1; ++k) CHECK(curve_q_k_maximal(fine, k) == binom(g + 1 - k, 2));
  }
  // Direct summation oracle for a couple of models.
  for (CurveModel c : {CurveModel{PlaneCurve{6}}, CurveModel{Hyperelliptic{5, 2}}}) {
    long a = curve_a_invariant(c);
    for (int k = 0; k <= static_cast<int>(a) + 2; ++k) {
      long sum = 0;
      for (int n = k; n <= a; ++n) sum += curve_h0_h1(c, n).h1;
      CHECK(curve_q_k_maximal(c, k) == sum);
    }
  }
}

TEST_CASE("a-invariants") {
  CHECK(curve_a_invariant(PlaneCurve{4}) == 1);
  CHECK(curve_a_invariant(PlaneCurve{3}) == 0);
  CHECK(curve_a_invariant(PlaneCurve{10}) == 7);
  CHECK(curve_a_invariant(Hyperelliptic{3, 1}) == 2);
  CHECK(curve_a_invariant(Hyperelliptic{3, 2}) == 1);
  CHECK(curve_a_invariant(Hyperelliptic{5, 5}) == 0);
  CHECK(curve_a_invariant(CompleteIntersection{{2, 2}}) == 0);
  CHECK(curve_a_invariant(CompleteIntersection{{2, 3}}) == 1);
  // The last grade with h^1 != 0 must agree with the closed form.
  for (int d = 3; d <= 9; ++d) {
    PlaneCurve c{d};
    long a = curve_a_invariant(c);
    CHECK(curve_h0_h1(c, static_cast<int>(a)).h1 > 0);
    CHECK(curve_h0_h1(c, static_cast<int>(a) + 1).h1 == 0);
  }
}

TEST_CASE("complete intersection degree and genus") {
  // deg = product of the degrees; 2g - 2 = deg * (sum deg - n - 1).
  CompleteIntersection q22{{2, 2}};
  CHECK(curve_deg_d(q22) == 4);
  CHECK(curve_genus(q22) == 1);
  CompleteIntersection q23{{2, 3}};
  CHECK(curve_deg_d(q23) == 6);
  CHECK(curve_genus(q23) == 4);
  CompleteIntersection q223{{2, 2, 3}};
  CHECK(curve_deg_d(q223) == 12);
  CHECK(curve_a_invariant(q223) == 2);
  CHECK(curve_genus(q223) == 13);
  CHECK_THROWS_AS(curve_h0_h1(CurveModel{q22}, 1), InputError);
  CHECK_THROWS_AS(curve_pg(CurveModel{q22}), InputError);
}

TEST_CASE("gonality") {
  CHECK(curve_gonality(PlaneCurve{5}).value == 4);
  CHECK(curve_gonality(PlaneCurve{5}).exact);
  CHECK(curve_gonality(Hyperelliptic{4, 2}).value == 2);
  CHECK(curve_gonality(Hyperelliptic{4, 2}).exact);
  auto gci = curve_gonality(CompleteIntersection{{2, 3}});
  CHECK(gci.value == 3);
  CHECK_FALSE(gci.exact);
}

TEST_CASE("br upper bounds") {
  // Orthogonal case for the plane cone: [[ (2g-2)/d ]] + 1 = d - 1.
  for (int d = 3; d <= 10; ++d) {
    auto b = curve_br_bounds(PlaneCurve{d});
    long g = curve_genus(PlaneCurve{d});
    CHECK(b.bound_orthogonal == upper_bracket_frac(2 * g - 2, d) + 1);
    CHECK(b.bound_orthogonal == d - 1);
    // General case via gonality d - 1: equals a(R) + 2 = d - 1 as well.
    CHECK(b.bound_general == d - 1);
    CHECK(b.nr_maximal_prediction == d - 1);
  }
  // Hyperelliptic: gonality 2 gives [[ (2g-2)/2 ]] + 1 = g + 1 whatever b is.
  for (int g = 2; g <= 6; ++g)
    for (int b = 1; b <= 3; ++b) CHECK(curve_br_bounds(Hyperelliptic{g, b}).bound_general == g + 1);
  // The (2,2) curve is elliptic: every bound collapses to 2 = a + 2.
  auto e = curve_br_bounds(CompleteIntersection{{2, 2}});
  CHECK(e.bound_orthogonal == 2);
  CHECK(e.bound_general == 2);
  CHECK(e.nr_maximal_prediction == 2);
  // A gonality lower bound makes [[ (2g-2)/gon ]] + 1 still an upper bound;
  // for a CI it evaluates to a + [[ a/(d1-1) ]] + 1.
  auto c23 = curve_br_bounds(CompleteIntersection{{2, 3}});
  long a23 = curve_a_invariant(CompleteIntersection{{2, 3}});
  CHECK(c23.bound_general == a23 + upper_bracket_frac(a23, 1) + 1);
  CHECK(c23.bound_general == 4);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(curve_validate(PlaneCurve{0}), InputError);
  CHECK_THROWS_AS(curve_validate(Hyperelliptic{1, 1}), InputError);
  CHECK_THROWS_AS(curve_validate(Hyperelliptic{3, 0}), InputError);
  CHECK_THROWS_AS(curve_validate(CompleteIntersection{{}}), InputError);
  CHECK_THROWS_AS(curve_validate(CompleteIntersection{{3, 2}}), InputError);
  CHECK_THROWS_AS(curve_validate(CompleteIntersection{{1, 2}}), InputError);
  CHECK_NOTHROW(curve_validate(CompleteIntersection{{2, 2, 5}}));
}

TEST_CASE("blowdown genus formula and its regime") {
  CHECK(pg_blowdown(4, 1) == 3);
  CHECK(pg_blowdown(3, 1) == 1);
  CHECK(pg_blowdown(3, 2) == 1);
  // d * m_1 = 2g - 2 exactly: outside the claimed regime, so indeterminate.
  CHECK_FALSE(pg_blowdown(5, 1).has_value());
  CHECK_FALSE(pg_blowdown(4, 3).has_value());
  CHECK_FALSE(pg_blowdown(6, 1).has_value());
  CHECK_FALSE(pg_blowdown(8, 2).has_value());
  CHECK_THROWS_AS(pg_blowdown(2, 0), InputError);
}

TEST_CASE("q sequence reconstruction from lengths") {
  // Maximal ideal of the quartic cone: pg = 4, L = (2,1,0,0).
  auto quartic = q_sequence_from_lengths(4, {2, 1, 0, 0});
  CHECK(quartic.q == std::vector<long>{4, 1, 0, 0, 0});
  CHECK(quartic.nr == 3);
  CHECK(quartic.br == 3);
  CHECK(quartic.q_inf == 0);

  // A single late jump: pg = 4, L = (1,0,0).
  auto late = q_sequence_from_lengths(4, {1, 0, 0});
  CHECK(late.q == std::vector<long>{4, 3, 3, 3});
  CHECK(late.nr == 2);
  CHECK(late.br == 2);

  // The genus-2 veronese family: pg = 2, L = (0,1,0,0) -> nr < br.
  auto vero = q_sequence_from_lengths(2, {0, 1, 0, 0});
  CHECK(vero.q == std::vector<long>{2, 1, 0, 0, 0});
  CHECK(vero.nr == 1);
  CHECK(vero.br == 3);
  CHECK(vero.q_inf == 0);

  // All-zero lengths: q constant at pg.
  auto flat = q_sequence_from_lengths(5, {0, 0});
  CHECK(flat.q == std::vector<long>{5, 5, 5});
  CHECK(flat.nr == 1);
  CHECK(flat.br == 1);
  CHECK(flat.q_inf == 5);
}

TEST_CASE("q sequence reconstruction rejects inconsistent data") {
  CHECK_THROWS_AS(q_sequence_from_lengths(4, {}), ComputeError);
  // Not settled at the horizon.
  CHECK_THROWS_AS(q_sequence_from_lengths(4, {1, 0, 1}), ComputeError);
  // Too much mass for the stated pg: q would go negative.
  CHECK_THROWS_AS(q_sequence_from_lengths(1, {3, 0, 0}), ComputeError);
  // br = pg + 2 violates the pg + 1 cap (pg = 0 but a late length).
  CHECK_THROWS_AS(q_sequence_from_lengths(1, {0, 1, 0, 0}), ComputeError);
  // Negative inputs.
  CHECK_THROWS_AS(q_sequence_from_lengths(-1, {0, 0}), ComputeError);
  CHECK_THROWS_AS(q_sequence_from_lengths(3, {-1, 0, 0}), ComputeError);
}

TEST_CASE("monomial valuations on the polynomial ring") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(5, fm);
  auto p = [&](int a, int b, int c) {
    return MultiPoly<Rat>(ring->vars(), make_mono(a, b, c), ring->one());
  };
  ValuationSpec v{{2, 3, 1}};
  CHECK(poly_valuation(v, p(1, 0, 0)) == 2);
  CHECK(poly_valuation(v, p(1, 2, 3)) == 11);
  CHECK(poly_valuation(v, p(1, 0, 0) + p(0, 0, 4)) == 2);
  // v(fg) = v(f) + v(g) and v(f+g) >= min(v(f), v(g)) on a spread of cases.
  std::vector<MultiPoly<Rat>> samples{p(1, 0, 0) + p(0, 2, 0), p(0, 1, 1), p(2, 0, 1) + p(0, 0, 3),
                                      p(0, 0, 1) + p(0, 1, 0) + p(1, 0, 0)};
  for (const auto& f : samples)
    for (const auto& g : samples) {
      CHECK(poly_valuation(v, f * g) == poly_valuation(v, f) + poly_valuation(v, g));
      CHECK(poly_valuation(v, f + g) >= std::min(poly_valuation(v, f), poly_valuation(v, g)));
    }
  CHECK_THROWS_AS(poly_valuation(v, MultiPoly<Rat>(ring->vars())), InputError);
  CHECK_THROWS_AS(validate_valuation(ValuationSpec{{0, 0, 0}}, 3), InputError);
  CHECK_THROWS_AS(validate_valuation(ValuationSpec{{1, 2}}, 3), InputError);
}

TEST_CASE("valuation membership test for form-plus-tail ideals") {
  FieldMode fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(5, fm);
  auto p = [&](int a, int b, int c) {
    return MultiPoly<Rat>(ring->vars(), make_mono(a, b, c), ring->one());
  };
  // f = y: the order-in-y valuation (0,1,0) gives v(f) = 1, so x^a y^b z^c
  // passes for I^s exactly when b >= s.
  MultiPoly<Rat> f = p(0, 1, 0);
  std::vector<ValuationSpec> vs{{{0, 1, 0}}};
  CHECK(valuation_membership(vs, f, p(0, 3, 1), 3));
  CHECK_FALSE(valuation_membership(vs, f, p(2, 1, 2), 2));
  CHECK(valuation_membership(vs, f, MultiPoly<Rat>(ring->vars()), 4));  // 0 is in everything
  // Two valuations must both pass.
  std::vector<ValuationSpec> both{{{0, 1, 0}}, {{1, 1, 2}}};
  MultiPoly<Rat> h = p(0, 2, 0);  // v2(h) = 2 < 2 * v2(f) = 2? no: equal, passes
  CHECK(valuation_membership(both, f, h, 2));
  CHECK_FALSE(valuation_membership(both, f, p(0, 2, 0) + p(4, 0, 0), 3));
  CHECK_THROWS_AS(valuation_membership(vs, f, h, 0), InputError);
}
