#include <doctest.h>

#include <vector>

#include "nrcalc/field.hpp"
#include "nrcalc/ideal.hpp"
#include "nrcalc/ring.hpp"
#include "test_support.hpp"

using namespace nrcalc;

namespace {

template <class K>
std::vector<RingElement<K>> maximal_ideal_gens(const typename RingPresentation<K>::Ptr& ring) {
  // For the standard-graded cones: generated by the three linear monomials.
  return {ring->monomial_element(1, 0, 0), ring->monomial_element(0, 1, 0),
          ring->monomial_element(0, 0, 1)};
}

template <class K>
std::vector<RingElement<K>> grade_basis_elements(const typename RingPresentation<K>::Ptr& ring,
                                                 int t) {
  std::vector<RingElement<K>> out;
  auto b = ring->basis(t);
  for (int i = 0; i < b->dim(); ++i)
    out.push_back(ring->element(MultiPoly<K>(ring->vars(), b->mono(i), ring->scalar(1))));
  return out;
}

// The distinguished ideal of the veronese family: two grade-1 elements plus
// everything of grade 2 (which generates all higher grades).
template <class K>
std::vector<RingElement<K>> vero_ideal_gens(const typename RingPresentation<K>::Ptr& ring,
                                            int g) {
  std::vector<RingElement<K>> gens{ring->monomial_element(0, g, 0),
                                   ring->monomial_element(0, g - 1, 1)};
  for (auto& e : grade_basis_elements<K>(ring, 2)) gens.push_back(std::move(e));
  return gens;
}

template <class K>
ParameterPair<K> vero_pair(const typename RingPresentation<K>::Ptr& ring, int g) {
  MultiPoly<K> q1(ring->vars(), make_mono(0, g, 0), ring->scalar(1));
  q1 = q1 + MultiPoly<K>(ring->vars(), make_mono(0, 0, 2 * g), ring->scalar(-1));
  return ParameterPair<K>{ring->element(q1), ring->monomial_element(0, g - 1, 1)};
}

template <class K>
long power_colength(const typename RingPresentation<K>::Ptr& ring, const GradedIdeal<K>& ideal,
                    int s, const StabilizationPolicy& pol = {}) {
  return graded_colength<K>(
      *ring, [&](int t) -> const Subspace<K>& { return ideal.power_component(s, t); }, pol);
}

}  // namespace

TEST_CASE("maximal-ideal powers of a cone fill whole grades") {
  auto fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::fermat_hypersurface(4, fm);
  GradedIdeal<Rat> m(ring, maximal_ideal_gens<Rat>(ring));

  for (int s = 0; s <= 3; ++s)
    for (int t = 0; t <= 6; ++t) {
      const auto& piece = m.power_component(s, t);
      if (t >= s) {
        CHECK(piece.dim() == ring->hilbert(t));
        CHECK(piece.same_space(Subspace<Rat>::full(ring->basis(t), ring->one())));
      } else {
        CHECK(piece.dim() == 0);
      }
    }

  CHECK(power_colength<Rat>(ring, m, 1) == 1);
  CHECK(power_colength<Rat>(ring, m, 2) == 4);
  CHECK(power_colength<Rat>(ring, m, 3) == 10);
}

TEST_CASE("veronese ideal pieces and ell(A/I) = g") {
  for (int g : {2, 3}) {
    auto fm = FieldMode::rationals();
    auto ring = RingPresentation<Rat>::veronese(g, fm);
    GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, g));

    CHECK(I.component(0).dim() == 0);
    CHECK(I.component(1).dim() == 2);
    CHECK(I.component(2).dim() == ring->hilbert(2));
    CHECK(I.component(3).dim() == ring->hilbert(3));
    CHECK(ideal_colength(I) == g);
  }
}

TEST_CASE("second power pieces agree with the all-pairs construction") {
  for (int g : {2, 3}) {
    auto fm = FieldMode::rationals();
    auto ring = RingPresentation<Rat>::veronese(g, fm);
    GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, g));
    const auto& gens = I.gens();

    for (int t = 0; t <= 5; ++t) {
      // Independent oracle: (I^2)_t as the span of g_i g_j A_(t - gi - gj).
      std::vector<MultiPoly<Rat>> rows;
      for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i; j < gens.size(); ++j) {
          int rest = t - *gens[i].grade - *gens[j].grade;
          if (rest < 0) continue;
          auto gg = ring->multiply(gens[i], gens[j]);
          for (auto& a : grade_basis_elements<Rat>(ring, rest)) {
            auto prod = ring->element(gg.nf * a.nf);
            if (!prod.is_zero()) rows.push_back(prod.nf);
          }
        }
      auto oracle = Subspace<Rat>::span(ring->basis(t), rows);
      CHECK(oracle.same_space(I.power_component(2, t)));
    }

    long expect = g == 2 ? 10 : 16;  // 1 + (g+1) + (3g+1 - 3) + deficit at grade 3
    CHECK(power_colength<Rat>(ring, I, 2) == expect);
  }
}

TEST_CASE("power components are nested") {
  auto fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::veronese(2, fm);
  GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, 2));
  for (int s = 0; s <= 2; ++s)
    for (int t = 0; t <= 5; ++t)
      CHECK(I.power_component(s, t).contains_all_of(I.power_component(s + 1, t)));
}

TEST_CASE("filtered colength of the inhomogeneous reduction pair") {
  StabilizationPolicy pol;

  for (int g : {2, 3}) {
    auto fm = FieldMode::rationals();
    auto ring = RingPresentation<Rat>::veronese(g, fm);
    GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, g));
    auto pair = vero_pair<Rat>(ring, g);
    CHECK_FALSE(pair.is_homogeneous());
    CHECK(pair.top_grade(*ring) == 2);

    // ell(A/Q) = 4g - 2: span Q * A with sources complete one grade below the
    // reading horizon.
    int t_valid = 8;
    auto products = pair_module_products<Rat>(
        *ring, pair, [&](int n) -> const Subspace<Rat>& { return I.power_component(0, n); },
        t_valid - 1);
    auto col = filtered_colength(*ring, products, t_valid, pol);
    CHECK(col.value == 4 * g - 2);
    CHECK(col.stabilized_at <= 5);
  }

  // I^2 = QI, certified by containment plus colength equality (g = 2).
  {
    auto fm = FieldMode::rationals();
    auto ring = RingPresentation<Rat>::veronese(2, fm);
    GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, 2));
    auto pair = vero_pair<Rat>(ring, 2);

    int t_valid = 9;
    auto products = pair_module_products<Rat>(
        *ring, pair, [&](int n) -> const Subspace<Rat>& { return I.component(n); }, t_valid - 1);
    for (const auto& w : products)
      for (int d : w.nf.component_degrees()) {
        int tc = d / ring->grade_step();
        CHECK(I.power_component(2, tc).contains(w.nf.component(d)));
      }
    auto col = filtered_colength(*ring, products, t_valid, pol);
    CHECK(col.value == power_colength<Rat>(ring, I, 2));
  }
}

TEST_CASE("filtered colength refuses unusable input") {
  auto fm = FieldMode::rationals();
  auto ring = RingPresentation<Rat>::veronese(2, fm);
  GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, 2));
  auto pair = vero_pair<Rat>(ring, 2);

  // Horizon smaller than the stabilization window.
  auto few = pair_module_products<Rat>(
      *ring, pair, [&](int n) -> const Subspace<Rat>& { return I.power_component(0, n); }, 3);
  CHECK_THROWS_AS(filtered_colength(*ring, few, 3), ComputeError);

  // A pair spanning an infinite-colength module never plateaus.
  ParameterPair<Rat> thin{ring->monomial_element(0, 1, 1), ring->monomial_element(0, 1, 1)};
  auto products = pair_module_products<Rat>(
      *ring, thin, [&](int n) -> const Subspace<Rat>& { return I.power_component(0, n); }, 9);
  CHECK_THROWS_AS(filtered_colength(*ring, products, 10), ComputeError);
}

TEST_CASE("homogeneous parameter pair on a cone: colength d and reduction step") {
  for (auto mode : {FieldMode::rationals(), FieldMode::prime(32003)}) {
    auto run = [&](auto tag) {
      using K = decltype(tag);
      auto ring = RingPresentation<K>::fermat_hypersurface(3, mode);
      GradedIdeal<K> m(ring, maximal_ideal_gens<K>(ring));
      GradedIdeal<K> q(ring, {ring->monomial_element(0, 1, 0), ring->monomial_element(0, 0, 1)});

      CHECK(ideal_colength(q) == 3);  // R/(y,z) = k[x]/(x^3)

      // m^3 = (y,z) m^2, checked grade by grade well past the interesting range.
      for (int t = 0; t <= 8; ++t) {
        const auto& lhs = m.power_component(3, t);
        std::vector<MultiPoly<K>> rows;
        for (const auto& qg : q.gens()) {
          if (t < 1) continue;
          const auto& prev = m.power_component(2, t - 1);
          for (int i = 0; i < prev.dim(); ++i) {
            auto prod = ring->element(qg.nf * prev.row_poly(i));
            if (!prod.is_zero()) rows.push_back(prod.nf);
          }
        }
        auto rhs = Subspace<K>::span(ring->basis(t), rows);
        CHECK(lhs.same_space(rhs));
      }
    };
    if (mode.kind == FieldMode::Kind::Rationals)
      run(Rat());
    else
      run(Fp());
  }
}

TEST_CASE("integral dependence certificates") {
  auto fm = FieldMode::rationals();

  for (int g : {2, 3}) {
    auto ring = RingPresentation<Rat>::veronese(g, fm);
    GradedIdeal<Rat> I(ring, vero_ideal_gens<Rat>(ring, g));

    // An honest member of I^2 satisfies a degree-1 equation.
    auto member = ring->monomial_element(0, 2 * g, 0);
    auto cert1 = find_dependence(*ring, I, 2, member, 3);
    REQUIRE(cert1.has_value());
    CHECK(cert1->u == 1);
    CHECK(cert1->verify(*ring, member));

    // x y^(g^2-1) is integral over I^(g+1): (x y^(g^2-1))^2 =
    // y^(2g^2-2) (y^(2g+2) + z^(2g+2)) lands in I^(2g+2).
    auto w = ring->monomial_element(1, g * g - 1, 0);
    auto cert2 = find_dependence(*ring, I, g + 1, w, 2);
    REQUIRE(cert2.has_value());
    CHECK(cert2->u == 2);
    CHECK(cert2->verify(*ring, w));
    CHECK(cert2->coeffs.size() == 2);

    // x z^(g-1) is not integral over I^2 (small powers cannot absorb z^(2g+2)).
    auto xz = ring->monomial_element(1, 0, g - 1);
    CHECK_FALSE(find_dependence(*ring, I, 2, xz, 4).has_value());
  }
}
