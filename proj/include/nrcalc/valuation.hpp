#pragma once

// Monomial valuations and the membership test for powers of ideals of the
// shape (f) + R_{>= N} with deg f < N and f reduced. Such an ideal is
// integrally closed, and when a family of valuations v_1..v_k realizes it as
//   I = { x in R : v_i(x) >= v_i(f) for all i },
// every power I^s is integrally closed as well, with
//   x in I^s  <=>  v_i(x) >= s * v_i(f) for all i.
//
// The valuations supported here assign a nonnegative integer weight to each
// variable; v(monomial) is the weighted degree and v(poly) the minimum over
// the support. On a polynomial ring these are genuine valuations:
// v(ab) = v(a) + v(b) and v(a+b) >= min(v(a), v(b)).

#include <limits>
#include <vector>

#include "nrcalc/errors.hpp"
#include "nrcalc/poly.hpp"

namespace nrcalc {

struct ValuationSpec {
  std::vector<long> weights;  // one per variable, >= 0, not all zero
};

inline void validate_valuation(const ValuationSpec& v, int nvars) {
  if (static_cast<int>(v.weights.size()) != nvars)
    throw InputError("valuation weight count must match the variable count");
  bool any = false;
  for (long w : v.weights) {
    if (w < 0) throw InputError("valuation weights must be nonnegative");
    if (w > 0) any = true;
  }
  if (!any) throw InputError("valuation weights must not all vanish");
}

inline long monomial_valuation(const ValuationSpec& v, const Monomial& m) {
  long total = 0;
  for (std::size_t i = 0; i < v.weights.size(); ++i) total += v.weights[i] * m.exp(static_cast<int>(i));
  return total;
}

template <ScalarField K>
long poly_valuation(const ValuationSpec& v, const MultiPoly<K>& f) {
  if (f.is_zero()) throw InputError("the zero polynomial has no finite valuation");
  long best = std::numeric_limits<long>::max();
  for (const auto& t : f.terms()) best = std::min(best, monomial_valuation(v, t.m));
  return best;
}

// True iff v_i(x) >= s * v_i(f) for every supplied valuation: under the
// hypothesis above, exactly membership in the integral closure of
// ((f) + R_{>=N})^s. Representatives are polynomial normal forms.
template <ScalarField K>
bool valuation_membership(const std::vector<ValuationSpec>& vs, const MultiPoly<K>& f,
                          const MultiPoly<K>& x, int s) {
  if (s < 1) throw InputError("valuation membership needs s >= 1");
  if (x.is_zero()) return true;
  for (const auto& v : vs) {
    validate_valuation(v, f.vars()->count());
    if (poly_valuation(v, x) < static_cast<long>(s) * poly_valuation(v, f)) return false;
  }
  return true;
}

}  // namespace nrcalc
