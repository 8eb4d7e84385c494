#pragma once

// Closed-form curve-side invariants for the cone construction. A graded ring
// R = R(C, D) built from a smooth projective curve C with an ample divisor D
// has its geometric genus, q-sequence limits and reduction-number bounds
// controlled by cohomology of multiples of D:
//
//   p_g(R)      = sum_{n >= 0} h^1(C, nD)
//   q_k(maxl)   = sum_{n >= k} h^1(C, nD)
//   a(R)        = max { n : h^1(nD) != 0 }   (the last nonzero term)
//
// Supported models:
//   PlaneCurve{d}:      smooth plane curve of degree d, D = hyperplane class
//   Hyperelliptic{g,b}: hyperelliptic curve of genus g, D = b * (the g^1_2)
//   CompleteIntersection{d_1..d_{n-1}}: CI curve in P^n, D = hyperplane class;
//       only degree/genus/a-invariant/gonality-bound data is available.
//
// br upper bounds, depending on how the exceptional curve sits in the
// resolution: when the anti-nef cycle Z is orthogonal to the central curve
// the bound uses deg D, otherwise the gonality; [[x]] is the least integer
// strictly greater than x.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nrcalc/errors.hpp"

namespace nrcalc {

struct PlaneCurve {
  int d = 0;  // degree >= 1
};

struct Hyperelliptic {
  int g = 0;  // genus >= 2
  int b = 1;  // D = b * D0 with deg D0 = 2
};

struct CompleteIntersection {
  std::vector<int> degrees;  // d_1 <= ... <= d_{n-1}, each >= 2
};

using CurveModel = std::variant<PlaneCurve, Hyperelliptic, CompleteIntersection>;

// Least integer strictly greater than num/den (den > 0).
long upper_bracket_frac(long num, long den);

struct H01 {
  long h0 = 0;
  long h1 = 0;
};

std::string curve_describe(const CurveModel& c);
void curve_validate(const CurveModel& c);

long curve_genus(const CurveModel& c);
long curve_deg_d(const CurveModel& c);  // degree of the polarizing divisor D
long curve_a_invariant(const CurveModel& c);

// h^0 / h^1 of nD, n >= 0. CompleteIntersection is unsupported (InputError).
H01 curve_h0_h1(const CurveModel& c, int n);

long curve_pg(const CurveModel& c);               // sum of h^1(nD), n >= 0
long curve_q_k_maximal(const CurveModel& c, int k);  // sum of h^1(nD), n >= k

struct Gonality {
  long value = 0;
  bool exact = false;  // false: lower bound only
};
Gonality curve_gonality(const CurveModel& c);

struct BrBounds {
  Gonality gon;
  long bound_orthogonal = 0;  // [[(2g-2)/deg D]] + 1, case Z.E0 = 0
  long bound_general = 0;     // [[(2g-2)/gon]] + 1,   case Z.E0 < 0
  long nr_maximal_prediction = 0;  // a(R) + 2 for the cone maximal ideal
};
BrBounds curve_br_bounds(const CurveModel& c);

// p_g of the rational-singularity blowdown attached to a degree-d plane curve
// with a length-r tangency datum. Only the regime where every positive
// multiple of the fractional divisor already kills h^1 admits the closed form
// p_g = C(d-1, 2) (the n = 0 term alone); outside it the value is reported as
// indeterminate rather than guessed.
std::optional<long> pg_blowdown(int d, int r);

}  // namespace nrcalc
