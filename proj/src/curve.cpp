#include "nrcalc/curve.hpp"

#include <algorithm>
#include <numeric>

#include "nrcalc/qseq.hpp"  // binom

namespace nrcalc {

long upper_bracket_frac(long num, long den) {
  if (den <= 0) throw InputError("upper bracket needs a positive denominator");
  long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;  // floor division
  return q + 1;
}

void curve_validate(const CurveModel& c) {
  if (auto* p = std::get_if<PlaneCurve>(&c)) {
    if (p->d < 1) throw InputError("plane curve degree must be >= 1");
  } else if (auto* h = std::get_if<Hyperelliptic>(&c)) {
    if (h->g < 2) throw InputError("hyperelliptic genus must be >= 2");
    if (h->b < 1) throw InputError("divisor multiple b must be >= 1");
  } else {
    auto& ci = std::get<CompleteIntersection>(c);
    if (ci.degrees.empty()) throw InputError("complete intersection needs at least one degree");
    if (!std::is_sorted(ci.degrees.begin(), ci.degrees.end()))
      throw InputError("complete intersection degrees must be ascending");
    for (int d : ci.degrees)
      if (d < 2) throw InputError("complete intersection degrees must be >= 2");
  }
}

std::string curve_describe(const CurveModel& c) {
  if (auto* p = std::get_if<PlaneCurve>(&c)) return "plane d=" + std::to_string(p->d);
  if (auto* h = std::get_if<Hyperelliptic>(&c))
    return "hyperelliptic g=" + std::to_string(h->g) + " b=" + std::to_string(h->b);
  auto& ci = std::get<CompleteIntersection>(c);
  std::string s = "ci";
  for (size_t i = 0; i < ci.degrees.size(); ++i)
    s += (i ? "," : " ") + std::to_string(ci.degrees[i]);
  return s;
}

long curve_genus(const CurveModel& c) {
  curve_validate(c);
  if (auto* p = std::get_if<PlaneCurve>(&c)) return binom(p->d - 1, 2);
  if (auto* h = std::get_if<Hyperelliptic>(&c)) return h->g;
  auto& ci = std::get<CompleteIntersection>(c);
  // Adjunction in P^n: 2g - 2 = d * a with a = sum(d_i) - n - 1, d = prod(d_i).
  long a = curve_a_invariant(c);
  long d = curve_deg_d(c);
  return d * a / 2 + 1;
}

long curve_deg_d(const CurveModel& c) {
  curve_validate(c);
  if (auto* p = std::get_if<PlaneCurve>(&c)) return p->d;
  if (auto* h = std::get_if<Hyperelliptic>(&c)) return 2L * h->b;
  auto& ci = std::get<CompleteIntersection>(c);
  return std::accumulate(ci.degrees.begin(), ci.degrees.end(), 1L, std::multiplies<long>());
}

long curve_a_invariant(const CurveModel& c) {
  curve_validate(c);
  if (auto* p = std::get_if<PlaneCurve>(&c)) return p->d - 3;
  if (auto* h = std::get_if<Hyperelliptic>(&c)) return (h->g - 1) / h->b;
  auto& ci = std::get<CompleteIntersection>(c);
  long n = static_cast<long>(ci.degrees.size()) + 1;  // ambient P^n
  return std::accumulate(ci.degrees.begin(), ci.degrees.end(), 0L) - n - 1;
}

H01 curve_h0_h1(const CurveModel& c, int n) {
  curve_validate(c);
  if (n < 0) throw InputError("h0/h1 defined for n >= 0 only");
  if (auto* p = std::get_if<PlaneCurve>(&c)) {
    // From 0 -> O(n-d) -> O(n) -> O_C(n) -> 0 on P^2.
    H01 r;
    r.h0 = binom(n + 2, 2) - binom(n - p->d + 2, 2);
    r.h1 = binom(p->d - 1 - n, 2);
    return r;
  }
  if (auto* h = std::get_if<Hyperelliptic>(&c)) {
    long m = static_cast<long>(n) * h->b;  // nD = m * D0, deg D0 = 2
    H01 r;
    if (m <= h->g - 1) {
      r.h0 = m + 1;
      r.h1 = h->g - m;
    } else {
      r.h0 = 2 * m + 1 - h->g;
      r.h1 = 0;
    }
    return r;
  }
  throw InputError("h0/h1 not available for complete intersection models");
}

long curve_pg(const CurveModel& c) { return curve_q_k_maximal(c, 0); }

long curve_q_k_maximal(const CurveModel& c, int k) {
  curve_validate(c);
  if (k < 0) throw InputError("q_k defined for k >= 0 only");
  if (std::holds_alternative<CompleteIntersection>(c))
    throw InputError("q_k not available for complete intersection models");
  long a = curve_a_invariant(c);
  long total = 0;
  for (int n = k; n <= a; ++n) total += curve_h0_h1(c, n).h1;
  return total;
}

Gonality curve_gonality(const CurveModel& c) {
  curve_validate(c);
  if (auto* p = std::get_if<PlaneCurve>(&c)) {
    if (p->d < 2) throw InputError("gonality needs degree >= 2");
    return {p->d - 1L, true};  // projection from a point of the curve
  }
  if (std::holds_alternative<Hyperelliptic>(c)) return {2L, true};
  auto& ci = std::get<CompleteIntersection>(c);
  long lb = ci.degrees[0] - 1;
  for (size_t i = 1; i < ci.degrees.size(); ++i) lb *= ci.degrees[i];
  return {lb, false};
}

BrBounds curve_br_bounds(const CurveModel& c) {
  curve_validate(c);
  BrBounds b;
  b.gon = curve_gonality(c);
  long g = curve_genus(c);
  long dd = curve_deg_d(c);
  b.bound_orthogonal = upper_bracket_frac(2 * g - 2, dd) + 1;
  // Using a gonality lower bound here still yields a valid upper bound for br.
  b.bound_general = upper_bracket_frac(2 * g - 2, b.gon.value) + 1;
  b.nr_maximal_prediction = curve_a_invariant(c) + 2;
  return b;
}

std::optional<long> pg_blowdown(int d, int r) {
  if (d < 3 || r < 1) throw InputError("pg_blowdown needs d >= 3, r >= 1");
  // The n-th summand is h^1 of the round-down of n * (fractional divisor),
  // which is the m_n-fold hyperplane class with m_n = n + floor(n / r). The
  // closed form below is only claimed when already m_1 kills h^1, i.e.
  // deg(m_1 H) = d * m_1 > 2g - 2; m_n is increasing, so testing n = 1
  // settles every n >= 1 and only the n = 0 term h^1(0) = g survives.
  long g = binom(d - 1, 2);
  long m1 = 1 + 1 / r;  // = 2 when r = 1, else 1
  if (static_cast<long>(d) * m1 > 2 * g - 2) return g;
  return std::nullopt;
}

}  // namespace nrcalc
