#pragma once

// Integral-closure filtrations for the worked families of two-dimensional
// cone singularities, and the quotient lengths
//
//   L(n) = len( closure(I^(n+1)) / Q closure(I^n) ),  n >= 1,
//
// feeding the q-sequence reconstruction. Each family couples a ring
// presentation with an ideal I, a description of the closure filtration that
// is exact for that family, and a parameter pair Q:
//
//   MaximalIdeal  cone over a smooth plane curve, I = (x, y, z). Every power
//                 is integrally closed and equals the span of all grades >= n.
//                 Q is a sampled pair of general linear forms.
//
//   Blowup        I = (L) + m^(r+1) on the same cone, L a general linear
//                 form. All powers are integrally closed, and they telescope:
//                 I^s = sum_j L^j m^((s-j)(r+1)), and in a fixed grade t the
//                 smallest admissible j already contains every other term
//                 (L^j R_(t-j) contains L^(j') R_(t-j') for j' > j), so each
//                 piece is a single product L^j * R_(t-j).
//                 Q = (L, M) with M a general form of degree r+1.
//
//   Vero          the veronese-subring family with its distinguished ideal
//                 I = (y^g, y^(g-1) z) + A_2. Powers are integrally closed up
//                 to n = g; at n = g+1 the closure picks up the one extra
//                 generator w = x y^(g^2-1) (integral by an explicit degree-2
//                 equation); beyond that closure(I^n) = I * closure(I^(n-1)):
//                 Q closure(I^(n-1)) is squeezed between I * closure(I^(n-1))
//                 and closure(I^n), and for n >= g+2 the outer two coincide.
//                 Q = (y^g - z^(2g), y^(g-1) z); the first member is
//                 inhomogeneous, so lengths against Q go through the filtered
//                 elimination below.
//
//   FormPlusTail  I = (f) + R_(>= N) with deg f < N and f reduced: integrally
//                 closed, with integrally closed powers when valuations
//                 realizing I are supplied (see valuation.hpp). No canonical
//                 reduction pair; used for membership and certificate work.
//
// The inhomogeneous colength len(A / Q closure(I^n)) is computed in quotient
// coordinates: the homogeneous member q2 contributes a graded submodule S
// whose pieces are eliminated first, and only the few surviving coordinates
// per grade enter the one blocked elimination for the inhomogeneous part.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nrcalc/curve.hpp"
#include "nrcalc/errors.hpp"
#include "nrcalc/ideal.hpp"
#include "nrcalc/qseq.hpp"
#include "nrcalc/ring.hpp"
#include "nrcalc/rref.hpp"
#include "nrcalc/subspace.hpp"

namespace nrcalc {

// Deliberate-corruption hook for the acceptance suite's negative control:
// when the environment variable NRCALC_FAULT names a site, that computation
// is wrong on purpose and the suite must catch it.
inline bool fault_enabled(const char* site) {
  const char* v = std::getenv("NRCALC_FAULT");
  return v != nullptr && std::string(v) == site;
}

// Deterministic small scalars for sampled general forms.
template <ScalarField K>
K sampled_scalar(const RingPresentation<K>& ring, std::uint64_t word) {
  if constexpr (std::is_same_v<K, Rat>) {
    return ring.scalar(1 + static_cast<long>(word % 17));
  } else {
    return ring.scalar(static_cast<long>(word % ring.field().p));
  }
}

template <ScalarField K>
RingElement<K> sampled_form(const RingPresentation<K>& ring, int grade, std::mt19937_64& rng) {
  auto basis = ring.basis(grade);
  for (int attempt = 0; attempt < 64; ++attempt) {
    MultiPoly<K> f(ring.vars());
    for (int i = 0; i < basis->dim(); ++i) {
      K c = sampled_scalar(ring, rng());
      if (!is_zero(c)) f = f + MultiPoly<K>(ring.vars(), basis->mono(i), c);
    }
    auto e = ring.element(f);
    if (!e.is_zero()) return e;
  }
  throw ComputeError("sampled forms of grade " + std::to_string(grade) + " kept vanishing");
}

// Certificate that Q is a reduction of I: plain-power equality
// I^(s+1) = Q I^s. For a homogeneous pair this is checked grade by grade
// until both sides fill `window` consecutive whole grades (the ring is
// generated in grades <= 2, so an ideal with that many consecutive full
// pieces stays full forever). For an inhomogeneous pair it is containment
// plus equality of the two colengths.
template <ScalarField K>
bool is_reduction_certificate(const RingPresentation<K>& ring, const GradedIdeal<K>& ideal,
                              const ParameterPair<K>& pair, int s,
                              const StabilizationPolicy& policy = {}) {
  if (s < 1) throw InputError("reduction certificates need s >= 1");
  for (const RingElement<K>* q : {&pair.q1, &pair.q2}) {
    if (q->is_zero()) return false;
    for (int d : q->nf.component_degrees()) {
      int t = d / ring.grade_step();
      if (!ideal.component(t).contains(q->nf.component(d))) return false;
    }
  }

  if (pair.is_homogeneous()) {
    int b1 = *pair.q1.grade, b2 = *pair.q2.grade;
    int full_run = 0;
    for (int t = 0; t <= policy.grade_cap; ++t) {
      const Subspace<K>& lhs = ideal.power_component(s + 1, t);
      std::vector<std::vector<K>> rows;
      for (auto [q, b] : {std::make_pair(&pair.q1, b1), std::make_pair(&pair.q2, b2)}) {
        if (t - b < 0) continue;
        const Subspace<K>& prev = ideal.power_component(s, t - b);
        for (int i = 0; i < prev.dim(); ++i) {
          auto prod = ring.element(q->nf * prev.row_poly(i));
          if (!prod.is_zero()) rows.push_back(poly_to_row(*ring.basis(t), prod.nf));
        }
      }
      auto rhs = Subspace<K>::span_rows(ring.basis(t), std::move(rows));
      if (!lhs.same_space(rhs)) return false;
      full_run = rhs.dim() == ring.hilbert(t) ? full_run + 1 : 0;
      if (full_run >= policy.window) return true;
    }
    throw ComputeError("reduction certificate ran past the grade cap");
  }

  int t_valid = s + pair.top_grade(ring) + policy.window + 4;
  auto products = pair_module_products<K>(
      ring, pair, [&](int m) -> const Subspace<K>& { return ideal.power_component(s, m); },
      t_valid - 1);
  for (const auto& w : products)
    for (int d : w.nf.component_degrees())
      if (!ideal.power_component(s + 1, d / ring.grade_step()).contains(w.nf.component(d)))
        return false;
  long lhs = graded_colength<K>(
      ring, [&](int t) -> const Subspace<K>& { return ideal.power_component(s + 1, t); }, policy);
  return filtered_colength(ring, products, t_valid, policy).value == lhs;
}

// Samples a parameter pair from random combinations of the lowest-grade
// generators of I and certifies it as a reduction at some s <= s_cap. Throws
// once the resample budget is exhausted (which is the expected outcome for
// ideals whose lowest-grade generators share a common factor).
template <ScalarField K>
std::pair<ParameterPair<K>, int> sample_minimal_reduction(const RingPresentation<K>& ring,
                                                          const GradedIdeal<K>& ideal,
                                                          std::uint64_t seed, int s_cap,
                                                          int attempts = 8,
                                                          const StabilizationPolicy& policy = {}) {
  int low = policy.grade_cap;
  for (const auto& g : ideal.gens()) low = std::min(low, *g.grade);
  std::vector<const RingElement<K>*> lows;
  for (const auto& g : ideal.gens())
    if (*g.grade == low) lows.push_back(&g);

  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto combo = [&]() {
      MultiPoly<K> f(ring.vars());
      for (const auto* g : lows) {
        K c = sampled_scalar(ring, rng());
        if (!is_zero(c)) f = f + g->nf.scaled(c);
      }
      return ring.element(f);
    };
    ParameterPair<K> pair{combo(), combo()};
    if (pair.q1.is_zero() || pair.q2.is_zero()) continue;
    try {
      for (int s = 1; s <= s_cap; ++s)
        if (is_reduction_certificate(ring, ideal, pair, s, policy)) return {pair, attempt};
    } catch (const ComputeError&) {
      // Not even finite colength against this pair; resample.
    }
  }
  throw ComputeError("reduction sampling exhausted its resample budget");
}

// Outcome of the cheap syntactic screen for closure membership questions in
// the veronese family, for a homogeneous z = f0 + x f1 of grade n: an
// x-multiple x f1 in closure(I^n) forces n >= g+1 and deg_z(f1) <= n-(g+1),
// and the sign involution x -> -x fixes I (hence every closure), so a mixed
// element with an offending f1 is rejected outright. A pure f0 reduces to
// plain power membership.
enum class PrefilterOutcome { Rejected, PowerTestSettles, NotRejected };
struct PrefilterReport {
  PrefilterOutcome outcome;
  std::string reason;
};

template <ScalarField K>
PrefilterReport vero_closure_prefilter(const RingPresentation<K>& ring, const RingElement<K>& z,
                                       int n) {
  if (ring.kind() != RingPresentation<K>::Kind::Veronese)
    throw InputError("the closure prefilter applies to the veronese family");
  if (z.is_zero() || !z.grade || *z.grade != n)
    throw InputError("prefilter input must be homogeneous of the stated grade");
  if (n < 1) throw InputError("prefilter needs n >= 1");
  int g = ring.genus_parameter();

  auto [f0, f1] = xsplit(z.nf);
  if (f1.is_zero())
    return {PrefilterOutcome::PowerTestSettles,
            "no x component; closure membership equals power membership in grade " +
                std::to_string(n)};
  int zdeg = 0;
  for (const auto& t : f1.terms()) zdeg = std::max(zdeg, t.m.exp(2));
  if (n <= g)
    return {PrefilterOutcome::Rejected,
            "x-multiples are never integral over powers up to g (sign involution reduces the "
            "mixed case)"};
  if (zdeg > n - (g + 1))
    return {PrefilterOutcome::Rejected,
            "z-degree " + std::to_string(zdeg) + " of the x part exceeds n-(g+1) = " +
                std::to_string(n - g - 1)};
  return {PrefilterOutcome::NotRejected, "passes the z-degree screen"};
}

// The sign involution x -> -x (an automorphism of every presentation here,
// and the tool behind the mixed-element rejection above).
template <ScalarField K>
RingElement<K> sigma_conjugate(const RingPresentation<K>& ring, const RingElement<K>& z) {
  MultiPoly<K> out(ring.vars());
  for (const auto& t : z.nf.terms()) {
    K c = t.c;
    if (t.m.exp(0) % 2 == 1) c = K(-t.c);
    out = out + MultiPoly<K>(ring.vars(), t.m, c);
  }
  return ring.element(out);
}

template <ScalarField K>
class ClosureFamily {
 public:
  using RingPtr = typename RingPresentation<K>::Ptr;
  enum class Kind { MaximalIdeal, FormPlusTail, Blowup, Vero };

  static ClosureFamily maximal_ideal(RingPtr ring, std::uint64_t seed,
                                     const StabilizationPolicy& policy = {}) {
    if (ring->kind() != RingPresentation<K>::Kind::StandardHypersurface)
      throw InputError("the maximal-ideal family runs on standard-graded cones");
    ClosureFamily fam(Kind::MaximalIdeal, ring);
    std::vector<RingElement<K>> gens{ring->monomial_element(1, 0, 0),
                                     ring->monomial_element(0, 1, 0),
                                     ring->monomial_element(0, 0, 1)};
    fam.ideal_ = std::make_unique<GradedIdeal<K>>(ring, std::move(gens));
    auto [pair, used] =
        sample_minimal_reduction(*ring, *fam.ideal_, seed, ring->hypersurface_degree() + 1,
                                 8, policy);
    fam.pair_ = std::move(pair);
    fam.resamples_ = used;
    return fam;
  }

  static ClosureFamily blowup(RingPtr ring, int r, std::uint64_t seed,
                              const StabilizationPolicy& policy = {}) {
    if (ring->kind() != RingPresentation<K>::Kind::StandardHypersurface)
      throw InputError("the blowup family runs on standard-graded cones");
    if (r < 1) throw InputError("blowup family needs r >= 1");
    ClosureFamily fam(Kind::Blowup, ring);
    fam.r_ = r;
    int d = ring->hypersurface_degree();
    int s_hint = static_cast<int>((d - 1 + r) / (r + 1)) + 1;

    std::mt19937_64 rng(seed);
    std::string last;
    for (int attempt = 0; attempt < 8; ++attempt) {
      RingElement<K> lin = sampled_form(*ring, 1, rng);
      std::vector<RingElement<K>> gens{lin};
      auto br1 = ring->basis(r + 1);
      for (int i = 0; i < br1->dim(); ++i)
        gens.push_back(ring->element(MultiPoly<K>(ring->vars(), br1->mono(i), ring->scalar(1))));
      fam.ideal_ = std::make_unique<GradedIdeal<K>>(ring, std::move(gens));
      fam.linear_ = lin;
      ParameterPair<K> pair{lin, sampled_form(*ring, r + 1, rng)};
      try {
        bool ok = false;
        for (int s = 1; s <= s_hint && !ok; ++s)
          ok = is_reduction_certificate(*ring, *fam.ideal_, pair, s, policy);
        if (ok) {
          fam.pair_ = std::move(pair);
          fam.resamples_ = attempt;
          return fam;
        }
        last = "certificate failed";
      } catch (const ComputeError& e) {
        last = e.what();
      }
    }
    throw ComputeError("blowup reduction sampling exhausted its budget: " + last);
  }

  static ClosureFamily vero(RingPtr ring) {
    if (ring->kind() != RingPresentation<K>::Kind::Veronese)
      throw InputError("the vero family needs a veronese presentation");
    ClosureFamily fam(Kind::Vero, ring);
    int g = ring->genus_parameter();
    std::vector<RingElement<K>> gens{ring->monomial_element(0, g, 0),
                                     ring->monomial_element(0, g - 1, 1)};
    auto b2 = ring->basis(2);
    for (int i = 0; i < b2->dim(); ++i)
      gens.push_back(ring->element(MultiPoly<K>(ring->vars(), b2->mono(i), ring->scalar(1))));
    fam.ideal_ = std::make_unique<GradedIdeal<K>>(ring, std::move(gens));

    MultiPoly<K> q1(ring->vars(), make_mono(0, g, 0), ring->scalar(1));
    q1 = q1 + MultiPoly<K>(ring->vars(), make_mono(0, 0, 2 * g), ring->scalar(-1));
    fam.pair_ = ParameterPair<K>{ring->element(q1), ring->monomial_element(0, g - 1, 1)};
    fam.extra_ = ring->monomial_element(1, g * g - 1, 0);
    return fam;
  }

  static ClosureFamily form_plus_tail(RingPtr ring, RingElement<K> f, int big_n) {
    if (ring->kind() == RingPresentation<K>::Kind::Veronese)
      throw InputError("the form-plus-tail family runs on standard-graded cones");
    if (f.is_zero() || !f.grade) throw InputError("the distinguished form must be homogeneous");
    if (*f.grade >= big_n) throw InputError("the tail grade must exceed the form grade");
    ClosureFamily fam(Kind::FormPlusTail, ring);
    std::vector<RingElement<K>> gens{f};
    auto bn = ring->basis(big_n);
    for (int i = 0; i < bn->dim(); ++i)
      gens.push_back(ring->element(MultiPoly<K>(ring->vars(), bn->mono(i), ring->scalar(1))));
    fam.ideal_ = std::make_unique<GradedIdeal<K>>(ring, std::move(gens));
    return fam;
  }

  Kind kind() const { return kind_; }
  const RingPtr& ring() const { return ring_; }
  const GradedIdeal<K>& ideal() const { return *ideal_; }
  bool has_reduction() const { return pair_.has_value(); }
  const ParameterPair<K>& reduction() const {
    if (!pair_) throw InputError("this family carries no reduction pair");
    return *pair_;
  }
  int resamples() const { return resamples_; }
  int r_parameter() const { return r_; }
  const RingElement<K>& vero_extra_generator() const {
    if (kind_ != Kind::Vero) throw InputError("only the vero family has the extra generator");
    return *extra_;
  }

  CurveModel curve_model() const {
    switch (kind_) {
      case Kind::MaximalIdeal:
      case Kind::Blowup:
        return PlaneCurve{ring_->hypersurface_degree()};
      case Kind::Vero:
        return Hyperelliptic{ring_->genus_parameter(), ring_->genus_parameter()};
      default:
        throw InputError("no curve model is attached to this family");
    }
  }
  long geometric_genus() const { return curve_pg(curve_model()); }

  int default_n_max() const {
    switch (kind_) {
      case Kind::MaximalIdeal:
        return ring_->hypersurface_degree();
      case Kind::Blowup: {
        int d = ring_->hypersurface_degree();
        return static_cast<int>((d - 1 + r_) / (r_ + 1)) + 2;
      }
      case Kind::Vero:
        return ring_->genus_parameter() + 2;
      default:
        throw InputError("no default horizon for this family");
    }
  }

  // Graded piece of closure(I^n).
  const Subspace<K>& closure_component(int n, int t) const {
    if (n < 0 || t < 0) throw InputError("closure components need n, t >= 0");
    if (kind_ == Kind::FormPlusTail) return ideal_->power_component(n, t);
    if (kind_ == Kind::Vero && n <= ring_->genus_parameter())
      return ideal_->power_component(n, t);
    std::lock_guard<std::mutex> lock(*mutex_);
    return closure_locked(n, t);
  }

  // len(A / closure(I^n)).
  long closure_colength(int n, const StabilizationPolicy& policy = {}) const {
    return graded_colength<K>(
        *ring_, [&](int t) -> const Subspace<K>& { return closure_component(n, t); }, policy);
  }

  // len(A / Q closure(I^n)); n = 0 gives len(A / Q) itself.
  long pair_times_closure_colength(int n, const StabilizationPolicy& policy = {}) const {
    if (n < 0) throw InputError("pair module colengths need n >= 0");
    const ParameterPair<K>& pair = reduction();
    if (pair.is_homogeneous())
      return closure_colength(n + 1, policy) + length_L_homogeneous(n, policy);
    return inhomogeneous_pair_colength(n, policy);
  }

  // Row-reduction certificate that a homogeneous element z does NOT lie in
  // Q closure(I^n). True is a proof of exclusion: membership would force the
  // (exactly computed) projection of z to grades <= t_hi into the projected
  // module, and it is not there. False is inconclusive for an inhomogeneous
  // pair (the projection lies in the projected module) and exact membership
  // for a homogeneous one.
  bool pair_module_excludes(int n, const RingElement<K>& z,
                            const StabilizationPolicy& policy = {}) const {
    if (z.is_zero() || !z.grade) throw InputError("exclusion test needs a homogeneous element");
    const ParameterPair<K>& pair = reduction();
    int tz = *z.grade;
    if (pair.is_homogeneous()) {
      std::vector<std::vector<K>> rows;
      for (const RingElement<K>* q : {&pair.q1, &pair.q2}) {
        int m = tz - *q->grade;
        if (m < 0) continue;
        const Subspace<K>& prev = closure_component(n, m);
        for (int i = 0; i < prev.dim(); ++i) {
          auto prod = ring_->element(q->nf * prev.row_poly(i));
          if (!prod.is_zero()) rows.push_back(poly_to_row(*ring_->basis(tz), prod.nf));
        }
      }
      auto span = Subspace<K>::span_rows(ring_->basis(tz), std::move(rows));
      return !span.contains(z.nf);
    }
    PairSheet sh = build_pair_sheet(n, std::max(n, tz) + policy.window + 5);
    auto row = sheet_coords(sh, z.nf);
    if (!row) return false;  // z is in the graded part S already
    std::vector<K>& v = *row;
    for (std::size_t r = 0; r < sh.outcome.pivot_cols.size(); ++r) {
      int p = sh.outcome.pivot_cols[r];
      if (is_zero(v[p])) continue;
      K f = v[p];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * sh.qrows[r][j];
    }
    for (const K& x : v)
      if (!is_zero(x)) return true;
    return false;
  }

  // L(n) = len( closure(I^(n+1)) / Q closure(I^n) ), n >= 1.
  long length_L(int n, const StabilizationPolicy& policy = {}) const {
    if (n < 1) throw InputError("quotient lengths are defined for n >= 1");
    const ParameterPair<K>& pair = reduction();
    if (pair.is_homogeneous()) return length_L_homogeneous(n, policy);
    long col_pair = inhomogeneous_pair_colength(n, policy);
    long col_closure = closure_colength(n + 1, policy);
    if (col_pair < col_closure)
      throw ComputeError("pair module colength fell below the closure colength");
    return col_pair - col_closure;
  }

  std::vector<long> lengths(int n_max, const StabilizationPolicy& policy = {}) const {
    std::vector<long> out;
    for (int n = 1; n <= n_max; ++n) out.push_back(length_L(n, policy));
    return out;
  }

  QSequenceReport run(int n_max, const StabilizationPolicy& policy = {}) const {
    return q_sequence_from_lengths(geometric_genus(), lengths(n_max, policy));
  }

 private:
  ClosureFamily(Kind kind, RingPtr ring) : kind_(kind), ring_(std::move(ring)) {}

  // Q closure(I^n) against closure(I^(n+1)), grade by grade; exact because
  // both sides are graded here. Stops once the product module fills `window`
  // consecutive whole grades (generation in grades <= 2 keeps it full).
  long length_L_homogeneous(int n, const StabilizationPolicy& policy) const {
    const ParameterPair<K>& pair = *pair_;
    int b1 = *pair.q1.grade, b2 = *pair.q2.grade;
    long total = 0;
    int full_run = 0;
    for (int t = 0; t <= policy.grade_cap; ++t) {
      const Subspace<K>& target = closure_component(n + 1, t);
      std::vector<std::vector<K>> rows;
      for (auto [q, b] : {std::make_pair(&pair.q1, b1), std::make_pair(&pair.q2, b2)}) {
        if (t - b < 0) continue;
        const Subspace<K>& prev = closure_component(n, t - b);
        for (int i = 0; i < prev.dim(); ++i) {
          auto prod = ring_->element(q->nf * prev.row_poly(i));
          if (!prod.is_zero()) rows.push_back(poly_to_row(*ring_->basis(t), prod.nf));
        }
      }
      auto span = Subspace<K>::span_rows(ring_->basis(t), std::move(rows));
      if (!target.contains_all_of(span))
        throw ComputeError("pair products escaped the closure in grade " + std::to_string(t));
      total += target.dim() - span.dim();
      full_run = span.dim() == ring_->hilbert(t) ? full_run + 1 : 0;
      if (full_run >= policy.window) return total;
    }
    throw ComputeError("quotient length did not stabilize below the grade cap (is the pair a "
                       "reduction?)");
  }

  // Working sheet for the inhomogeneous pair module W = Q closure(I^n),
  // in quotient coordinates modulo its graded part: per grade t,
  // S_t = q2 * closure(I^n)_(t-1) is eliminated first and only the non-pivot
  // ("U") coordinates survive; the q1 products, reduced to U coordinates over
  // the blocked basis of grades 0..t_hi, are row-reduced once. Sources up to
  // grade t_hi - 1 span the full projection of W to grades <= t_hi, because a
  // source of grade >= t_hi only produces components above t_hi.
  struct PairSheet {
    int t_hi = 0;
    std::vector<Subspace<K>> s_pieces;
    std::vector<std::vector<int>> ucols;
    std::vector<int> offset;
    std::vector<std::vector<K>> qrows;  // in reduced row-echelon form
    RrefOutcome outcome;
  };

  PairSheet build_pair_sheet(int n, int t_hi) const {
    const ParameterPair<K>& pair = *pair_;
    PairSheet sh;
    sh.t_hi = t_hi;
    sh.offset.assign(t_hi + 2, 0);
    sh.ucols.resize(t_hi + 1);
    for (int t = 0; t <= t_hi; ++t) {
      std::vector<std::vector<K>> rows;
      if (t >= 1) {
        const Subspace<K>& prev = closure_component(n, t - 1);
        for (int i = 0; i < prev.dim(); ++i) {
          auto prod = ring_->element(pair.q2.nf * prev.row_poly(i));
          if (!prod.is_zero()) rows.push_back(poly_to_row(*ring_->basis(t), prod.nf));
        }
      }
      sh.s_pieces.push_back(Subspace<K>::span_rows(ring_->basis(t), std::move(rows)));
      const auto& piv = sh.s_pieces.back().pivots();
      std::size_t k = 0;
      for (int c = 0; c < ring_->basis(t)->dim(); ++c) {
        if (k < piv.size() && piv[k] == c) {
          ++k;
          continue;
        }
        sh.ucols[t].push_back(c);
      }
      sh.offset[t + 1] = sh.offset[t] + static_cast<int>(sh.ucols[t].size());
    }

    for (int m = 0; m + 1 <= t_hi; ++m) {
      const Subspace<K>& piece = closure_component(n, m);
      for (int i = 0; i < piece.dim(); ++i) {
        auto prod = ring_->element(pair.q1.nf * piece.row_poly(i));
        if (prod.is_zero()) continue;
        auto row = sheet_coords(sh, prod.nf);
        if (row) sh.qrows.push_back(std::move(*row));
      }
    }
    sh.outcome = rref(sh.qrows);
    return sh;
  }

  // U-coordinate row of an element over the sheet's blocked basis, or
  // nullopt when every coordinate vanishes (i.e. the element lies in the
  // graded part S up to grade t_hi).
  std::optional<std::vector<K>> sheet_coords(const PairSheet& sh, const MultiPoly<K>& f) const {
    std::vector<K> row(sh.offset[sh.t_hi + 1]);
    bool seen = false;
    for (int d : f.component_degrees()) {
      int t = d / ring_->grade_step();
      if (t > sh.t_hi) continue;
      auto res = sh.s_pieces[t].residual(poly_to_row(*ring_->basis(t), f.component(d)));
      for (std::size_t j = 0; j < sh.ucols[t].size(); ++j) {
        row[sh.offset[t] + static_cast<int>(j)] = res[sh.ucols[t][j]];
        if (!is_zero(res[sh.ucols[t][j]])) seen = true;
      }
    }
    if (!seen) return std::nullopt;
    return row;
  }

  // len(A / Q closure(I^n)) for the inhomogeneous pair. For each T <= t_hi
  // the truncated codimension is
  //   c_T = sum_(t<=T) (dim A_t - dim S_t) - (pivots in blocks <= T),
  // nondecreasing and eventually the colength; the tail must be flat for
  // window+1 grades to be accepted, and the horizon escalates twice before
  // giving up.
  long inhomogeneous_pair_colength(int n, const StabilizationPolicy& policy) const {
    for (int t_hi = n + policy.window + 5; t_hi <= n + policy.window + 13; t_hi += 4) {
      PairSheet sh = build_pair_sheet(n, t_hi);
      std::vector<long> c(t_hi + 1);
      std::size_t pk = 0;
      long udims = 0, used = 0;
      for (int t = 0; t <= t_hi; ++t) {
        udims += static_cast<long>(sh.ucols[t].size());
        while (pk < sh.outcome.pivot_cols.size() && sh.outcome.pivot_cols[pk] < sh.offset[t + 1]) {
          ++pk;
          ++used;
        }
        c[t] = udims - used;
      }
      for (int t = 1; t <= t_hi; ++t)
        if (c[t] < c[t - 1]) throw ComputeError("truncated codimension decreased");
      bool flat = true;
      for (int t = t_hi - policy.window; t < t_hi; ++t) flat = flat && c[t] == c[t_hi];
      if (flat) return c[t_hi];
    }
    throw ComputeError("inhomogeneous pair colength did not stabilize (is the pair a "
                       "reduction?)");
  }

  const Subspace<K>& closure_locked(int n, int t) const {
    auto key = std::make_pair(n, t);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    Subspace<K> result(ring_->basis(t));
    switch (kind_) {
      case Kind::MaximalIdeal:
        result = t >= n ? Subspace<K>::full(ring_->basis(t), ring_->one())
                        : Subspace<K>(ring_->basis(t));
        break;
      case Kind::Blowup:
        result = blowup_component(n, t);
        break;
      case Kind::Vero:
        result = vero_component(n, t);
        break;
      default:
        throw InputError("unreachable closure kind");
    }
    return cache_.emplace(key, std::move(result)).first->second;
  }

  // Single-product form of (I^s)_t for I = (L) + m^(r+1): the smallest j
  // with t - j >= (s-j)(r+1) gives L^j R_(t-j), which absorbs every other
  // admissible term.
  Subspace<K> blowup_component(int s, int t) const {
    if (s == 0) return Subspace<K>::full(ring_->basis(t), ring_->one());
    if (t < s) return Subspace<K>(ring_->basis(t));
    long need = static_cast<long>(s) * (r_ + 1) - t;
    int j = need <= 0 ? 0 : static_cast<int>((need + r_ - 1) / r_);
    RingElement<K> lj = ring_->element(MultiPoly<K>(ring_->vars(), make_mono(0, 0, 0), ring_->one()));
    for (int i = 0; i < j; ++i) lj = ring_->multiply(lj, *linear_);
    std::vector<std::vector<K>> rows;
    auto rest = ring_->basis(t - j);
    for (int i = 0; i < rest->dim(); ++i) {
      auto prod = ring_->element(lj.nf * MultiPoly<K>(ring_->vars(), rest->mono(i), ring_->scalar(1)));
      if (!prod.is_zero()) rows.push_back(poly_to_row(*ring_->basis(t), prod.nf));
    }
    return Subspace<K>::span_rows(ring_->basis(t), std::move(rows));
  }

  Subspace<K> vero_component(int n, int t) const {
    int g = ring_->genus_parameter();
    if (n == g + 1) {
      const Subspace<K>& power = ideal_->power_component(n, t);
      // The fault hook drops the genuine extra closure generator so the
      // acceptance suite can prove it would notice.
      if (fault_enabled("closure_oracle")) return power;
      std::vector<std::vector<K>> rows;
      for (int i = 0; i < power.dim(); ++i) rows.push_back(power.rows()[i]);
      int rest = t - (g + 1);
      if (rest >= 0) {
        auto basis = ring_->basis(rest);
        for (int i = 0; i < basis->dim(); ++i) {
          auto prod = ring_->element(extra_->nf *
                                     MultiPoly<K>(ring_->vars(), basis->mono(i), ring_->scalar(1)));
          if (!prod.is_zero()) rows.push_back(poly_to_row(*ring_->basis(t), prod.nf));
        }
      }
      return Subspace<K>::span_rows(ring_->basis(t), std::move(rows));
    }
    // n >= g+2: closure(I^n) = I * closure(I^(n-1)); n-1 >= g+1 stays on the
    // locked path, so this recursion never retakes the mutex.
    std::vector<std::vector<K>> rows;
    for (const auto& gen : ideal_->gens()) {
      int rest = t - *gen.grade;
      if (rest < 0) continue;
      const Subspace<K>& prev = closure_locked(n - 1, rest);
      for (int i = 0; i < prev.dim(); ++i) {
        auto prod = ring_->element(gen.nf * prev.row_poly(i));
        if (!prod.is_zero()) rows.push_back(poly_to_row(*ring_->basis(t), prod.nf));
      }
    }
    return Subspace<K>::span_rows(ring_->basis(t), std::move(rows));
  }

  Kind kind_;
  RingPtr ring_;
  std::unique_ptr<GradedIdeal<K>> ideal_;
  std::optional<ParameterPair<K>> pair_;
  std::optional<RingElement<K>> linear_;  // blowup: the sampled linear form L
  std::optional<RingElement<K>> extra_;   // vero: x y^(g^2-1)
  int r_ = 0;
  int resamples_ = 0;
  // Boxed so the family stays movable out of its factories.
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  mutable std::map<std::pair<int, int>, Subspace<K>> cache_;
};

}  // namespace nrcalc
