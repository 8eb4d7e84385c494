#pragma once

// The three coordinate-ring presentations the computations run over:
//
//   standard_hypersurface(d, f): k[x,y,z]/(f) with deg x = deg y = deg z = 1
//     and f homogeneous of degree d, monic in x. The cone over the plane
//     curve f = 0. Grade n is internal degree n.
//
//   vero_hypersurface(g): k[x,y,z]/(x^2 + y^(2g+2) + z^(2g+2)) with
//     weights (g+1, 1, 1). Normal forms have x-exponent at most 1, so an
//     element is the pair f0 + x*f1.
//
//   veronese(g): the subring A of the vero hypersurface spanned by the
//     internal degrees divisible by g; grade n of A is internal degree n*g.
//     A_1 has dimension g+1 and A is generated in grades 1 and 2.
//
// Normal form is division by the defining equation in the distinguished
// variable x; graded pieces are enumerated as explicit monomial bases and
// cached per (ring, grade).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "nrcalc/errors.hpp"
#include "nrcalc/poly.hpp"
#include "nrcalc/subspace.hpp"

namespace nrcalc {

inline Monomial make_mono(int a, int b, int c) {
  Monomial m;
  m.e[0] = static_cast<std::uint16_t>(a);
  m.e[1] = static_cast<std::uint16_t>(b);
  m.e[2] = static_cast<std::uint16_t>(c);
  return m;
}

// An element in normal form. Ring operations live on RingPresentation; this
// is just the reduced polynomial plus its grade when homogeneous.
template <ScalarField K>
struct RingElement {
  MultiPoly<K> nf;
  std::optional<int> grade;  // set iff homogeneous in the ring grading

  bool is_zero() const { return nf.is_zero(); }
};

template <ScalarField K>
class RingPresentation {
 public:
  enum class Kind { StandardHypersurface, VeroHypersurface, Veronese };

  using Ptr = std::shared_ptr<const RingPresentation>;

  static Ptr standard_hypersurface(int d, MultiPoly<K> f, FieldMode fm) {
    if (d < 2) throw InputError("hypersurface degree must be at least 2");
    if (f.is_zero() || !f.is_homogeneous() || f.degree() != d)
      throw InputError("defining form must be homogeneous of the stated degree");
    // Normalize to monic in x^d.
    const Monomial xd = make_mono(d, 0, 0);
    K lead{};
    bool found = false;
    for (const auto& t : f.terms())
      if (t.m == xd) {
        lead = t.c;
        found = true;
      }
    if (!found) throw InputError("defining form must contain x^" + std::to_string(d));
    f = f.scaled(inverse(lead));
    auto r = new RingPresentation(Kind::StandardHypersurface, fm, f.vars());
    r->d_ = d;
    r->tail_ = f - MultiPoly<K>(f.vars(), xd, scalar_from_int<K>(fm, 1));
    return Ptr(r);
  }

  // x^d + y^d + z^d; the curve is smooth whenever the characteristic does
  // not divide d, which the entry points validate.
  static Ptr fermat_hypersurface(int d, FieldMode fm) {
    auto vars = make_vars({"x", "y", "z"}, {1, 1, 1});
    K one = scalar_from_int<K>(fm, 1);
    MultiPoly<K> f(vars, make_mono(d, 0, 0), one);
    f = f + MultiPoly<K>(vars, make_mono(0, d, 0), one);
    f = f + MultiPoly<K>(vars, make_mono(0, 0, d), one);
    return standard_hypersurface(d, f, fm);
  }

  static Ptr vero_hypersurface(int g, FieldMode fm) {
    if (g < 1) throw InputError("vero hypersurface needs g >= 1");
    auto r = new RingPresentation(Kind::VeroHypersurface, fm,
                                  make_vars({"x", "y", "z"}, {g + 1, 1, 1}));
    r->g_ = g;
    r->d_ = 2;
    K one = scalar_from_int<K>(fm, 1);
    int w = 2 * g + 2;
    r->tail_ = MultiPoly<K>(r->vars_, make_mono(0, w, 0), one) +
               MultiPoly<K>(r->vars_, make_mono(0, 0, w), one);
    return Ptr(r);
  }

  static Ptr veronese(int g, FieldMode fm) {
    if (g < 2) throw InputError("veronese subring needs g >= 2");
    auto base = vero_hypersurface(g, fm);
    auto r = new RingPresentation(Kind::Veronese, fm, base->vars_);
    r->g_ = g;
    r->d_ = 2;
    r->tail_ = base->tail_;
    return Ptr(r);
  };

  Kind kind() const { return kind_; }
  const FieldMode& field() const { return fm_; }
  const VarSystemPtr& vars() const { return vars_; }
  int hypersurface_degree() const { return d_; }
  int genus_parameter() const { return g_; }

  // Internal weighted degree of the grade-n piece.
  int grade_step() const { return kind_ == Kind::Veronese ? g_ : 1; }
  int internal_degree(int n) const { return n * grade_step(); }

  K scalar(long long n) const { return scalar_from_int<K>(fm_, n); }
  K one() const { return scalar(1); }

  // Division by the defining equation: rewrites x^d as -tail until every
  // term has x-exponent below d. The tail has lower x-degree, so each pass
  // strictly drops the maximal x-exponent and the loop terminates.
  MultiPoly<K> reduce(const MultiPoly<K>& input) const {
    MultiPoly<K> p = input;
    for (;;) {
      MultiPoly<K> high(vars_), rest(vars_);
      for (const auto& t : p.terms()) {
        if (t.m.exp(0) >= d_) {
          Monomial m = t.m;
          m.e[0] = static_cast<std::uint16_t>(m.e[0] - d_);
          high = high + MultiPoly<K>(vars_, m, t.c);
        } else {
          rest = rest + MultiPoly<K>(vars_, t.m, t.c);
        }
      }
      if (high.is_zero()) return rest;
      p = rest - high * tail_;
    }
  }

  RingElement<K> element(const MultiPoly<K>& raw) const {
    MultiPoly<K> nf = reduce(raw);
    if (kind_ == Kind::Veronese)
      for (int deg : nf.component_degrees())
        if (deg % g_ != 0)
          throw InputError("element lies outside the veronese subring: " + nf.to_string());
    std::optional<int> grade;
    if (nf.is_homogeneous() && !nf.is_zero()) grade = nf.degree() / grade_step();
    if (nf.is_zero()) grade = 0;
    return RingElement<K>{std::move(nf), grade};
  }

  RingElement<K> monomial_element(int a, int b, int c) const {
    return element(MultiPoly<K>(vars_, make_mono(a, b, c), one()));
  }

  RingElement<K> multiply(const RingElement<K>& u, const RingElement<K>& v) const {
    return element(u.nf * v.nf);
  }

  // Ordered monomial basis of the grade-n piece, cached.
  BasisPtr basis(int n) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = basis_cache_.find(n);
    if (it != basis_cache_.end()) return it->second;
    auto b = std::make_shared<const MonomialBasis>(vars_, grade_monomials(n));
    basis_cache_.emplace(n, b);
    return b;
  }

  // Concatenated basis of grades lo..hi in ascending order, for the
  // filtered-length computations.
  BasisPtr block_basis(int lo, int hi) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto key = std::make_pair(lo, hi);
    auto it = block_cache_.find(key);
    if (it != block_cache_.end()) return it->second;
    std::vector<Monomial> monos;
    for (int n = lo; n <= hi; ++n) {
      auto piece = grade_monomials(n);
      monos.insert(monos.end(), piece.begin(), piece.end());
    }
    auto b = std::make_shared<const MonomialBasis>(vars_, std::move(monos));
    block_cache_.emplace(key, b);
    return b;
  }

  long hilbert(int n) const { return n < 0 ? 0 : static_cast<long>(grade_monomials(n).size()); }

  // Largest grade in which the graded local cohomology at the top spot is
  // nonzero. For the graded hypersurfaces this is deg f minus the weight sum;
  // the veronese pieces A_n = R_(ng) are nonzero from n = 0 on while
  // a(R) = g - 1 < g, which pins the value 0.
  int a_invariant() const {
    switch (kind_) {
      case Kind::StandardHypersurface:
        return d_ - 3;
      case Kind::VeroHypersurface:
        return (2 * g_ + 2) - (g_ + 3);
      case Kind::Veronese:
        return 0;
    }
    return 0;
  }

 private:
  RingPresentation(Kind k, FieldMode fm, VarSystemPtr vars)
      : kind_(k), fm_(fm), vars_(std::move(vars)), tail_(vars_) {}

  // Monomials of grade n in descending graded-lex order. For the weighted
  // kinds the x-block (weight g+1) precedes the x-free block.
  std::vector<Monomial> grade_monomials(int n) const {
    std::vector<Monomial> out;
    if (n < 0) return out;
    if (kind_ == Kind::StandardHypersurface) {
      for (int a = std::min(n, d_ - 1); a >= 0; --a)
        for (int b = n - a; b >= 0; --b) out.push_back(make_mono(a, b, n - a - b));
      return out;
    }
    int m = internal_degree(n);
    int mx = m - (g_ + 1);
    if (mx >= 0)
      for (int b = mx; b >= 0; --b) out.push_back(make_mono(1, b, mx - b));
    for (int b = m; b >= 0; --b) out.push_back(make_mono(0, b, m - b));
    return out;
  }

  Kind kind_;
  FieldMode fm_;
  VarSystemPtr vars_;
  int d_ = 0;  // x-exponent threshold for reduction
  int g_ = 0;
  MultiPoly<K> tail_;  // f - x^d

  mutable std::mutex cache_mutex_;
  mutable std::map<int, BasisPtr> basis_cache_;
  mutable std::map<std::pair<int, int>, BasisPtr> block_cache_;
};

// Splits a normal-form element of the weighted kinds into the pair
// (f0, f1) with f = f0 + x*f1.
template <ScalarField K>
std::pair<MultiPoly<K>, MultiPoly<K>> xsplit(const MultiPoly<K>& f) {
  MultiPoly<K> f0(f.vars()), f1(f.vars());
  for (const auto& t : f.terms()) {
    assert(t.m.exp(0) <= 1);
    if (t.m.exp(0) == 0) {
      f0 = f0 + MultiPoly<K>(f.vars(), t.m, t.c);
    } else {
      Monomial m = t.m;
      m.e[0] = 0;
      f1 = f1 + MultiPoly<K>(f.vars(), m, t.c);
    }
  }
  return {f0, f1};
}

}  // namespace nrcalc
