#pragma once

// Sparse multivariate polynomials over an exact scalar field. Terms are kept
// sorted in descending graded-lex order with the weighted degree precomputed
// per term, so degree filtering and homogeneous-component extraction are
// linear scans. At most 8 variables; exponents are stored densely.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "nrcalc/errors.hpp"
#include "nrcalc/field.hpp"

namespace nrcalc {

constexpr int kMaxVars = 8;

// An ordered list of named, positively weighted variables. The declaration
// order is the term-order precedence: earlier variables compare higher.
struct VarSystem {
  std::vector<std::string> names;
  std::vector<int> weights;

  VarSystem(std::vector<std::string> n, std::vector<int> w)
      : names(std::move(n)), weights(std::move(w)) {
    if (names.size() != weights.size() || names.empty() ||
        names.size() > static_cast<std::size_t>(kMaxVars))
      throw InputError("variable system needs 1..8 named variables with weights");
    for (int x : weights)
      if (x <= 0) throw InputError("variable weights must be positive");
  }
  int count() const { return static_cast<int>(names.size()); }
};

using VarSystemPtr = std::shared_ptr<const VarSystem>;

inline VarSystemPtr make_vars(std::vector<std::string> names, std::vector<int> weights) {
  return std::make_shared<const VarSystem>(std::move(names), std::move(weights));
}

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  static Monomial one() { return Monomial{}; }
  static Monomial var(int i, int exp = 1) {
    Monomial m;
    m.e[i] = static_cast<std::uint16_t>(exp);
    return m;
  }

  int exp(int i) const { return e[i]; }
  Monomial times(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
      int s = e[i] + o.e[i];
      assert(s <= 0xffff);
      r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  int weighted_degree(const VarSystem& vs) const {
    int d = 0;
    for (int i = 0; i < vs.count(); ++i) d += vs.weights[i] * e[i];
    return d;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a.e == b.e); }
};

// Graded-lex: compare weighted degree first, then exponents of the earliest
// variables. Returns <0, 0, >0 like a three-way comparison, where "greater"
// means later in the descending term order used by MultiPoly.
inline int mono_cmp(const VarSystem& vs, const Monomial& a, const Monomial& b) {
  int da = a.weighted_degree(vs), db = b.weighted_degree(vs);
  if (da != db) return da < db ? -1 : 1;
  for (int i = 0; i < vs.count(); ++i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

inline std::string mono_to_string(const VarSystem& vs, const Monomial& m) {
  std::string s;
  for (int i = 0; i < vs.count(); ++i) {
    if (m.e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vs.names[i];
    if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
  }
  return s.empty() ? "1" : s;
}

template <ScalarField K>
class MultiPoly {
 public:
  struct Term {
    Monomial m;
    int deg;  // weighted degree, cached
    K c;
  };

  explicit MultiPoly(VarSystemPtr vars) : vars_(std::move(vars)) {}
  MultiPoly(VarSystemPtr vars, const Monomial& m, K c) : vars_(std::move(vars)) {
    if (!nrcalc::is_zero(c)) terms_.push_back(Term{m, m.weighted_degree(*vars_), std::move(c)});
  }

  const VarSystemPtr& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Weighted degree of the leading term; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.front().deg; }
  int low_degree() const { return terms_.empty() ? -1 : terms_.back().deg; }
  bool is_homogeneous() const { return terms_.empty() || terms_.front().deg == terms_.back().deg; }

  const K& leading_coeff() const {
    assert(!terms_.empty());
    return terms_.front().c;
  }
  const Monomial& leading_monomial() const {
    assert(!terms_.empty());
    return terms_.front().m;
  }

  MultiPoly operator+(const MultiPoly& o) const { return merged(o, false); }
  MultiPoly operator-(const MultiPoly& o) const { return merged(o, true); }
  MultiPoly operator-() const {
    MultiPoly r(vars_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back(Term{t.m, t.deg, -t.c});
    return r;
  }

  MultiPoly scaled(const K& c) const {
    MultiPoly r(vars_);
    if (nrcalc::is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back(Term{t.m, t.deg, t.c * c});
    return r;
  }

  MultiPoly times_monomial(const Monomial& m, const K& c) const {
    MultiPoly r(vars_);
    if (nrcalc::is_zero(c)) return r;
    int dm = m.weighted_degree(*vars_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back(Term{t.m.times(m), t.deg + dm, t.c * c});
    return r;
  }

  MultiPoly operator*(const MultiPoly& o) const {
    // Accumulate into an ordered map keyed by the term order; results come out
    // canonical and deterministic regardless of operand term layout.
    auto cmp = [this](const Monomial& a, const Monomial& b) {
      return mono_cmp(*vars_, a, b) > 0;  // descending
    };
    std::map<Monomial, K, decltype(cmp)> acc(cmp);
    for (const Term& s : terms_)
      for (const Term& t : o.terms_) {
        Monomial m = s.m.times(t.m);
        auto [it, fresh] = acc.try_emplace(m, K());
        if (fresh)
          it->second = s.c * t.c;
        else
          it->second = it->second + s.c * t.c;
      }
    MultiPoly r(vars_);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!nrcalc::is_zero(c)) r.terms_.push_back(Term{m, m.weighted_degree(*vars_), c});
    return r;
  }

  // The sum of all terms of weighted degree exactly d.
  MultiPoly component(int d) const {
    MultiPoly r(vars_);
    for (const Term& t : terms_)
      if (t.deg == d) r.terms_.push_back(t);
    return r;
  }

  std::vector<int> component_degrees() const {
    std::vector<int> ds;
    for (const Term& t : terms_)
      if (ds.empty() || ds.back() != t.deg) ds.push_back(t.deg);
    return ds;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].m != b.terms_[i].m || !(a.terms_[i].c == b.terms_[i].c)) return false;
    return true;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
      std::string cs = nrcalc::to_string(t.c);
      if (!first) os << " + ";
      first = false;
      if (t.m == Monomial::one())
        os << cs;
      else if (cs == "1")
        os << mono_to_string(*vars_, t.m);
      else
        os << cs << "*" << mono_to_string(*vars_, t.m);
    }
    return os.str();
  }

  // Internal invariant check, used by tests and asserts.
  bool well_formed() const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (nrcalc::is_zero(terms_[i].c)) return false;
      if (terms_[i].deg != terms_[i].m.weighted_degree(*vars_)) return false;
      if (i > 0 && mono_cmp(*vars_, terms_[i - 1].m, terms_[i].m) <= 0) return false;
    }
    return true;
  }

 private:
  MultiPoly merged(const MultiPoly& o, bool subtract) const {
    assert(vars_ == o.vars_ || (vars_ && o.vars_ && vars_->names == o.vars_->names));
    MultiPoly r(vars_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      int c;
      if (i == terms_.size())
        c = -1;
      else if (j == o.terms_.size())
        c = 1;
      else
        c = mono_cmp(*vars_, terms_[i].m, o.terms_[j].m);
      if (c > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (c < 0) {
        const Term& t = o.terms_[j++];
        r.terms_.push_back(Term{t.m, t.deg, subtract ? -t.c : t.c});
      } else {
        K v;
        if (subtract)
          v = terms_[i].c - o.terms_[j].c;
        else
          v = terms_[i].c + o.terms_[j].c;
        if (!nrcalc::is_zero(v)) r.terms_.push_back(Term{terms_[i].m, terms_[i].deg, v});
        ++i;
        ++j;
      }
    }
    return r;
  }

  VarSystemPtr vars_;
  std::vector<Term> terms_;
};

}  // namespace nrcalc
