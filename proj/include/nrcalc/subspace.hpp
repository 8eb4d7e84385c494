#pragma once

// Finite-dimensional subspaces of a fixed monomial span, stored as RREF rows
// over an explicit ordered monomial basis. Uniqueness of RREF makes equality
// of subspaces a straight row comparison, and membership a linear reduction.

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "nrcalc/errors.hpp"
#include "nrcalc/poly.hpp"
#include "nrcalc/rref.hpp"

namespace nrcalc {

// The ambient coordinate system: an ordered list of monomials. For a graded
// piece all monomials share one weighted degree; the filtered machinery uses
// a concatenation of graded pieces in ascending degree order.
class MonomialBasis {
 public:
  MonomialBasis(VarSystemPtr vars, std::vector<Monomial> monos)
      : vars_(std::move(vars)), monos_(std::move(monos)) {
    for (std::size_t i = 0; i < monos_.size(); ++i) {
      degs_.push_back(monos_[i].weighted_degree(*vars_));
      auto [it, fresh] = index_.emplace(monos_[i].e, static_cast<int>(i));
      if (!fresh) throw ComputeError("monomial basis has a repeated monomial");
    }
  }

  const VarSystemPtr& vars() const { return vars_; }
  int dim() const { return static_cast<int>(monos_.size()); }
  const Monomial& mono(int i) const { return monos_[i]; }
  int degree_of(int i) const { return degs_[i]; }
  int index_of(const Monomial& m) const {
    auto it = index_.find(m.e);
    return it == index_.end() ? -1 : it->second;
  }
  // Number of coordinates whose weighted degree is <= t.
  int dim_up_to(int t) const {
    int n = 0;
    for (int d : degs_)
      if (d <= t) ++n;
    return n;
  }

 private:
  VarSystemPtr vars_;
  std::vector<Monomial> monos_;
  std::vector<int> degs_;
  std::map<std::array<std::uint16_t, kMaxVars>, int> index_;
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

template <ScalarField K>
std::vector<K> poly_to_row(const MonomialBasis& basis, const MultiPoly<K>& f) {
  std::vector<K> row(basis.dim());
  for (const auto& t : f.terms()) {
    int i = basis.index_of(t.m);
    if (i < 0)
      throw ComputeError("polynomial has a monomial outside the ambient basis: " +
                         mono_to_string(*f.vars(), t.m));
    row[i] = t.c;
  }
  return row;
}

template <ScalarField K>
MultiPoly<K> row_to_poly(const MonomialBasis& basis, const std::vector<K>& row) {
  MultiPoly<K> f(basis.vars());
  for (int i = 0; i < basis.dim(); ++i)
    if (!is_zero(row[i])) f = f + MultiPoly<K>(basis.vars(), basis.mono(i), row[i]);
  return f;
}

template <ScalarField K>
class Subspace {
 public:
  explicit Subspace(BasisPtr basis) : basis_(std::move(basis)) {}

  static Subspace span_rows(BasisPtr basis, std::vector<std::vector<K>> rows,
                            RrefMode mode = RrefMode::Auto) {
    Subspace s(std::move(basis));
    RrefOutcome out = rref(rows, mode);
    s.rows_ = std::move(rows);
    s.pivots_ = std::move(out.pivot_cols);
    return s;
  }

  static Subspace span(BasisPtr basis, const std::vector<MultiPoly<K>>& polys,
                       RrefMode mode = RrefMode::Auto) {
    std::vector<std::vector<K>> rows;
    rows.reserve(polys.size());
    for (const auto& f : polys) rows.push_back(poly_to_row(*basis, f));
    return span_rows(std::move(basis), std::move(rows), mode);
  }

  // The whole ambient space, without running elimination on an identity
  // block. The caller supplies the field's 1 since Fp cannot make one from
  // thin air.
  static Subspace full(BasisPtr basis, const K& one) {
    Subspace s(basis);
    for (int i = 0; i < basis->dim(); ++i) {
      std::vector<K> row(basis->dim());
      row[i] = one;
      s.rows_.push_back(std::move(row));
      s.pivots_.push_back(i);
    }
    return s;
  }

  const MonomialBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  int codim() const { return basis_->dim() - dim(); }
  const std::vector<std::vector<K>>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  MultiPoly<K> row_poly(int i) const { return row_to_poly<K>(*basis_, rows_[i]); }

  // Pivot count among coordinates of weighted degree <= t. For a basis laid
  // out in ascending degree blocks this is the dimension of the image of the
  // row space under truncation at degree t.
  int rank_up_to(int t) const {
    int n = 0;
    for (int p : pivots_)
      if (basis_->degree_of(p) <= t) ++n;
    return n;
  }

  bool contains(const MultiPoly<K>& f) const { return reduce(poly_to_row(*basis_, f)).second; }

  // Remainder of a coordinate vector after eliminating every pivot of this
  // subspace; zero exactly on members, and otherwise a canonical
  // representative of the class modulo the subspace.
  std::vector<K> residual(std::vector<K> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int p = pivots_[r];
      if (is_zero(v[p])) continue;
      K f = v[p];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * rows_[r][j];
    }
    return v;
  }

  // Expresses f over the stored RREF rows when it lies in the subspace.
  std::optional<std::vector<K>> witness(const MultiPoly<K>& f) const {
    auto [coeffs, inside] = reduce(poly_to_row(*basis_, f));
    if (!inside) return std::nullopt;
    return coeffs;
  }

  Subspace joined_with(const Subspace& o, RrefMode mode = RrefMode::Auto) const {
    std::vector<std::vector<K>> rows = rows_;
    rows.insert(rows.end(), o.rows_.begin(), o.rows_.end());
    return span_rows(basis_, std::move(rows), mode);
  }

  bool same_space(const Subspace& o) const {
    if (rows_.size() != o.rows_.size()) return false;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < rows_[i].size(); ++j)
        if (!(rows_[i][j] == o.rows_[i][j])) return false;
    return true;
  }

  bool contains_all_of(const Subspace& o) const {
    for (const auto& r : o.rows_)
      if (!reduce(r).second) return false;
    return true;
  }

 private:
  std::pair<std::vector<K>, bool> reduce(std::vector<K> v) const {
    std::vector<K> coeffs(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int p = pivots_[r];
      if (is_zero(v[p])) continue;
      K f = v[p];
      coeffs[r] = f;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * rows_[r][j];
    }
    for (const K& x : v)
      if (!is_zero(x)) return {std::move(coeffs), false};
    return {std::move(coeffs), true};
  }

  BasisPtr basis_;
  std::vector<std::vector<K>> rows_;
  std::vector<int> pivots_;
};

}  // namespace nrcalc
