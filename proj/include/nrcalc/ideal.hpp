#pragma once

// Graded ideals and the exact length computations built on them.
//
// Everything here reduces to linear algebra on graded pieces: an ideal power
// (I^s)_t is the span of generator multiples of (I^(s-1)) pieces, a colength
// is a sum of codimensions over grades, and equality of module pieces is
// equality of RREF rows. Two length routines coexist:
//
//   graded_colength    for homogeneous submodules, grade by grade, stopping
//                      once the quotient vanishes for `window` consecutive
//                      grades. The window is sound as soon as it is at least
//                      the top algebra-generator grade (2 here).
//
//   filtered_colength  for submodules generated by inhomogeneous elements
//                      (the veronese minimal reductions are the motivating
//                      case). One elimination over a degree-blocked basis
//                      computes every truncated codimension at once; the
//                      answer is read off the stabilized tail.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "nrcalc/errors.hpp"
#include "nrcalc/ring.hpp"
#include "nrcalc/rref.hpp"
#include "nrcalc/subspace.hpp"

namespace nrcalc {

struct StabilizationPolicy {
  int window = 4;   // consecutive stable grades required before trusting a tail
  int grade_cap = 96;  // hard horizon; hitting it is a ComputeError
};

template <ScalarField K>
class GradedIdeal {
 public:
  using RingPtr = typename RingPresentation<K>::Ptr;

  GradedIdeal(RingPtr ring, std::vector<RingElement<K>> gens)
      : ring_(std::move(ring)), gens_(std::move(gens)) {
    for (const auto& g : gens_) {
      if (g.is_zero()) throw InputError("ideal generators must be nonzero");
      if (!g.grade) throw InputError("ideal generators must be homogeneous: " + g.nf.to_string());
    }
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<RingElement<K>>& gens() const { return gens_; }

  // (I^s)_t as a subspace of the grade-t piece. s = 0 is the whole ring.
  const Subspace<K>& power_component(int s, int t) const {
    if (s < 0 || t < 0) throw InputError("ideal power components need s, t >= 0");
    std::lock_guard<std::mutex> lock(mutex_);
    return power_component_locked(s, t);
  }

  const Subspace<K>& component(int t) const { return power_component(1, t); }

 private:
  const Subspace<K>& power_component_locked(int s, int t) const {
    auto key = std::make_pair(s, t);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    Subspace<K> result(ring_->basis(t));
    if (s == 0) {
      result = Subspace<K>::full(ring_->basis(t), ring_->one());
    } else {
      std::vector<MultiPoly<K>> rows;
      for (const auto& g : gens_) {
        int tg = t - *g.grade;
        if (tg < 0) continue;
        const Subspace<K>& prev = power_component_locked(s - 1, tg);
        for (int i = 0; i < prev.dim(); ++i) {
          auto prod = ring_->element(g.nf * prev.row_poly(i));
          if (!prod.is_zero()) rows.push_back(prod.nf);
        }
      }
      result = Subspace<K>::span(ring_->basis(t), rows);
    }
    return cache_.emplace(key, std::move(result)).first->second;
  }

  RingPtr ring_;
  std::vector<RingElement<K>> gens_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, Subspace<K>> cache_;
};

// Length of (ring in grades >= 0) / (module given grade by grade). The
// callback returns the submodule piece in grade t; it must be a subspace of
// ring.basis(t). Sums codimensions until `window` consecutive grades vanish.
template <ScalarField K>
long graded_colength(const RingPresentation<K>& ring,
                     const std::function<const Subspace<K>&(int)>& piece,
                     const StabilizationPolicy& policy = {}) {
  long total = 0;
  int zero_run = 0;
  for (int t = 0; t <= policy.grade_cap; ++t) {
    long deficit = ring.hilbert(t) - piece(t).dim();
    if (deficit < 0) throw ComputeError("module piece exceeds the ambient grade piece");
    total += deficit;
    zero_run = deficit == 0 ? zero_run + 1 : 0;
    if (zero_run >= policy.window) return total;
  }
  throw ComputeError("graded colength did not stabilize below the grade cap");
}

template <ScalarField K>
long ideal_colength(const GradedIdeal<K>& ideal, const StabilizationPolicy& policy = {}) {
  return graded_colength<K>(*ideal.ring(), [&](int t) -> const Subspace<K>& {
    return ideal.component(t);
  }, policy);
}

// A candidate pair of joint-reduction elements. q1, q2 need not be
// homogeneous (the veronese families force an inhomogeneous q1), but every
// homogeneous component must lie in the ring.
template <ScalarField K>
struct ParameterPair {
  RingElement<K> q1, q2;

  bool is_homogeneous() const { return q1.grade && q2.grade; }
  int top_grade(const RingPresentation<K>& ring) const {
    int step = ring.grade_step();
    int a = q1.nf.is_zero() ? 0 : q1.nf.degree() / step;
    int b = q2.nf.is_zero() ? 0 : q2.nf.degree() / step;
    return std::max(a, b);
  }
};

// Spanning elements of (q1, q2) * N, where N is handed over grade by grade
// up to n_hi. With an inhomogeneous pair the products are the input to
// filtered_colength below.
template <ScalarField K>
std::vector<RingElement<K>> pair_module_products(
    const RingPresentation<K>& ring, const ParameterPair<K>& pair,
    const std::function<const Subspace<K>&(int)>& module_piece, int n_hi) {
  std::vector<RingElement<K>> out;
  for (int n = 0; n <= n_hi; ++n) {
    const Subspace<K>& piece = module_piece(n);
    for (int i = 0; i < piece.dim(); ++i) {
      MultiPoly<K> v = piece.row_poly(i);
      for (const RingElement<K>* q : {&pair.q1, &pair.q2}) {
        auto prod = ring.element(q->nf * v);
        if (!prod.is_zero()) out.push_back(std::move(prod));
      }
    }
  }
  return out;
}

struct FilteredColength {
  long value = 0;
  int stabilized_at = 0;  // first grade from which the truncated value is flat
};

// Exact colength of a finite-colength submodule W spanned by possibly
// inhomogeneous elements. `t_valid` is the largest grade T for which the
// spanning set is complete below T, i.e. every element of W with a component
// of grade <= T is a combination of spanning elements whose components all
// appear among the supplied ones. The truncated codimension
//
//   c_T = dim(grades <= T) - rank(rows truncated to grades <= T)
//
// is nondecreasing in T and eventually equals the colength; the final
// `window + 1` values must agree or the computation refuses the answer.
// One elimination over the degree-blocked basis serves every T: a truncated
// rank is just the number of pivots in columns of grade <= T.
template <ScalarField K>
FilteredColength filtered_colength(const RingPresentation<K>& ring,
                                   const std::vector<RingElement<K>>& spanning, int t_valid,
                                   const StabilizationPolicy& policy = {}) {
  int step = ring.grade_step();
  int n_top = t_valid;
  for (const auto& f : spanning)
    if (!f.is_zero()) n_top = std::max(n_top, f.nf.degree() / step);

  BasisPtr block = ring.block_basis(0, n_top);
  std::vector<std::vector<K>> rows;
  rows.reserve(spanning.size());
  for (const auto& f : spanning)
    if (!f.is_zero()) rows.push_back(poly_to_row(*block, f.nf));
  Subspace<K> w = Subspace<K>::span_rows(block, std::move(rows));

  std::vector<long> c(t_valid + 1);
  for (int T = 0; T <= t_valid; ++T) {
    int cut = ring.internal_degree(T);
    c[T] = block->dim_up_to(cut) - w.rank_up_to(cut);
  }
  if (t_valid < policy.window + 1)
    throw ComputeError("filtered colength horizon too small for the stabilization window");
  long tail = c[t_valid];
  for (int T = t_valid - policy.window; T < t_valid; ++T)
    if (c[T] != tail)
      throw ComputeError("filtered colength did not stabilize below grade " +
                         std::to_string(t_valid));
  int first = t_valid;
  while (first > 0 && c[first - 1] == tail) --first;
  return FilteredColength{tail, first};
}

// Certificate that an element is integral over I^s: a monic equation
//   z^u + c_1 z^(u-1) + ... + c_u = 0   with   c_j in (I^s)^j = I^(s j).
// The search is graded: z homogeneous of grade t forces c_j into grade j t.
template <ScalarField K>
struct DependenceCertificate {
  int u = 0;
  std::vector<RingElement<K>> coeffs;  // c_1 .. c_u

  // Replays the monic equation with exact ring arithmetic.
  bool verify(const RingPresentation<K>& ring, const RingElement<K>& z) const {
    RingElement<K> zpow = ring.element(MultiPoly<K>(ring.vars(), Monomial::one(), ring.one()));
    std::vector<RingElement<K>> zpowers{zpow};  // z^0 .. z^u
    for (int i = 1; i <= u; ++i) zpowers.push_back(ring.multiply(zpowers.back(), z));
    MultiPoly<K> acc = zpowers[u].nf;
    for (int j = 1; j <= u; ++j) acc = acc + ring.element(coeffs[j - 1].nf * zpowers[u - j].nf).nf;
    return ring.element(acc).is_zero();
  }
};

template <ScalarField K>
std::optional<DependenceCertificate<K>> find_dependence(const RingPresentation<K>& ring,
                                                        const GradedIdeal<K>& ideal, int s,
                                                        const RingElement<K>& z, int u_max) {
  if (!z.grade || z.is_zero()) throw InputError("dependence search needs a homogeneous element");
  int t = *z.grade;
  std::vector<RingElement<K>> zpowers{ring.element(
      MultiPoly<K>(ring.vars(), Monomial::one(), ring.one()))};
  for (int i = 1; i <= u_max; ++i) zpowers.push_back(ring.multiply(zpowers.back(), z));

  for (int u = 1; u <= u_max; ++u) {
    BasisPtr ambient = ring.basis(u * t);
    std::vector<std::vector<K>> cols;
    std::vector<std::pair<int, int>> col_src;  // (j, row index in (I^(s j))_(j t))
    for (int j = 1; j <= u; ++j) {
      const Subspace<K>& piece = ideal.power_component(s * j, j * t);
      for (int i = 0; i < piece.dim(); ++i) {
        auto prod = ring.element(piece.row_poly(i) * zpowers[u - j].nf);
        cols.push_back(poly_to_row(*ambient, prod.nf));
        col_src.emplace_back(j, i);
      }
    }
    std::vector<K> target = poly_to_row(*ambient, (-zpowers[u].nf));
    auto sol = solve_columns<K>(cols, target);
    if (!sol) continue;

    DependenceCertificate<K> cert;
    cert.u = u;
    for (int j = 1; j <= u; ++j) cert.coeffs.push_back(RingElement<K>{MultiPoly<K>(ring.vars()), j * t});
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (is_zero((*sol)[c])) continue;
      auto [j, i] = col_src[c];
      const Subspace<K>& piece = ideal.power_component(s * j, j * t);
      cert.coeffs[j - 1].nf = cert.coeffs[j - 1].nf + piece.row_poly(i).scaled((*sol)[c]);
    }
    if (!cert.verify(ring, z))
      throw ComputeError("dependence certificate failed exact re-verification");
    return cert;
  }
  return std::nullopt;
}

}  // namespace nrcalc
