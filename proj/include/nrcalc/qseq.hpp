#pragma once

// Reconstruction of the cohomology-length sequence q(n) from the quotient
// lengths L(n) = len(closure(I^(n+1)) / Q closure(I^n)), n >= 1, together
// with the normal reduction numbers:
//
//   q(n+1) + q(n-1) - 2 q(n) = L(n)        (n >= 1)
//   q(0) = p_g,  q eventually constant
//
// which inverts to q(n) = q(n-1) - D(n-1) with D(n) = sum_{m > n} L(m).
// nr = first n >= 1 with L(n) = 0; br = first n >= 1 with D(n-1) = 0.
// Every report is validated against the inequalities the theory imposes
// (monotonicity, br <= p_g + 1, p_g >= C(nr, 2)); violations are hard errors
// since they can only come from a broken length computation.

#include <string>
#include <vector>

#include "nrcalc/errors.hpp"

namespace nrcalc {

struct QSequenceReport {
  long pg = 0;
  int n_max = 0;
  std::vector<long> lengths;  // lengths[i] = L(i+1), i = 0 .. n_max-1
  std::vector<long> q;        // q[n], n = 0 .. n_max
  int nr = 0;
  int br = 0;
  long q_inf = 0;
};

inline long binom(long n, long k) {
  if (k < 0 || n < k) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline QSequenceReport q_sequence_from_lengths(long pg, const std::vector<long>& lengths) {
  QSequenceReport rep;
  rep.pg = pg;
  rep.n_max = static_cast<int>(lengths.size());
  rep.lengths = lengths;
  if (pg < 0) throw ComputeError("negative geometric genus");
  for (long l : lengths)
    if (l < 0) throw ComputeError("negative quotient length");

  // Tail sums D(n) = sum_{m > n} L(m) = lengths[n] + lengths[n+1] + ... for
  // n = 0 .. n_max-1. The data only determines the sequence if no length
  // mass sits at or beyond the horizon.
  if (rep.n_max == 0) throw ComputeError("empty length sequence");
  if (lengths.back() != 0)
    throw ComputeError("length sequence not yet zero at the horizon n=" +
                       std::to_string(rep.n_max));
  std::vector<long> D(rep.n_max, 0);
  for (int n = rep.n_max - 1; n >= 0; --n)
    D[n] = (n + 1 < rep.n_max ? D[n + 1] : 0) + lengths[n];

  rep.q.resize(rep.n_max + 1);
  rep.q[0] = pg;
  for (int n = 1; n <= rep.n_max; ++n) {
    rep.q[n] = rep.q[n - 1] - D[n - 1];
    if (rep.q[n] < 0)
      throw ComputeError("negative q(" + std::to_string(n) + "): lengths inconsistent with p_g");
  }
  rep.q_inf = rep.q.back();

  rep.nr = 0;
  for (int n = 1; n <= rep.n_max; ++n)
    if (lengths[n - 1] == 0) {
      rep.nr = n;
      break;
    }
  rep.br = 0;
  for (int n = 1; n <= rep.n_max; ++n)
    if (D[n - 1] == 0) {
      rep.br = n;
      break;
    }
  if (rep.nr == 0 || rep.br == 0) throw ComputeError("reduction numbers not reached at horizon");

  // Theory-imposed sanity: these hold for every valid family, so a failure
  // here means the computed lengths are wrong, not the inputs unusual.
  for (int n = 1; n < rep.n_max; ++n)
    if (rep.q[n + 1] + rep.q[n - 1] - 2 * rep.q[n] != lengths[n - 1])
      throw ComputeError("second-difference identity violated in reconstruction");
  for (int n = 0; n < rep.n_max; ++n)
    if (rep.q[n + 1] > rep.q[n]) throw ComputeError("q sequence not monotone");
  if (rep.nr > rep.br) throw ComputeError("nr exceeds br");
  if (rep.br > rep.pg + 1) throw ComputeError("br exceeds p_g + 1");
  if (rep.pg < binom(rep.nr, 2)) throw ComputeError("p_g below the C(nr,2) lower bound");
  return rep;
}

}  // namespace nrcalc
