#pragma once

// Exact Gauss-Jordan elimination. Two implementations share one interface:
// a plain serial loop that serves as the reference, and an OpenMP variant
// that fans the per-row elimination out across threads. Reduced row echelon
// form is unique for a given row space, so the two must agree entry for
// entry; tests and the benchmark target exploit that.

#include <cstddef>
#include <optional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nrcalc/field.hpp"

namespace nrcalc {

enum class RrefMode { Auto, Serial, Parallel };

struct RrefOutcome {
  std::vector<int> pivot_cols;  // ascending
  std::size_t rank() const { return pivot_cols.size(); }
};

namespace detail {

template <ScalarField K>
void eliminate_row(std::vector<K>& row, const std::vector<K>& pivot_row, int col,
                   std::size_t ncols) {
  if (is_zero(row[col])) return;
  K f = row[col];
  for (std::size_t j = 0; j < ncols; ++j) row[j] = row[j] - f * pivot_row[j];
}

}  // namespace detail

template <ScalarField K>
RrefOutcome rref_serial(std::vector<std::vector<K>>& rows) {
  RrefOutcome out;
  if (rows.empty()) return out;
  std::size_t ncols = rows[0].size();
  std::size_t next = 0;
  for (std::size_t col = 0; col < ncols && next < rows.size(); ++col) {
    std::size_t p = next;
    while (p < rows.size() && is_zero(rows[p][col])) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[next], rows[p]);
    K inv = inverse(rows[next][col]);
    for (std::size_t j = col; j < ncols; ++j) rows[next][j] = rows[next][j] * inv;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != next) detail::eliminate_row(rows[r], rows[next], static_cast<int>(col), ncols);
    out.pivot_cols.push_back(static_cast<int>(col));
    ++next;
  }
  rows.resize(out.rank());
  return out;
}

template <ScalarField K>
RrefOutcome rref_parallel(std::vector<std::vector<K>>& rows) {
  RrefOutcome out;
  if (rows.empty()) return out;
  std::size_t ncols = rows[0].size();
  std::size_t next = 0;
  for (std::size_t col = 0; col < ncols && next < rows.size(); ++col) {
    std::size_t p = next;
    while (p < rows.size() && is_zero(rows[p][col])) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[next], rows[p]);
    K inv = inverse(rows[next][col]);
    for (std::size_t j = col; j < ncols; ++j) rows[next][j] = rows[next][j] * inv;
    const std::vector<K>& pivot_row = rows[next];
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows.size()); ++r)
      if (static_cast<std::size_t>(r) != next)
        detail::eliminate_row(rows[r], pivot_row, static_cast<int>(col), ncols);
    out.pivot_cols.push_back(static_cast<int>(col));
    ++next;
  }
  rows.resize(out.rank());
  return out;
}

// Auto picks the parallel kernel once the elimination work is large enough to
// amortize thread fan-out. Any explicit mode wins; tests pin both ways.
template <ScalarField K>
RrefOutcome rref(std::vector<std::vector<K>>& rows, RrefMode mode = RrefMode::Auto) {
  if (mode == RrefMode::Serial) return rref_serial(rows);
  if (mode == RrefMode::Parallel) return rref_parallel(rows);
#ifdef _OPENMP
  if (!rows.empty() && rows.size() >= 48 && rows.size() * rows[0].size() >= 32768)
    return rref_parallel(rows);
#endif
  return rref_serial(rows);
}

// Solve sum_c x_c * cols[c] = target exactly. Returns the particular solution
// with all free variables zero, or nullopt when the system is inconsistent.
template <ScalarField K>
std::optional<std::vector<K>> solve_columns(const std::vector<std::vector<K>>& cols,
                                            const std::vector<K>& target,
                                            RrefMode mode = RrefMode::Auto) {
  std::size_t dim = target.size();
  std::size_t n = cols.size();
  std::vector<std::vector<K>> rows(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    rows[i].resize(n + 1);
    for (std::size_t c = 0; c < n; ++c) rows[i][c] = cols[c][i];
    rows[i][n] = target[i];
  }
  RrefOutcome out = rref(rows, mode);
  std::vector<K> x(n);
  for (std::size_t r = 0; r < out.rank(); ++r) {
    if (static_cast<std::size_t>(out.pivot_cols[r]) == n) return std::nullopt;
    x[out.pivot_cols[r]] = rows[r][n];
  }
  return x;
}

}  // namespace nrcalc
