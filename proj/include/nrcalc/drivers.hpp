#pragma once

// Family runners: each one computes a family instance end to end and returns
// a FamilyReport whose `values` carry the numeric claims and whose `checks`
// re-verify every closed-form identity the claims rest on.  Checks recorded
// here are theorems inside the supported parameter ranges, so a failing check
// signals corrupted computation, not unusual input.

#include <optional>
#include <string>
#include <vector>

#include "nrcalc/field.hpp"
#include "nrcalc/report.hpp"

namespace nrcalc {

// Accepts "q" / "rationals" for exact rationals and "fp:<p>" for a prime
// field; anything else (including even characteristic) is an InputError.
FieldMode parse_field(const std::string& spec);

struct ClosureRunOptions {
  FieldMode field = FieldMode::rationals();
  std::optional<int> n_max;  // default: the family's natural depth
  int u_max = 2;             // degree bound for integral-dependence searches
  std::uint64_t seed = 1;    // drives reduction sampling
};

// Cone over a smooth plane curve of degree d, maximal-ideal filtration.
FamilyReport run_hypersurface_family(int d, const ClosureRunOptions& opt);
// Ideal attached to one blowup datum (d, r) on the same cone.
FamilyReport run_blowup_family(int d, int r, const ClosureRunOptions& opt);
// Weighted-cone subring family with its non-power closure element.
FamilyReport run_veronese_family(int g, const ClosureRunOptions& opt);

// Curve-side bound reports (no linear algebra, no randomness).
FamilyReport run_hyperelliptic_bounds(int g, int b);
FamilyReport run_ci_bounds(const std::vector<int>& degrees);

// Resolution-graph reports.
FamilyReport run_star_family(int d, int r);
FamilyReport run_graph_file(const std::string& path);

}  // namespace nrcalc
