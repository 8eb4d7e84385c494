#pragma once

// Release gate: seven numbered criteria covering the whole computing surface
// (closure pipeline, q-sequence reconstruction, curve invariants, cycle
// lattice, cross-oracle agreements, report identities).  Each criterion is a
// self-contained battery of exact integer checks; the gate prints one line
// per criterion and succeeds only when every executed criterion passes.

#include <iosfwd>
#include <optional>

namespace nrcalc {

struct AcceptanceOptions {
  // Run a single criterion (1..7) instead of the whole battery.
  std::optional<int> only;
};

// Writes one line per executed criterion to `out`
// ("criterion N: pass — ..." / "criterion N: FAIL — <first failing check>")
// followed by a summary line.  Wall-clock timings go to standard error only,
// so the stream written to `out` is deterministic.  Returns true when every
// executed criterion passed.  Throws InputError for an out-of-range
// criterion number.
bool run_acceptance(std::ostream& out, const AcceptanceOptions& opt = {});

}  // namespace nrcalc
