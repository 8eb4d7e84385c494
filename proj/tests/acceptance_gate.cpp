// Release gate: runs the full acceptance battery (the same one behind
// `nrcalc accept`) and exits nonzero unless every criterion passes, so the
// battery is part of every test-suite run.

#include <iostream>

#include "nrcalc/acceptance.hpp"

int main() { return nrcalc::run_acceptance(std::cout) ? 0 : 1; }
