#include "nrcalc/version.hpp"

namespace nrcalc {

const char* version_string() { return "nrcalc 0.1.0"; }

}  // namespace nrcalc
