#pragma once

namespace nrcalc {

const char* version_string();

}  // namespace nrcalc
