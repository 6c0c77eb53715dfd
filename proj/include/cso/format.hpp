#pragma once

#include <string>

namespace cso {

// Shortest decimal string that round-trips to the same double
// (via std::to_chars). Infinities print as "inf"/"-inf".
std::string format_double(double v);

}  // namespace cso
