#pragma once

#include <string>

namespace ltlab {

/// Shortest decimal that round-trips to the same double.
std::string format_shortest(double x);

/// Fixed 17 significant digits (%.17g); "inf"/"-inf"/"nan" for non-finite.
std::string format_g17(double x);

}  // namespace ltlab
