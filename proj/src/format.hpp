#pragma once

#include <string>

namespace solvgeo {

/// Locale-independent shortest-faithful decimal rendering of v with the
/// given number of significant digits (scientific for extreme magnitudes,
/// plain otherwise — std::to_chars "general" form). NaN renders as "nan".
std::string format_double(double v, int significant_digits);

}  // namespace solvgeo
