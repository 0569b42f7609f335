#include "format.hpp"

#include <charconv>
#include <system_error>

namespace solvgeo {

std::string format_double(double v, int significant_digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, significant_digits);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace solvgeo
