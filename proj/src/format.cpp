#include "oho/format.hpp"

#include <cstdio>

namespace oho {

std::string format_double(double v)
{
  if (v == 0.0)
    v = 0.0; // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace oho
