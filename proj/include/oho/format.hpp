#ifndef OHO_FORMAT_HPP
#define OHO_FORMAT_HPP

#include <string>

namespace oho {

/// "%.17g" with negative zero printed as 0. Lossless for doubles.
std::string format_double(double v);

} // namespace oho

#endif
