#ifndef QGARCH_IO_UTIL_HPP
#define QGARCH_IO_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <string>

namespace qgarch {

// Round-trip-exact decimal rendering shared by every CSV writer, so
// identical runs produce identical bytes.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace qgarch

#endif
