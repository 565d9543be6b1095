#include "chq/format.hpp"

#include <cstdio>
#include <cstdlib>

namespace chq {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(const Point3& x, char sep) {
  return fmt(x[0]) + sep + fmt(x[1]) + sep + fmt(x[2]);
}

double round12(double x) { return std::strtod(fmt(x).c_str(), nullptr); }

}  // namespace chq
