#pragma once

#include <string>

#include "chq/field.hpp"

namespace chq {

// 12 significant digits, the precision of every number the tools print.
std::string fmt(double x);
std::string fmt(const Point3& x, char sep = ',');
// x rounded to 12 significant digits, for JSON output.
double round12(double x);

}  // namespace chq
