#pragma once

#include <functional>
#include <string>

#include "chq/field.hpp"

namespace chq {

using VectorFunction = std::function<Point3(const Point3&)>;
using ScalarFunction = std::function<double(const Point3&)>;

VectorFunction zero_vector_potential();
// A(x1, x2, x3) = (-x2, x1, 0)
VectorFunction standard_vector_potential();

ScalarFunction constant_potential(double lambda);

struct RingWell {
  double v0 = 1.0;
  double a = 1.0;
  double b = 1.0;
  double r0 = 1.0;
};
// V = v0 + a (|z| - r0)^2 + b t^2 with z = (x1, x2) and t = x3.
ScalarFunction ring_well_potential(const RingWell& params);

// Arithmetic expression in x, y, z, r (distance to origin) and rho (distance
// to the x3 axis). Supports + - * / ^, unary minus and the functions sqrt,
// exp, log, sin, cos, tanh, abs, min, max. Throws Error on malformed input.
ScalarFunction parse_scalar_expression(const std::string& text);

}  // namespace chq
