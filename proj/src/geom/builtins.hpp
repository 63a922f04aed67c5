#pragma once

#include "geom/system.hpp"

namespace magcurv {

// Flat 2-torus R^2 / (2 pi Z)^2 with sigma = b(x) dx1 ^ dx2, where
// b(x) = b0 + modulation * sin(x1). The primitive
// theta = (b0 x1 - modulation cos x1) dx2 lives on the universal cover.
ChartedSystem flat_torus(double b0 = 1.0, double modulation = 0.0);

// Unit round 2-sphere in stereographic coordinates, g = lambda^2 I with
// lambda = 2 / (1 + |x|^2), and sigma = b * (area form). Charts are switched
// by x -> (x1, -x2) / |x|^2 once |x| > 1.5; this map preserves orientation,
// so sigma keeps the same expression in both charts.
ChartedSystem round_sphere(double b = 0.0);

// Upper half-plane chart x2 > 0 with g = I / x2^2 and sigma = b dx1 ^ dx2 / x2^2,
// primitive theta = (b / x2) dx1.
ChartedSystem hyperbolic_chart(double b = 1.0);

// Looks up one of the names above. Parameters: "b" (all), "modulation"
// (flat_torus only). Unknown names throw InvalidArgument.
ChartedSystem make_builtin(const std::string& name, double b, double modulation = 0.0);

bool is_builtin_name(const std::string& name);

}  // namespace magcurv
