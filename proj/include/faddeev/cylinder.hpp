#pragma once

#include "faddeev/vec.hpp"

namespace faddeev {

// Cylinder functions of order zero for real positive argument, computed from
// the power series for small argument and the large-argument expansion beyond
// the switchover radius.  The outgoing 2D Green function is built from
// hankel0_first = J0 + i Y0.

inline constexpr double kCylinderSwitchover = 8.0;

double bessel_j0(double z);
double bessel_y0(double z);
Complex hankel0_first(double z);

}  // namespace faddeev
