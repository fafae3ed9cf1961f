#pragma once

#include <vector>

#include "hcdyn/core_map.hpp"

namespace hcdyn {

/// Positive real roots of 2u^3 - sqrt(L) u^2 + (1+theta) u - sqrt(L), squared and sorted.
/// Found by bracketing between critical points; independent of the radical formulas.
std::vector<double> cubic_oracle_roots(const Params& p);

/// Every fixed point of W: cubic oracle on the diagonal plus damped Newton
/// from a 32x32 multistart grid over [0, L]^2.
std::vector<Point2> oracle_fixed_points(const Params& p);

}  // namespace hcdyn
