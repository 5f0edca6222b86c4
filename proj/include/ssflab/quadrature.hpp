#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

namespace ssflab {

/// Adaptive Simpson quadrature of f on [a, b] to the given relative tolerance
/// (with `abs_floor` as an absolute floor for integrals near zero).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-10,
                        double abs_floor = 1e-300, int max_depth = 50);

}  // namespace ssflab
