#pragma once

#include <cmath>
#include <functional>

namespace liouville {

/// Adaptive Gauss-Kronrod 7-15 quadrature on [a, b].
double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-12, double abs_tol = 1e-300,
                              int max_depth = 40);

} // namespace liouville
