#pragma once

#include <functional>

namespace onedyn {

/// Integral with an error estimate from the embedded Gauss rule.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod on [a,b] for a smooth integrand.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13, int max_depth = 15);

} // namespace onedyn
