#include "onedyn/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace onedyn {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

QuadResult panel(const std::function<double(double)>& f, double a, double b) {
    QuadResult r;
    r.value = GK::integrate(f, a, b, 0, 0, &r.error);
    return r;
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol,
           int depth, QuadResult& acc) {
    QuadResult p = panel(f, a, b);
    if (p.error <= tol || depth <= 0) {
        acc.value += p.value;
        acc.error += p.error;
        return;
    }
    double m = 0.5 * (a + b);
    adapt(f, a, m, tol / 2, depth - 1, acc);
    adapt(f, m, b, tol / 2, depth - 1, acc);
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol, int max_depth) {
    QuadResult acc;
    if (a == b) return acc;
    adapt(f, a, b, tol, max_depth, acc);
    return acc;
}

} // namespace onedyn
