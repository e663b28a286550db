#include "onedyn/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "onedyn/quadrature.hpp"

namespace onedyn {

namespace {

double bump(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

// m-th derivative of g(t) = -1/t - 1/(1-t).
double g_deriv(double t, int m) {
    // g^(m)(t) = -(-1)^m m!/t^(m+1) - m!/(1-t)^(m+1)
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    double a = fact / std::pow(t, m + 1);
    double b = fact / std::pow(1.0 - t, m + 1);
    return (m % 2 == 0 ? -a : a) - b;
}

// Derivatives h^(0..n) of h = exp(g) at t, via h' = g' h and Leibniz.
void bump_derivs(double t, int n, std::vector<double>& out) {
    out.assign(n + 1, 0.0);
    if (t <= 0.0 || t >= 1.0) return;
    out[0] = bump(t);
    for (int m = 0; m < n; ++m) {
        double acc = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= m; ++i) {
            acc += binom * g_deriv(t, i + 1) * out[m - i];
            binom = binom * (m - i) / (i + 1);
        }
        out[m + 1] = acc;
    }
}

} // namespace

MollifierPhi::MollifierPhi(int grid_points) {
    if (grid_points < 16) throw std::invalid_argument("MollifierPhi: grid too small");
    z_ = integrate(bump, 0.0, 1.0, 1e-16).value;
    int n = grid_points;
    h_ = 1.0 / (n - 1);
    vals_.resize(n);
    derivs_.resize(n);
    double acc = 0.0;
    vals_[0] = -1.0;
    derivs_[0] = 0.0;
    for (int i = 1; i < n; ++i) {
        acc += integrate(bump, (i - 1) * h_, i * h_, 1e-16).value;
        vals_[i] = 2.0 * acc / z_ - 1.0;
        derivs_[i] = 2.0 * bump(i * h_) / z_;
    }
    vals_[n - 1] = 1.0;
    derivs_[n - 1] = 0.0;
    // Enforce the odd symmetry Phi(x) + Phi(1-x) = 0 exactly on the grid.
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        double s = 0.5 * (vals_[i] - vals_[j]);
        vals_[i] = s;
        vals_[j] = -s;
    }
    if (n % 2 == 1) vals_[n / 2] = 0.0;
}

double MollifierPhi::value(double x) const {
    if (x <= 0.0) return -1.0;
    if (x >= 1.0) return 1.0;
    int n = static_cast<int>(vals_.size());
    int i = static_cast<int>(x / h_);
    if (i >= n - 1) i = n - 2;
    double t = (x - i * h_) / h_;
    double y0 = vals_[i], y1 = vals_[i + 1];
    double d0 = derivs_[i] * h_, d1 = derivs_[i + 1] * h_;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
}

double MollifierPhi::derivative(double x) const { return 2.0 * bump(x) / z_; }

double MollifierPhi::derivative_m(double x, int m) const {
    if (m < 1) throw std::invalid_argument("derivative_m: m >= 1");
    std::vector<double> d;
    bump_derivs(x, m - 1, d);
    return 2.0 * d[m - 1] / z_;
}

double MollifierPhi::c_norm(int r) const {
    double sup = 1.0; // |Phi| itself
    const int samples = 4096;
    std::vector<double> d;
    for (int i = 1; i < samples; ++i) {
        double t = static_cast<double>(i) / samples;
        bump_derivs(t, r > 0 ? r - 1 : 0, d);
        for (int m = 1; m <= r; ++m)
            sup = std::max(sup, std::abs(2.0 * d[m - 1] / z_));
    }
    return sup;
}

const MollifierPhi& MollifierPhi::shared() {
    static const MollifierPhi phi;
    return phi;
}

} // namespace onedyn
