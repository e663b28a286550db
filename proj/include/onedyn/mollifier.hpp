#pragma once

#include <vector>

namespace onedyn {

/// The smooth step built from the bump exp(-1/(t(1-t))):
///   Phi(x) = 2 * int_{-inf}^x bump / Z - 1,
/// so Phi = -1 for x <= 0, Phi = 1 for x >= 1 and Phi(x) + Phi(1-x) = 0.
/// Values are cached on a uniform grid and interpolated with cubic Hermite
/// panels using the exact derivative, so interpolation error is O(h^4).
/// Derivatives of every order have closed forms through the recursion on
/// g(t) = -1/t - 1/(1-t).
class MollifierPhi {
public:
    explicit MollifierPhi(int grid_points = 10001);

    double value(double x) const;       // Phi(x)
    double derivative(double x) const;  // Phi'(x)
    /// m-th derivative, closed form (m >= 1).
    double derivative_m(double x, int m) const;
    /// sup over [0,1] of |Phi^(i)|, i = 0..r  (the C^r norm).
    double c_norm(int r) const;
    double normalization() const { return z_; } // Z = int_0^1 bump

    /// Process-wide cached instance.
    static const MollifierPhi& shared();

private:
    double z_ = 0.0;
    double h_ = 0.0;
    std::vector<double> vals_;   // Phi at i*h
    std::vector<double> derivs_; // Phi' at i*h
};

} // namespace onedyn
