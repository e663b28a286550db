#pragma once

#include <string>
#include <vector>

#include "onedyn/dyadic.hpp"

namespace onedyn::plmap {

using dyadic::Dyadic;

/// Orientation-preserving piecewise-linear self-map of [0,1] with dyadic
/// breakpoints, dyadic values, and power-of-two slopes (an element of
/// Thompson's group F).  All algebra is exact.
class PLMap {
public:
    /// Breakpoint table: x values 0 = x_0 < ... < x_n = 1 and the images
    /// y_i = f(x_i) with y_0 = 0, y_n = 1.  Slopes between consecutive
    /// breakpoints must be powers of two (validated).
    PLMap(std::vector<Dyadic> xs, std::vector<Dyadic> ys);
    static PLMap identity();

    Dyadic eval(const Dyadic& x) const;
    double eval(double x) const;
    /// Slope exponent on the piece containing x (right-continuous choice).
    long slope_exp_at(const Dyadic& x) const;

    PLMap inverse() const;
    /// (g o f): apply f first, then g.
    static PLMap compose(const PLMap& f, const PLMap& g);
    PLMap then(const PLMap& g) const { return compose(*this, g); }

    bool is_identity() const;
    bool operator==(const PLMap& o) const;

    const std::vector<Dyadic>& breakpoints() const { return xs_; }
    const std::vector<Dyadic>& values() const { return ys_; }
    /// Exact serialization: one "x=y" mantissa/exponent pair per line.
    std::string str() const;

private:
    void normalize(); // drop breakpoints where the slope does not change
    std::vector<Dyadic> xs_, ys_;
};

/// Word evaluation over named PL generators with exponents
/// (rightmost letter acts first).
struct PLLetter {
    const PLMap* map;
    long exp;
};
PLMap pl_word(const std::vector<PLLetter>& letters);

} // namespace onedyn::plmap
