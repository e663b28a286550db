#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "onedyn/plmap.hpp"

namespace onedyn::homeo {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// A node of the map expression tree.  Nodes are immutable after
/// construction; modules may add their own node types (see Map1D::from_node).
class MapNode {
public:
    virtual ~MapNode() = default;
    virtual Interval domain() const = 0;
    virtual Interval range() const = 0;
    virtual double eval(double x, double tol) const = 0;
    /// Closed-form first derivative where available.
    virtual std::optional<double> deriv1(double /*x*/) const { return std::nullopt; }
    /// Exact one-sided slope at a domain endpoint (0 = lo end, 1 = hi end).
    virtual std::optional<double> end_slope(int /*which*/) const { return std::nullopt; }
    virtual std::string describe() const = 0;
};

/// An increasing self-map of an interval, represented as an expression tree
/// over closed-form primitives.  Strict monotonicity is spot-checked on a
/// coarse grid at construction.
class Map1D {
public:
    Map1D() = default;

    static Map1D identity(Interval dom);
    static Map1D affine(double slope, double offset, Interval dom);
    /// x / (s - t x) on a stated subdomain (pole must lie outside).
    static Map1D moebius(double s, double t, Interval dom);
    /// The Yoccoz transfer map [0,a] -> [0,b] with endpoint derivatives 1.
    static Map1D yoccoz(double a, double b);
    /// Exact dyadic piecewise-linear map on [0,1].
    static Map1D pl_dyadic(plmap::PLMap pl);
    /// x + g(x) with g a smooth two-ramp plateau profile supported on
    /// `support`: ramps of width `ramp` at each end, g = delta on the plateau.
    /// Requires |delta| * sup|Phi'| / (2 ramp) < 1 so the map is increasing,
    /// unless allow_steep is set (formula map, not necessarily injective).
    static Map1D plateau_bump(Interval support, double ramp, double delta,
                              bool allow_steep = false);
    /// Pieces on disjoint subintervals, each fixing its endpoints (checked);
    /// identity in the gaps.
    static Map1D piecewise_glue(Interval dom,
                                std::vector<std::pair<Interval, Map1D>> pieces);
    /// Apply-order composition: the FIRST element acts first.
    static Map1D compose_chain(std::vector<Map1D> maps);
    /// A(inner(A^{-1}(x))) for A(x) = scale*x + offset, scale != 0.
    static Map1D affine_conj(double scale, double offset, const Map1D& inner);
    /// phi^{-2} o inner o phi^2 with phi the boundary-flattening chart
    /// (e^{-1/x} near 0).  inner must act on [0,1] fixing the endpoints and
    /// expose exact end slopes (or pass them explicitly).
    static Map1D boundary_flatten(const Map1D& inner);
    static Map1D boundary_flatten(const Map1D& inner, double slope0, double slope1);
    /// psi^{-1}(s psi(x) + t) on [0,1] for the odd chart psi (psi = -1/x on
    /// (0,1/3], psi(1-x) = -psi(x)); behaves as x/(s - t x) near 0.  s > 0.
    static Map1D compactified_affine(double s, double t);
    static Map1D from_node(std::shared_ptr<const MapNode> node);

    Map1D inverse() const;

    double eval(double x, double tol = 1e-12) const;
    double operator()(double x) const { return eval(x); }
    Interval domain() const;
    Interval range() const;
    std::optional<double> exact_deriv1(double x) const;
    const MapNode& node() const { return *node_; }
    std::shared_ptr<const MapNode> node_ptr() const { return node_; }
    bool valid() const { return static_cast<bool>(node_); }

private:
    explicit Map1D(std::shared_ptr<const MapNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const MapNode> node_;
};

/// Degree-one circle map given by its lift restricted to [0,1]
/// (F(x+1) = F(x)+1; periodicity spot-checked at construction).
class CircleMap {
public:
    CircleMap() = default;
    explicit CircleMap(Map1D lift, double basepoint_offset = 0.0);
    static CircleMap rotation(double theta);

    /// Lift evaluation at any real.
    double eval_lift(double x, double tol = 1e-12) const;
    /// Projection to [0,1).
    double eval_circle(double x, double tol = 1e-12) const;
    /// n-fold lift iteration (n may be negative).
    double iterate_lift(double x, long n, double tol = 1e-12) const;
    const Map1D& lift() const { return lift_; }
    double basepoint_offset() const { return offset_; }

private:
    Map1D lift_;
    double offset_ = 0.0;
};

struct DerivEstimate {
    double value = 0.0;
    double error = 0.0; // reported error estimate
};

/// k-th derivative at x.  Closed forms and the chain rule are used where the
/// tree provides them (k = 1); otherwise central finite differences with
/// Richardson extrapolation, step h = tol^{1/(k+2)} * scale.
DerivEstimate derivative_k(const Map1D& m, double x, int k, double tol = 1e-8);

/// Maximal open intervals where |m(x) - x| > tol, at the given grid
/// resolution; endpoints refined by bisection to the |m(x)-x| = tol crossing.
std::vector<Interval> support_components(const Map1D& m, int resolution = 4096,
                                         double tol = 1e-12);

/// m^n(x); negative n uses the inverse.  Per-step tolerance tol/|n|.
double iterate(const Map1D& m, long n, double x, double tol = 1e-12);

/// Sum over the grid of |f^{(k)}(x_{i+1}) - f^{(k)}(x_i)|; k = 0 uses the
/// displacement f(x) - x.  A lower bound for the total variation.
double variation_estimate(const Map1D& m, int k, const std::vector<double>& grid);

/// Pairwise strict-increase check over a sorted grid (tolerance-aware).
bool monotone_on_grid(const Map1D& m, const std::vector<double>& grid,
                      double tol = 1e-12);

std::vector<double> uniform_grid(Interval iv, int n);

/// The boundary-flattening chart: phi(x) = e^{-1/x} near 0, phi(1-x) = 1-phi(x).
double mt_chart(double x);
double mt_chart_inv(double y);

/// The odd compactification chart psi: (0,1) -> R with psi(x) = -1/x on
/// (0,1/3] and psi(1-x) = -psi(x) (the symmetry consistent with injectivity).
double odd_chart(double x);
double odd_chart_inv(double y);

} // namespace onedyn::homeo
