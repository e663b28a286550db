#include "onedyn/homeo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "onedyn/mollifier.hpp"

namespace onedyn::homeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

// ---------------------------------------------------------------------------
// The boundary-flattening chart phi: [0,1] -> [0,1], phi(x) = e^{-1/x} on
// (0, 0.2], phi(1-x) = 1 - phi(x), C^2 quintic bridge on [0.2, 0.5].
// ---------------------------------------------------------------------------

struct Quintic {
    // Hermite data on [a,b]: value/slope/curvature at both ends.
    double a, b;
    double coeff[6];

    static Quintic fit(double a, double b, double v0, double d0, double c0,
                       double v1, double d1, double c1) {
        Quintic q;
        q.a = a;
        q.b = b;
        double h = b - a;
        // Solve in the normalized variable t in [0,1].
        double V0 = v0, D0 = d0 * h, C0 = c0 * h * h;
        double V1 = v1, D1 = d1 * h, C1 = c1 * h * h;
        // p(t) = sum c_i t^i with p(0)=V0, p'(0)=D0, p''(0)=C0 and matching at 1.
        double* c = q.coeff;
        c[0] = V0;
        c[1] = D0;
        c[2] = C0 / 2;
        double r0 = V1 - (c[0] + c[1] + c[2]);
        double r1 = D1 - (c[1] + 2 * c[2]);
        double r2 = C1 - 2 * c[2];
        c[3] = 10 * r0 - 4 * r1 + r2 / 2;
        c[4] = -15 * r0 + 7 * r1 - r2;
        c[5] = 6 * r0 - 3 * r1 + r2 / 2;
        return q;
    }
    double value(double x) const {
        double t = (x - a) / (b - a);
        double acc = 0.0;
        for (int i = 5; i >= 0; --i) acc = acc * t + coeff[i];
        return acc;
    }
    double deriv(double x) const {
        double t = (x - a) / (b - a);
        double acc = 0.0;
        for (int i = 5; i >= 1; --i) acc = acc * t + i * coeff[i];
        return acc / (b - a);
    }
};

class MtChart {
public:
    MtChart() {
        double x0 = 0.2;
        double v0 = std::exp(-1.0 / x0);
        double d0 = v0 / (x0 * x0);
        double c0 = v0 * (1.0 / (x0 * x0 * x0 * x0) - 2.0 / (x0 * x0 * x0));
        // Slope at 1/2 chosen for a monotone bridge (verified below).
        double sigma = 1.8;
        for (int tries = 0; tries < 32; ++tries, sigma += 0.1) {
            bridge_ = Quintic::fit(x0, 0.5, v0, d0, c0, 0.5, sigma, 0.0);
            bool mono = true;
            for (int i = 0; i <= 600; ++i) {
                double x = x0 + (0.5 - x0) * i / 600.0;
                if (bridge_.deriv(x) <= 0) mono = false;
            }
            if (mono) return;
        }
        throw std::runtime_error("MtChart: no monotone bridge found");
    }

    double value(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        if (x > 0.5) return 1.0 - value(1.0 - x);
        if (x <= 0.2) return std::exp(-1.0 / x);
        return bridge_.value(x);
    }
    double inverse(double y) const {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        if (y > 0.5) return 1.0 - inverse(1.0 - y);
        if (y <= std::exp(-5.0)) return -1.0 / std::log(y);
        // Newton on the bridge.
        double x = 0.35;
        for (int i = 0; i < 60; ++i) {
            double f = value(x) - y;
            double d = bridge_.deriv(x);
            double step = f / d;
            x -= step;
            if (x <= 0.2) x = 0.2000001;
            if (x >= 0.5) x = 0.4999999;
            if (std::abs(step) < 1e-15) break;
        }
        return x;
    }
    static const MtChart& shared() {
        static const MtChart c;
        return c;
    }

private:
    Quintic bridge_;
};

// ---------------------------------------------------------------------------
// The odd compactification chart psi: (0,1) -> R, psi(x) = -1/x on (0,1/3],
// psi(1-x) = -psi(x), C^2 quintic bridge on [1/3, 1/2].
// ---------------------------------------------------------------------------

class OddChart {
public:
    OddChart() {
        double x0 = 1.0 / 3.0;
        // psi = -1/x: value -3, slope 1/x^2 = 9, curvature -2/x^3 = -54.
        double sigma = 6.0;
        for (int tries = 0; tries < 64; ++tries, sigma += 0.5) {
            bridge_ = Quintic::fit(x0, 0.5, -3.0, 9.0, -54.0, 0.0, sigma, 0.0);
            bool mono = true;
            for (int i = 0; i <= 600; ++i) {
                double x = x0 + (0.5 - x0) * i / 600.0;
                if (bridge_.deriv(x) <= 0) mono = false;
            }
            if (mono) return;
        }
        throw std::runtime_error("OddChart: no monotone bridge found");
    }
    double value(double x) const {
        if (x <= 0.0 || x >= 1.0) throw std::domain_error("odd_chart: x in (0,1)");
        if (x > 0.5) return -value(1.0 - x);
        if (x <= 1.0 / 3.0) return -1.0 / x;
        return bridge_.value(x);
    }
    double deriv(double x) const {
        if (x > 0.5) return deriv(1.0 - x);
        if (x <= 1.0 / 3.0) return 1.0 / (x * x);
        return bridge_.deriv(x);
    }
    double inverse(double y) const {
        if (y > 0.0) return 1.0 - inverse(-y);
        if (y <= -3.0) return -1.0 / y;
        // Newton on the bridge for y in (-3, 0]
        double x = 0.45;
        for (int i = 0; i < 80; ++i) {
            double f = bridge_.value(x) - y;
            double d = bridge_.deriv(x);
            double step = f / d;
            x -= step;
            if (x <= 1.0 / 3.0) x = 1.0 / 3.0 + 1e-9;
            if (x >= 0.5) x = 0.5 - 1e-12;
            if (std::abs(step) < 1e-16) break;
        }
        return x;
    }
    static const OddChart& shared() {
        static const OddChart c;
        return c;
    }

private:
    Quintic bridge_;
};

class CompactifiedAffineNode final : public MapNode {
public:
    CompactifiedAffineNode(double s, double t) : s_(s), t_(t) {
        require(s > 0, "compactified_affine: s must be positive");
    }
    Interval domain() const override { return {0.0, 1.0}; }
    Interval range() const override { return {0.0, 1.0}; }
    double eval(double x, double) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const auto& psi = OddChart::shared();
        double y = s_ * psi.value(x) + t_;
        if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
        return psi.inverse(y);
    }
    std::optional<double> deriv1(double x) const override {
        if (x <= 0.0 || x >= 1.0) return 1.0 / s_;
        const auto& psi = OddChart::shared();
        double fx = eval(x, 0.0);
        if (fx <= 0.0 || fx >= 1.0) return std::nullopt;
        return s_ * psi.deriv(x) / psi.deriv(fx);
    }
    std::optional<double> end_slope(int) const override { return 1.0 / s_; }
    std::string describe() const override { return "compactified_affine"; }

private:
    double s_, t_;
};

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

class IdentityNode final : public MapNode {
public:
    explicit IdentityNode(Interval d) : dom_(d) {}
    Interval domain() const override { return dom_; }
    Interval range() const override { return dom_; }
    double eval(double x, double) const override { return x; }
    std::optional<double> deriv1(double) const override { return 1.0; }
    std::optional<double> end_slope(int) const override { return 1.0; }
    std::string describe() const override { return "id"; }

private:
    Interval dom_;
};

class AffineNode final : public MapNode {
public:
    AffineNode(double s, double o, Interval d) : s_(s), o_(o), dom_(d) {
        require(s > 0, "affine: slope must be positive");
    }
    Interval domain() const override { return dom_; }
    Interval range() const override { return {s_ * dom_.lo + o_, s_ * dom_.hi + o_}; }
    double eval(double x, double) const override { return s_ * x + o_; }
    std::optional<double> deriv1(double) const override { return s_; }
    std::optional<double> end_slope(int) const override { return s_; }
    std::string describe() const override { return "affine"; }

private:
    double s_, o_;
    Interval dom_;
};

class MoebiusNode final : public MapNode {
public:
    MoebiusNode(double s, double t, Interval d) : s_(s), t_(t), dom_(d) {
        require(s > 0, "moebius: s must be positive");
        if (t_ != 0.0) {
            double pole = s_ / t_;
            require(!(pole >= dom_.lo && pole <= dom_.hi),
                    "moebius: pole inside domain");
        }
    }
    Interval domain() const override { return dom_; }
    Interval range() const override {
        return {eval(dom_.lo, 0), eval(dom_.hi, 0)};
    }
    double eval(double x, double) const override { return x / (s_ - t_ * x); }
    std::optional<double> deriv1(double x) const override {
        double d = s_ - t_ * x;
        return s_ / (d * d);
    }
    std::optional<double> end_slope(int which) const override {
        return *deriv1(which == 0 ? dom_.lo : dom_.hi);
    }
    std::string describe() const override { return "moebius"; }

private:
    double s_, t_;
    Interval dom_;
};

class YoccozNode final : public MapNode {
public:
    YoccozNode(double a, double b) : a_(a), b_(b) {
        require(a > 0 && b > 0, "yoccoz: a, b must be positive");
    }
    Interval domain() const override { return {0.0, a_}; }
    Interval range() const override { return {0.0, b_}; }
    double eval(double x, double) const override {
        if (x <= 0.0) return 0.0;
        if (x >= a_) return b_;
        // phi_b^{-1}(phi_a(x)) = b/2 - (b/pi) atan((b/a) cot(pi x / a))
        double c = std::tan(kPi * (0.5 - x / a_)); // = cot(pi x / a)
        return b_ / 2 - (b_ / kPi) * std::atan((b_ / a_) * c);
    }
    std::optional<double> deriv1(double x) const override {
        if (x <= 0.0 || x >= a_) return 1.0;
        double v = -(1.0 / a_) * std::tan(kPi * (0.5 - x / a_)); // phi_a(x)
        double va = v * v + 1.0 / (a_ * a_), vb = v * v + 1.0 / (b_ * b_);
        return va / vb;
    }
    std::optional<double> end_slope(int) const override { return 1.0; }
    std::string describe() const override { return "yoccoz"; }

private:
    double a_, b_;
};

class PLDyadicNode final : public MapNode {
public:
    explicit PLDyadicNode(plmap::PLMap pl) : pl_(std::move(pl)) {}
    Interval domain() const override { return {0.0, 1.0}; }
    Interval range() const override { return {0.0, 1.0}; }
    double eval(double x, double) const override { return pl_.eval(x); }
    std::optional<double> deriv1(double x) const override {
        // slope of the piece containing x (right-continuous)
        const auto& xs = pl_.breakpoints();
        const auto& ys = pl_.values();
        size_t i = 1;
        while (i + 1 < xs.size() && xs[i].to_double() <= x) ++i;
        double dx = (xs[i] - xs[i - 1]).to_double();
        double dy = (ys[i] - ys[i - 1]).to_double();
        return dy / dx;
    }
    std::optional<double> end_slope(int which) const override {
        const auto& xs = pl_.breakpoints();
        const auto& ys = pl_.values();
        if (which == 0) {
            double dx = xs[1].to_double(), dy = ys[1].to_double();
            return dy / dx;
        }
        size_t n = xs.size();
        double dx = 1.0 - xs[n - 2].to_double(), dy = 1.0 - ys[n - 2].to_double();
        return dy / dx;
    }
    const plmap::PLMap& pl() const { return pl_; }
    std::string describe() const override { return "pl_dyadic"; }

private:
    plmap::PLMap pl_;
};

class PlateauBumpNode final : public MapNode {
public:
    PlateauBumpNode(Interval sup, double ramp, double delta, bool allow_steep)
        : sup_(sup), ramp_(ramp), delta_(delta) {
        require(ramp > 0 && 2 * ramp < sup.length() + 1e-18,
                "plateau_bump: ramps must fit in the support");
        double phimax = MollifierPhi::shared().c_norm(1);
        require(allow_steep || std::abs(delta) * phimax / (2 * ramp) < 1.0,
                "plateau_bump: displacement too steep (not increasing)");
    }
    Interval domain() const override { return sup_; }
    Interval range() const override { return sup_; }
    double eval(double x, double) const override {
        return x + displacement(x);
    }
    double displacement(double x) const {
        const auto& phi = MollifierPhi::shared();
        double g = 0.5 * delta_ *
                   (phi.value((x - sup_.lo) / ramp_) + phi.value((sup_.hi - x) / ramp_));
        return g;
    }
    std::optional<double> deriv1(double x) const override {
        const auto& phi = MollifierPhi::shared();
        double g1 = 0.5 * delta_ / ramp_ *
                    (phi.derivative((x - sup_.lo) / ramp_) -
                     phi.derivative((sup_.hi - x) / ramp_));
        return 1.0 + g1;
    }
    std::optional<double> end_slope(int) const override { return 1.0; }
    std::string describe() const override { return "plateau_bump"; }

private:
    Interval sup_;
    double ramp_, delta_;
};

class PiecewiseGlueNode final : public MapNode {
public:
    PiecewiseGlueNode(Interval dom, std::vector<std::pair<Interval, Map1D>> pieces)
        : dom_(dom), pieces_(std::move(pieces)) {
        std::sort(pieces_.begin(), pieces_.end(),
                  [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
        double prev = dom_.lo - 1.0;
        for (auto& [iv, m] : pieces_) {
            require(iv.lo >= dom_.lo - 1e-12 && iv.hi <= dom_.hi + 1e-12,
                    "piecewise_glue: piece outside domain");
            require(iv.lo >= prev - 1e-15, "piecewise_glue: overlapping pieces");
            prev = iv.hi;
            // endpoint fixing (so identity gaps glue continuously)
            require(std::abs(m.eval(iv.lo) - iv.lo) < 1e-9 &&
                        std::abs(m.eval(iv.hi) - iv.hi) < 1e-9,
                    "piecewise_glue: piece must fix its endpoints");
        }
    }
    Interval domain() const override { return dom_; }
    Interval range() const override { return dom_; }
    double eval(double x, double tol) const override {
        const auto* p = find(x);
        return p ? p->second.eval(std::clamp(x, p->first.lo, p->first.hi), tol) : x;
    }
    std::optional<double> deriv1(double x) const override {
        const auto* p = find(x);
        return p ? p->second.exact_deriv1(x) : std::optional<double>(1.0);
    }
    std::optional<double> end_slope(int) const override { return 1.0; }
    const std::vector<std::pair<Interval, Map1D>>& pieces() const { return pieces_; }
    std::string describe() const override { return "piecewise_glue"; }

private:
    const std::pair<Interval, Map1D>* find(double x) const {
        auto it = std::upper_bound(
            pieces_.begin(), pieces_.end(), x,
            [](double v, const auto& p) { return v < p.first.lo; });
        if (it == pieces_.begin()) return nullptr;
        --it;
        return (x <= it->first.hi) ? &*it : nullptr;
    }
    Interval dom_;
    std::vector<std::pair<Interval, Map1D>> pieces_;
};

class ComposeNode final : public MapNode {
public:
    explicit ComposeNode(std::vector<Map1D> maps) : maps_(std::move(maps)) {
        require(!maps_.empty(), "compose: empty chain");
        for (size_t i = 1; i < maps_.size(); ++i) {
            Interval r = maps_[i - 1].range(), d = maps_[i].domain();
            require(r.lo >= d.lo - 1e-9 && r.hi <= d.hi + 1e-9,
                    "compose: range of stage " + std::to_string(i - 1) +
                        " is not contained in domain of stage " + std::to_string(i));
        }
    }
    Interval domain() const override { return maps_.front().domain(); }
    Interval range() const override { return maps_.back().range(); }
    double eval(double x, double tol) const override {
        double t = tol / static_cast<double>(maps_.size());
        for (const auto& m : maps_) {
            Interval d = m.domain();
            x = m.eval(std::clamp(x, d.lo, d.hi), t);
        }
        return x;
    }
    std::optional<double> deriv1(double x) const override {
        double acc = 1.0;
        for (const auto& m : maps_) {
            auto d = m.exact_deriv1(x);
            if (!d) return std::nullopt;
            acc *= *d;
            x = m.eval(x);
        }
        return acc;
    }
    const std::vector<Map1D>& maps() const { return maps_; }
    std::string describe() const override { return "compose"; }

private:
    std::vector<Map1D> maps_;
};

class InverseNode final : public MapNode {
public:
    explicit InverseNode(Map1D inner) : inner_(std::move(inner)) {}
    Interval domain() const override { return inner_.range(); }
    Interval range() const override { return inner_.domain(); }
    double eval(double y, double tol) const override {
        Interval d = inner_.domain();
        double lo = d.lo, hi = d.hi;
        double flo = inner_.eval(lo, tol) - y, fhi = inner_.eval(hi, tol) - y;
        if (flo > 0 && flo < 1e-9) return lo;
        if (fhi < 0 && fhi > -1e-9) return hi;
        if (flo > 0 || fhi < 0)
            throw std::domain_error("inverse: value outside range");
        for (int i = 0; i < 200 && hi - lo > tol; ++i) {
            double mid = 0.5 * (lo + hi);
            double f = inner_.eval(mid, tol) - y;
            (f <= 0 ? lo : hi) = mid;
        }
        if (hi - lo > 2 * tol)
            throw std::runtime_error("inverse: bisection failed to converge "
                                     "(non-monotone expression?)");
        return 0.5 * (lo + hi);
    }
    std::optional<double> deriv1(double y) const override {
        double x = eval(y, 1e-13);
        auto d = inner_.exact_deriv1(x);
        if (!d || *d == 0.0) return std::nullopt;
        return 1.0 / *d;
    }
    const Map1D& inner() const { return inner_; }
    std::string describe() const override { return "inverse"; }

private:
    Map1D inner_;
};

class AffineConjNode final : public MapNode {
public:
    AffineConjNode(double c, double o, Map1D inner)
        : c_(c), o_(o), inner_(std::move(inner)) {
        require(c != 0.0, "affine_conj: scale must be nonzero");
    }
    Interval domain() const override { return transport(inner_.domain()); }
    Interval range() const override { return transport(inner_.range()); }
    double eval(double x, double tol) const override {
        double y = (x - o_) / c_;
        Interval d = inner_.domain();
        y = std::clamp(y, d.lo, d.hi);
        return c_ * inner_.eval(y, tol / std::max(1.0, std::abs(c_))) + o_;
    }
    std::optional<double> deriv1(double x) const override {
        return inner_.exact_deriv1((x - o_) / c_);
    }
    std::optional<double> end_slope(int which) const override {
        const auto& n = inner_.node();
        return n.end_slope(c_ > 0 ? which : 1 - which);
    }
    std::string describe() const override { return "affine_conj"; }

private:
    Interval transport(Interval iv) const {
        double a = c_ * iv.lo + o_, b = c_ * iv.hi + o_;
        return c_ > 0 ? Interval{a, b} : Interval{b, a};
    }
    double c_, o_;
    Map1D inner_;
};

class BoundaryFlattenNode final : public MapNode {
public:
    BoundaryFlattenNode(Map1D inner, double s0, double s1)
        : inner_(std::move(inner)), s0_(s0), s1_(s1) {
        Interval d = inner_.domain();
        require(std::abs(d.lo) < 1e-12 && std::abs(d.hi - 1.0) < 1e-12,
                "boundary_flatten: inner must act on [0,1]");
        require(s0 > 0 && s1 > 0, "boundary_flatten: end slopes must be positive");
        mirror_ = Map1D::affine_conj(-1.0, 1.0, inner_);
    }
    Interval domain() const override { return {0.0, 1.0}; }
    Interval range() const override { return {0.0, 1.0}; }
    double eval(double x, double tol) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        if (x > 0.5) return 1.0 - eval_bottom(1.0 - x, mirror_, s1_, tol);
        return eval_bottom(x, inner_, s0_, tol);
    }
    std::optional<double> end_slope(int) const override { return 1.0; }
    std::string describe() const override { return "boundary_flatten"; }

private:
    // Evaluate phi^{-2} o g o phi^2 on the bottom half for g = inner.
    // Below kZlo the chart phi^2(x) = exp(-e^{1/x}) is at or beyond the edge
    // of double range, so the composite is evaluated through its log-domain
    // closed form; the corrections beyond the end slope enter at O(phi^2(x)),
    // below double resolution there.
    static double eval_bottom(double x, const Map1D& g, double slope0, double tol) {
        constexpr double kZlo = 0.2; // phi = e^{-1/x} exactly for x <= 0.2
        if (x < kZlo) {
            double u = 1.0 / x;
            double e = u > 745.0 ? 0.0 : std::exp(-u);
            return 1.0 / (u + std::log1p(-std::log(slope0) * e));
        }
        const auto& phi = MtChart::shared();
        double v = phi.value(phi.value(x));
        double w = g.eval(v, tol);
        if (w > 0.9)
            throw std::runtime_error(
                "boundary_flatten: displacement too large for direct evaluation");
        return phi.inverse(phi.inverse(w));
    }
    Map1D inner_;
    Map1D mirror_;
    double s0_, s1_;
};

Interval node_domain_check(const Map1D& m) { return m.domain(); }

// Construction-time monotonicity spot check.
void spot_check_monotone(const Map1D& m) {
    Interval d = node_domain_check(m);
    const int n = 64;
    double prev = m.eval(d.lo, 1e-10);
    for (int i = 1; i <= n; ++i) {
        double x = d.lo + d.length() * i / n;
        double y = m.eval(x, 1e-10);
        if (y < prev - 1e-9)
            throw std::invalid_argument("Map1D: not increasing on spot grid near x=" +
                                        std::to_string(x));
        prev = y;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Map1D
// ---------------------------------------------------------------------------

Map1D Map1D::identity(Interval dom) {
    return Map1D(std::make_shared<IdentityNode>(dom));
}
Map1D Map1D::affine(double slope, double offset, Interval dom) {
    return Map1D(std::make_shared<AffineNode>(slope, offset, dom));
}
Map1D Map1D::moebius(double s, double t, Interval dom) {
    Map1D m(std::make_shared<MoebiusNode>(s, t, dom));
    spot_check_monotone(m);
    return m;
}
Map1D Map1D::yoccoz(double a, double b) {
    return Map1D(std::make_shared<YoccozNode>(a, b));
}
Map1D Map1D::pl_dyadic(plmap::PLMap pl) {
    return Map1D(std::make_shared<PLDyadicNode>(std::move(pl)));
}
Map1D Map1D::plateau_bump(Interval support, double ramp, double delta,
                          bool allow_steep) {
    return Map1D(std::make_shared<PlateauBumpNode>(support, ramp, delta, allow_steep));
}
Map1D Map1D::piecewise_glue(Interval dom,
                            std::vector<std::pair<Interval, Map1D>> pieces) {
    return Map1D(std::make_shared<PiecewiseGlueNode>(dom, std::move(pieces)));
}
Map1D Map1D::compose_chain(std::vector<Map1D> maps) {
    return Map1D(std::make_shared<ComposeNode>(std::move(maps)));
}
Map1D Map1D::affine_conj(double scale, double offset, const Map1D& inner) {
    return Map1D(std::make_shared<AffineConjNode>(scale, offset, inner));
}
Map1D Map1D::boundary_flatten(const Map1D& inner) {
    auto s0 = inner.node().end_slope(0);
    auto s1 = inner.node().end_slope(1);
    if (!s0 || !s1)
        throw std::invalid_argument(
            "boundary_flatten: inner exposes no exact end slopes; pass them");
    return boundary_flatten(inner, *s0, *s1);
}
Map1D Map1D::boundary_flatten(const Map1D& inner, double slope0, double slope1) {
    return Map1D(std::make_shared<BoundaryFlattenNode>(inner, slope0, slope1));
}
Map1D Map1D::compactified_affine(double s, double t) {
    return Map1D(std::make_shared<CompactifiedAffineNode>(s, t));
}
Map1D Map1D::from_node(std::shared_ptr<const MapNode> node) {
    return Map1D(std::move(node));
}
Map1D Map1D::inverse() const {
    return Map1D(std::make_shared<InverseNode>(*this));
}

double Map1D::eval(double x, double tol) const {
    if (!node_) throw std::logic_error("Map1D: empty");
    Interval d = node_->domain();
    if (x < d.lo - 1e-9 || x > d.hi + 1e-9)
        throw std::domain_error("Map1D: x outside domain");
    return node_->eval(std::clamp(x, d.lo, d.hi), tol);
}
Interval Map1D::domain() const { return node_->domain(); }
Interval Map1D::range() const { return node_->range(); }
std::optional<double> Map1D::exact_deriv1(double x) const {
    return node_->deriv1(x);
}

// ---------------------------------------------------------------------------
// CircleMap
// ---------------------------------------------------------------------------

CircleMap::CircleMap(Map1D lift, double basepoint_offset)
    : lift_(std::move(lift)), offset_(basepoint_offset) {
    Interval d = lift_.domain();
    if (std::abs(d.lo) > 1e-12 || std::abs(d.hi - 1.0) > 1e-12)
        throw std::invalid_argument("CircleMap: lift must be given on [0,1]");
    // degree-one periodicity on a spot grid: F(1) = F(0) + 1
    double f0 = lift_.eval(0.0), f1 = lift_.eval(1.0);
    if (std::abs(f1 - f0 - 1.0) > 1e-9)
        throw std::invalid_argument("CircleMap: lift violates F(x+1) = F(x)+1");
}

CircleMap CircleMap::rotation(double theta) {
    return CircleMap(Map1D::affine(1.0, theta, {0.0, 1.0}));
}

double CircleMap::eval_lift(double x, double tol) const {
    double n = std::floor(x);
    double r = x - n;
    return lift_.eval(r, tol) + n;
}

double CircleMap::eval_circle(double x, double tol) const {
    double y = eval_lift(x, tol);
    return y - std::floor(y);
}

double CircleMap::iterate_lift(double x, long n, double tol) const {
    if (n >= 0) {
        double per = tol / std::max<long>(1, n);
        for (long i = 0; i < n; ++i) x = eval_lift(x, per);
        return x;
    }
    // Backward iteration: solve F(y) = x using F(y + m) = F(y) + m and the
    // inverse of the [0,1] restriction, whose range is [F(0), F(0)+1].
    Map1D inv = lift_.inverse();
    double per = tol / static_cast<double>(-n);
    double f0 = lift_.eval(0.0, per);
    for (long i = 0; i < -n; ++i) {
        double m = std::floor(x - f0);
        double t = x - m; // lies in [F(0), F(0)+1)
        Interval r = inv.domain();
        t = std::clamp(t, r.lo, r.hi);
        x = inv.eval(t, per) + m;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Calculus
// ---------------------------------------------------------------------------

namespace {

double finite_difference_k(const Map1D& m, double x, int k, double h, double tol) {
    // central stencils, clamped into the domain by shifting the center
    Interval d = m.domain();
    double half = 0.5 * k * h;
    double c = std::clamp(x, d.lo + half, d.hi - half);
    // binomial stencil: f^{(k)}(x) ~ h^{-k} sum_j (-1)^{k-j} C(k,j) f(c + (j - k/2) h)
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        double w = ((k - j) % 2 == 0) ? binom : -binom;
        acc += w * m.eval(c + (j - 0.5 * k) * h, tol * 1e-3);
        binom = binom * (k - j) / (j + 1);
    }
    return acc / std::pow(h, k);
}

} // namespace

DerivEstimate derivative_k(const Map1D& m, double x, int k, double tol) {
    if (k < 1 || k > 5)
        throw std::invalid_argument("derivative_k: k must lie in 1..5");
    if (k == 1) {
        if (auto d = m.exact_deriv1(x)) return {*d, 0.0};
    }
    Interval dom = m.domain();
    double scale = std::max(1e-6, dom.length());
    double h = std::pow(tol, 1.0 / (k + 2)) * scale;
    h = std::min(h, dom.length() / (2.0 * k));
    double a = finite_difference_k(m, x, k, h, tol);
    double b = finite_difference_k(m, x, k, h / 2, tol);
    // Richardson: central stencils have O(h^2) error
    double extr = (4 * b - a) / 3.0;
    return {extr, std::abs(b - a) / 3.0 + tol};
}

std::vector<Interval> support_components(const Map1D& m, int resolution, double tol) {
    Interval d = m.domain();
    std::vector<Interval> out;
    auto disp = [&](double x) { return std::abs(m.eval(x) - x); };
    bool open = false;
    double start = 0.0, prev = d.lo;
    auto refine = [&](double inside, double outside) {
        double a = outside, b = inside;
        for (int i = 0; i < 60 && std::abs(b - a) > 1e-14; ++i) {
            double mid = 0.5 * (a + b);
            (disp(mid) > tol ? b : a) = mid;
        }
        return 0.5 * (a + b);
    };
    for (int i = 0; i <= resolution; ++i) {
        double x = d.lo + d.length() * i / resolution;
        bool inside = disp(x) > tol;
        if (inside && !open) {
            start = (i == 0) ? d.lo : refine(x, prev);
            open = true;
        } else if (!inside && open) {
            out.push_back({start, refine(prev, x)});
            open = false;
        }
        prev = x;
    }
    if (open) out.push_back({start, d.hi});
    return out;
}

double iterate(const Map1D& m, long n, double x, double tol) {
    if (n == 0) return x;
    double per = tol / static_cast<double>(std::abs(n));
    if (n > 0) {
        for (long i = 0; i < n; ++i) x = m.eval(x, per);
        return x;
    }
    Map1D inv = m.inverse();
    for (long i = 0; i < -n; ++i) x = inv.eval(x, per);
    return x;
}

double variation_estimate(const Map1D& m, int k, const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("variation_estimate: short grid");
    auto value = [&](double x) {
        if (k == 0) return m.eval(x) - x;
        return derivative_k(m, x, k).value;
    };
    double acc = 0.0;
    double prev = value(grid[0]);
    for (size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("variation_estimate: grid not increasing");
        double v = value(grid[i]);
        acc += std::abs(v - prev);
        prev = v;
    }
    return acc;
}

bool monotone_on_grid(const Map1D& m, const std::vector<double>& grid, double tol) {
    if (grid.empty()) return true;
    double prev = m.eval(grid.front(), tol);
    for (size_t i = 1; i < grid.size(); ++i) {
        double v = m.eval(grid[i], tol);
        if (v <= prev - tol) return false;
        prev = v;
    }
    return true;
}

std::vector<double> uniform_grid(Interval iv, int n) {
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = iv.lo + iv.length() * i / n;
    return g;
}

double mt_chart(double x) { return MtChart::shared().value(x); }
double mt_chart_inv(double y) { return MtChart::shared().inverse(y); }

double odd_chart(double x) { return OddChart::shared().value(x); }
double odd_chart_inv(double y) { return OddChart::shared().inverse(y); }

} // namespace onedyn::homeo
