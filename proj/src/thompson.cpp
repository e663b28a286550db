#include "onedyn/thompson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "onedyn/mollifier.hpp"

namespace onedyn::thompson {

std::pair<PLMap, PLMap> standard_generators() {
    using D = Dyadic;
    PLMap A({D(0), D::scaled(1, 1), D::scaled(3, 2), D(1)},
            {D(0), D::scaled(1, 2), D::scaled(1, 1), D(1)});
    PLMap B({D(0), D::scaled(1, 1), D::scaled(3, 2), D::scaled(7, 3), D(1)},
            {D(0), D::scaled(1, 1), D::scaled(5, 3), D::scaled(3, 2), D(1)});
    return {A, B};
}

bool relations_check(const PLMap& A, const PLMap& B) {
    auto comm = [](const PLMap& x, const PLMap& y) {
        // [x,y] = x^{-1} y^{-1} x y, rightmost acting first
        return plmap::pl_word({{&x, -1}, {&y, -1}, {&x, 1}, {&y, 1}});
    };
    PLMap ABi = plmap::pl_word({{&A, 1}, {&B, -1}});
    PLMap c1 = plmap::pl_word({{&A, -1}, {&B, 1}, {&A, 1}});
    PLMap c2 = plmap::pl_word({{&A, -2}, {&B, 1}, {&A, 2}});
    return comm(ABi, c1).is_identity() && comm(ABi, c2).is_identity();
}

namespace {

// Partition data for one segment [x0, x0+dx] -> [y0, y0+dy] with dyadic
// dx = p/2^m, dy = q/2^n and p <= q: cut the source into q power-of-two
// pieces (p-1 of size 2^-m, then 2^{-m-1}, ..., 2^{-m-(q-p)}, 2^{-m-(q-p)}),
// each mapped onto a target piece of size 2^-n.
void segment_breaks(const Dyadic& x0, const Dyadic& dx, const Dyadic& y0,
                    const Dyadic& dy, std::vector<Dyadic>& xs,
                    std::vector<Dyadic>& ys) {
    using boost::multiprecision::cpp_int;
    cpp_int p = dx.mantissa();
    long m = -dx.exponent();
    cpp_int q = dy.mantissa();
    long n = -dy.exponent();
    if (p > q) {
        // build the inverse segment and swap roles
        std::vector<Dyadic> xs2, ys2;
        segment_breaks(y0, dy, x0, dx, xs2, ys2);
        for (size_t i = 0; i < xs2.size(); ++i) {
            xs.push_back(ys2[i]);
            ys.push_back(xs2[i]);
        }
        return;
    }
    // source cut lengths
    std::vector<Dyadic> cuts;
    for (cpp_int i = 0; i < p - 1; ++i) cuts.push_back(Dyadic(1, -m));
    cpp_int extra = q - p;
    for (cpp_int j = 1; j <= extra; ++j)
        cuts.push_back(Dyadic(1, -(m + static_cast<long>(j))));
    cuts.push_back(Dyadic(1, -(m + static_cast<long>(extra))));
    // target pieces all of length 2^-n
    Dyadic sx = x0, sy = y0;
    for (const auto& c : cuts) {
        xs.push_back(sx);
        ys.push_back(sy);
        sx = sx + c;
        sy = sy + Dyadic(1, -n);
    }
}

} // namespace

PLMap n_transitive_map(const std::vector<Dyadic>& xs_in,
                       const std::vector<Dyadic>& ys_in) {
    if (xs_in.size() != ys_in.size() || xs_in.empty())
        throw std::invalid_argument("n_transitive_map: tuple size mismatch");
    std::vector<Dyadic> xs = xs_in, ys = ys_in;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= Dyadic(0) || xs[i] >= Dyadic(1) || ys[i] <= Dyadic(0) ||
            ys[i] >= Dyadic(1))
            throw std::invalid_argument("n_transitive_map: tuples must lie in (0,1)");
        if (i && (xs[i] <= xs[i - 1] || ys[i] <= ys[i - 1]))
            throw std::invalid_argument("n_transitive_map: tuples must increase");
    }
    xs.insert(xs.begin(), Dyadic(0));
    ys.insert(ys.begin(), Dyadic(0));
    xs.push_back(Dyadic(1));
    ys.push_back(Dyadic(1));
    std::vector<Dyadic> bx, by;
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        segment_breaks(xs[i], xs[i + 1] - xs[i], ys[i], ys[i + 1] - ys[i], bx, by);
    bx.push_back(Dyadic(1));
    by.push_back(Dyadic(1));
    return PLMap(std::move(bx), std::move(by));
}

// ---------------------------------------------------------------------------
// Expansion maps and the Ghys-Sergiescu realization
// ---------------------------------------------------------------------------

ExpansionMap ExpansionMap::doubling() {
    ExpansionMap h;
    h.doubling_ = true;
    return h;
}

ExpansionMap ExpansionMap::smooth_default() {
    ExpansionMap h;
    h.doubling_ = false;
    return h;
}

double ExpansionMap::value(double x) const {
    if (doubling_) return 2.0 * x;
    double n = std::floor(x);
    double r = x - n;
    double bump = 0.5 * (MollifierPhi::shared().value(r) + 1.0);
    return r + bump + 2.0 * n;
}

double ExpansionMap::inverse(double y) const {
    if (doubling_) return y / 2.0;
    // h(x + n) = h(x) + 2n: reduce to y in [0, 2), solve on [0, 1].
    double n = std::floor(y / 2.0);
    double t = y - 2.0 * n;
    const auto& phi = MollifierPhi::shared();
    double x = 0.5 * t; // h is between Id and Id+1 on [0,1]
    for (int i = 0; i < 40; ++i) {
        double f = x + 0.5 * (phi.value(x) + 1.0) - t;
        double d = 1.0 + 0.5 * phi.derivative(x);
        double step = f / d;
        x -= step;
        if (x < 0.0) x = 0.0;
        if (x > 1.0) x = 1.0;
        if (std::abs(step) < 1e-16) break;
    }
    return x + n;
}

Report ExpansionMap::check_conditions(int grid) const {
    Report rep;
    rep.check_le("h(0) = 0", std::abs(value(0.0)), 1e-14);
    double worstB = 0.0, worstC = 1e300;
    for (int i = 0; i <= grid; ++i) {
        double x = -1.0 + 3.0 * i / grid;
        worstB = std::max(worstB, std::abs(value(x + 1.0) - value(x) - 2.0));
        double h = 1.0 / grid;
        worstC = std::min(worstC, (value(x + h) - value(x)) / h);
    }
    rep.check_le("h(x+1) = h(x)+2", worstB, 1e-11);
    rep.check_true("expansion |h(x)-h(y)| > |x-y|", worstC >= 1.0 - 1e-9);
    // tangency order at 0: largest i <= 4 with |h(x) - x| / x^i -> 0 along
    // dyadics (doubling has order 0; the smooth default is flat at 0)
    int order = 0;
    for (int i = 1; i <= 4; ++i) {
        double r1 = std::abs(value(1.0 / 32) - 1.0 / 32) / std::pow(1.0 / 32, i);
        double r2 = std::abs(value(1.0 / 256) - 1.0 / 256) / std::pow(1.0 / 256, i);
        if (r2 < 0.25 * r1 || (r1 == 0.0 && r2 == 0.0)) order = i;
    }
    rep.add("tangency order at 0 (tested to 4)", order, 4, true);
    return rep;
}

GhysSergiescu::GhysSergiescu(ExpansionMap h, int level) : h_(h), level_(level) {
    if (level < 2 || level > 26)
        throw std::invalid_argument("GhysSergiescu: level out of range");
    if (h_.is_doubling()) {
        exact_identity_ = true;
        return;
    }
    // eta(x) = h^{-1}(eta(2x)), eta(x+1) = eta(x)+1, eta(0)=0, eta(1)=1:
    // every level-q node needs one h^{-1} of an already known level-(q-1)
    // value (2x reduced into [0,1] by periodicity).
    const long N = 1L << level_;
    table_.assign(static_cast<size_t>(N) + 1, 0.0);
    table_[static_cast<size_t>(N)] = 1.0;
    for (int q = 1; q <= level_; ++q) {
        long step = 1L << (level_ - q);
        for (long k = step; k < N; k += 2 * step) {
            long j = 2 * k;
            double e2 = (j <= N) ? table_[static_cast<size_t>(j)]
                                 : table_[static_cast<size_t>(j - N)] + 1.0;
            table_[static_cast<size_t>(k)] = h_.inverse(e2);
        }
    }
    // monotone cubic (Fritsch-Carlson) slopes on the table
    size_t n = table_.size();
    slopes_.assign(n, 0.0);
    double hstep = 1.0 / static_cast<double>(n - 1);
    std::vector<double> d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) d[i] = (table_[i + 1] - table_[i]) / hstep;
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0)
            slopes_[i] = 0.0;
        else
            slopes_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]); // harmonic mean
    }
    // Interpolation residual at sampled level-(L+2) dyadics.  The identity
    // eta(y) = h^{-1}(eta(2y)) holds globally, so the exact value at
    // k/2^{L+2} is two chained h^{-1} applications on the exact level-L value
    // eta(k/2^L) = table[k mod N] + floor(k/N).
    double worst = 0.0;
    long samples = std::min<long>(512, N);
    for (long i = 1; i <= samples; ++i) {
        long k = (4 * N / samples) * i - 1; // hits odd level-(L+2) numerators
        if (k <= 0 || k >= 4 * N) continue;
        double etaL = table_[static_cast<size_t>(k % N)] +
                      static_cast<double>(k / N);
        double exact = h_.inverse(h_.inverse(etaL));
        double x = static_cast<double>(k) / static_cast<double>(4 * N);
        worst = std::max(worst, std::abs(eta(x) - exact));
    }
    interp_residual_ = worst;
}

double GhysSergiescu::eta(double x) const {
    if (exact_identity_) return x;
    double n = std::floor(x);
    double r = x - n;
    size_t cells = table_.size() - 1;
    double pos = r * static_cast<double>(cells);
    size_t i = std::min(static_cast<size_t>(pos), cells - 1);
    double t = pos - static_cast<double>(i);
    double hstep = 1.0 / static_cast<double>(cells);
    double y0 = table_[i], y1 = table_[i + 1];
    double m0 = slopes_[i] * hstep, m1 = slopes_[i + 1] * hstep;
    double t2 = t * t, t3 = t2 * t;
    double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    return v + n;
}

double GhysSergiescu::eta_inverse(double y) const {
    if (exact_identity_) return y;
    double n = std::floor(y);
    double r = y - n;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80 && hi - lo > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        (eta(mid) <= r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) + n;
}

namespace {

class EtaConjNode final : public homeo::MapNode {
public:
    EtaConjNode(const GhysSergiescu* gs, PLMap g) : gs_(gs), g_(std::move(g)) {}
    homeo::Interval domain() const override { return {0.0, 1.0}; }
    homeo::Interval range() const override { return {0.0, 1.0}; }
    double eval(double x, double) const override {
        double y = gs_->eta_inverse(x);
        double gy = g_.eval(std::clamp(y, 0.0, 1.0));
        return gs_->eta(gy);
    }
    std::string describe() const override { return "eta_conj"; }

private:
    const GhysSergiescu* gs_;
    PLMap g_;
};

} // namespace

Map1D GhysSergiescu::realize(const PLMap& g) const {
    return Map1D::from_node(std::make_shared<EtaConjNode>(this, g));
}

// ---------------------------------------------------------------------------
// BS(1,2)
// ---------------------------------------------------------------------------

Bs12Result bs12_compactified(const std::string& word) {
    // accumulate the affine map (s, t): x -> s x + t, rightmost letter first
    double s = 1.0, t = 0.0;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        double s2, t2;
        switch (*it) {
        case 'a': s2 = 2.0; t2 = 0.0; break;
        case 'A': s2 = 0.5; t2 = 0.0; break;
        case 'e': s2 = 1.0; t2 = 1.0; break;
        case 'E': s2 = 1.0; t2 = -1.0; break;
        default: throw std::invalid_argument("bs12 word: letters are a, A, e, E");
        }
        // apply current (s,t) first, then (s2,t2): x -> s2(s x + t) + t2
        s = s2 * s;
        t = s2 * t + t2;
    }
    Bs12Result res;
    res.affine_s = s;
    res.affine_t = t;
    res.chart_map = Map1D::compactified_affine(s, t);
    res.flattened = Map1D::boundary_flatten(res.chart_map);
    return res;
}

Map1D muller_tsuboi_conjugate(const Map1D& g) {
    homeo::Interval d = g.domain();
    if (std::abs(d.lo) > 1e-12 || std::abs(d.hi - 1.0) > 1e-12)
        throw std::invalid_argument("muller_tsuboi: g must act on [0,1]");
    if (std::abs(g.eval(0.0)) > 1e-12 || std::abs(g.eval(1.0) - 1.0) > 1e-12)
        throw std::invalid_argument("muller_tsuboi: g must fix 0 and 1");
    auto s0 = g.node().end_slope(0);
    if (s0 && *s0 <= 0.0)
        throw std::invalid_argument("muller_tsuboi: g'(0) must be positive");
    return Map1D::boundary_flatten(g);
}

TangencyReport tangency_ratios(const Map1D& g2, int order, int j_lo, int j_hi) {
    TangencyReport rep;
    rep.order = order;
    for (int j = j_lo; j <= j_hi; ++j) {
        double x = std::ldexp(1.0, -j);
        double v = std::abs(g2.eval(x) - x) / std::pow(x, order);
        rep.xs.push_back(x);
        rep.ratios.push_back(v);
    }
    return rep;
}

Map1D yoccoz_map(double a, double b) { return Map1D::yoccoz(a, b); }

} // namespace onedyn::thompson
