#include "onedyn/denjoy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "onedyn/mollifier.hpp"

namespace onedyn::denjoy {

namespace {

double v_of(const ConcaveModulus& alpha, double x) {
    return x * x * alpha.eval_global(1.0 / x);
}

// The bump profile: rho = Phi'-normalized, with antiderivative
// R(t) = (Phi(t)+1)/2 (R(0) = 0, R(1) = 1).
double profile_R(double t) { return 0.5 * (MollifierPhi::shared().value(t) + 1.0); }
double profile_rho(double t) { return MollifierPhi::shared().derivative(t) / 2.0; }

// fractional part of k*theta in 80-bit precision
double frac_ktheta(const Theta& theta, long k) {
    long double v = static_cast<long double>(k) * theta.approx();
    v -= floorl(v);
    return static_cast<double>(v);
}

class DenjoyLiftNode final : public homeo::MapNode {
public:
    // bumps sorted by position; coeff[i] scales the R-profile on
    // [pos[i], pos[i]+len[i]]; shift is the global translation constant.
    DenjoyLiftNode(std::vector<double> pos, std::vector<double> len,
                   std::vector<double> coeff, double shift)
        : pos_(std::move(pos)), len_(std::move(len)), coeff_(std::move(coeff)),
          shift_(shift) {
        prefix_.assign(pos_.size() + 1, 0.0);
        for (size_t i = 0; i < pos_.size(); ++i)
            prefix_[i + 1] = prefix_[i] + coeff_[i];
    }
    homeo::Interval domain() const override { return {0.0, 1.0}; }
    homeo::Interval range() const override {
        return {eval(0.0, 0.0), eval(0.0, 0.0) + 1.0};
    }
    double bump_sum(double x) const {
        // bumps are disjoint: full contribution left of x plus at most one
        // partial bump containing x
        size_t i = static_cast<size_t>(
            std::upper_bound(pos_.begin(), pos_.end(), x) - pos_.begin());
        double acc = prefix_[i];
        if (i > 0) {
            size_t j = i - 1;
            double t = (x - pos_[j]) / len_[j];
            if (t < 1.0) acc += coeff_[j] * (profile_R(t) - 1.0);
        }
        return acc;
    }
    double eval(double x, double) const override { return x + shift_ + bump_sum(x); }
    std::optional<double> deriv1(double x) const override {
        size_t i = static_cast<size_t>(
            std::upper_bound(pos_.begin(), pos_.end(), x) - pos_.begin());
        if (i == 0) return 1.0;
        size_t j = i - 1;
        double t = (x - pos_[j]) / len_[j];
        if (t >= 1.0) return 1.0;
        return 1.0 + coeff_[j] / len_[j] * profile_rho(t);
    }
    std::string describe() const override { return "denjoy_lift"; }

private:
    std::vector<double> pos_, len_, coeff_, prefix_;
    double shift_;
};

} // namespace

LengthsResult lengths_from_modulus(const ConcaveModulus& alpha, long window,
                                   double tail_target) {
    if (window < 2) throw std::invalid_argument("lengths_from_modulus: window >= 2");
    auto integ = modulus::integrability(alpha, 1e-10);
    if (!integ.finite)
        throw std::invalid_argument(
            "lengths_from_modulus: 1/alpha is not integrable near 0 "
            "(denjoy hypothesis fails)");
    double K = std::max(2.0, 1.0 / alpha.eval_global(1.0));
    for (int iter = 0; iter < 200; ++iter, K *= 2) {
        LengthsResult r;
        r.K = K;
        r.lengths.resize(static_cast<size_t>(2 * window + 1));
        double sum = 0.0;
        for (long k = -window; k <= window; ++k) {
            double l = 1.0 / v_of(alpha, static_cast<double>(std::labs(k)) + K);
            r.lengths[static_cast<size_t>(k + window)] = l;
            sum += l;
        }
        // tail: sum_{|k| > W} 1/v(|k|+K) <= 2 int_0^{1/(W+K)} dx/alpha(x)
        r.tail_bound = 2.0 * modulus::inverse_integral_upper(
                                 alpha, 1.0 / (static_cast<double>(window) + K),
                                 std::min(1e-10, tail_target / 10));
        r.sum = sum;
        if (sum + r.tail_bound <= 1.0 && r.tail_bound < tail_target) return r;
    }
    throw std::runtime_error("lengths_from_modulus: cutoff escalation failed");
}

std::vector<double> blowup_positions(const Theta& theta,
                                     const std::vector<double>& lengths,
                                     long window) {
    if (lengths.size() != static_cast<size_t>(2 * window + 1))
        throw std::invalid_argument("blowup_positions: lengths size mismatch");
    double S = std::accumulate(lengths.begin(), lengths.end(), 0.0);
    if (S > 1.0)
        throw std::invalid_argument("blowup_positions: total length exceeds 1");
    struct Entry {
        double frac;
        long k;
    };
    std::vector<Entry> order;
    order.reserve(lengths.size());
    for (long k = -window; k <= window; ++k)
        order.push_back({frac_ktheta(theta, k), k});
    std::sort(order.begin(), order.end(),
              [](const Entry& a, const Entry& b) { return a.frac < b.frac; });
    std::vector<double> pos(lengths.size());
    double acc = 0.0;
    for (const auto& e : order) {
        pos[static_cast<size_t>(e.k + window)] = (1.0 - S) * e.frac + acc;
        acc += lengths[static_cast<size_t>(e.k + window)];
    }
    return pos;
}

WanderingScheme build_scheme(const ConcaveModulus& alpha, const Theta& theta,
                             long window, double tail_target) {
    auto lr = lengths_from_modulus(alpha, window, tail_target);
    WanderingScheme s;
    s.theta = theta;
    s.K = lr.K;
    s.window = window;
    s.lengths = lr.lengths;
    s.tail_bound = lr.tail_bound;
    s.sum_lengths = lr.sum;
    s.positions = blowup_positions(theta, s.lengths, window);
    return s;
}

DenjoyMap build_denjoy(const ConcaveModulus& alpha, const Theta& theta, long window,
                       double tail_target) {
    DenjoyMap dm;
    dm.scheme = build_scheme(alpha, theta, window, tail_target);
    const auto& sc = dm.scheme;
    Report& cert = dm.certificate;

    // hypotheses of the integrated construction
    double sup_fund = 0.0, inf_ratio = 1e300, max_slope = 0.0;
    for (long k = -window; k < window; ++k) {
        double lk = sc.ell(k), ln = sc.ell(k + 1);
        double ratio = ln / lk;
        inf_ratio = std::min(inf_ratio, ratio);
        sup_fund = std::max(sup_fund,
                            std::abs(1.0 - ratio) / alpha.eval_global(lk));
        max_slope = std::max(max_slope, std::abs(ratio - 1.0));
    }
    double rho_sup = MollifierPhi::shared().c_norm(1) / 2.0;
    cert.check_true("inf ell_{k+1}/ell_k > 0", inf_ratio > 0.0);
    cert.check_true("sup (1/alpha)|1-ratio| finite", std::isfinite(sup_fund));
    cert.check_true("positivity 1 - |1-ratio| sup rho > 0",
                    1.0 - max_slope * rho_sup > 0.0);
    if (!cert.all_pass())
        throw std::runtime_error("build_denjoy: hypothesis failed\n" + cert.str());

    // bump table in circle order with the cyclic length closure
    size_t n = sc.lengths.size();
    std::vector<std::pair<double, long>> order; // (position, k)
    for (long k = -window; k <= window; ++k)
        order.push_back({sc.x(k), k});
    std::sort(order.begin(), order.end());
    std::vector<double> pos(n), len(n), coeff(n);
    double csum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        long k = order[i].second;
        long next = (k == window) ? -window : k + 1; // cyclic closure
        pos[i] = sc.x(k);
        len[i] = sc.ell(k);
        coeff[i] = sc.ell(next) - sc.ell(k);
        csum += coeff[i];
    }
    // absorb the floating-point residual so the lift is exactly degree one
    coeff[n - 1] -= csum;

    // shift fixed by f(x_0) = x_1
    auto node0 = std::make_shared<DenjoyLiftNode>(pos, len, coeff, 0.0);
    double b0 = node0->bump_sum(sc.x(0));
    double shift = sc.x(1) - sc.x(0) - b0;
    auto node = std::make_shared<DenjoyLiftNode>(pos, len, coeff, shift);
    dm.f = CircleMap(homeo::Map1D::from_node(node));

    // integral of g over the circle: 1 + sum coeff = 1 exactly after closure
    double closure = std::accumulate(coeff.begin(), coeff.end(), 0.0);
    cert.check_le("int_{S^1} g - 1", std::abs(closure), 1e-15);
    // endpoint transport on a small sample; each circle wrap between {k theta}
    // and {(k+1) theta} contributes a truncation-seam residual of order
    // ell_W, which the scheme reports rather than forces away
    double seam = sc.ell(window);
    double worst = 0.0;
    for (long k : {-5L, -1L, 0L, 1L, 5L}) {
        if (std::labs(k) >= window) continue;
        double img = dm.f.eval_circle(sc.x(k));
        worst = std::max(worst, std::abs(img - sc.x(k + 1)));
    }
    cert.check_le("f(x_k) = x_{k+1} on sample", worst,
                  std::max(1e-12, 64.0 * seam));
    if (!cert.all_pass())
        throw std::runtime_error("build_denjoy: construction check failed\n" +
                                 cert.str());
    return dm;
}

FundamentalEstimate fundamental_estimate(const WanderingScheme& scheme,
                                         const ConcaveModulus& alpha) {
    FundamentalEstimate fe;
    for (long k = -scheme.window; k < scheme.window; ++k) {
        double lk = scheme.ell(k), ln = scheme.ell(k + 1);
        fe.sup = std::max(fe.sup,
                          std::abs(1.0 - ln / lk) / alpha.eval_global(lk));
    }
    fe.bound = 64.0 * scheme.K;
    fe.pass = fe.sup <= fe.bound;
    return fe;
}

Report verify_denjoy(const DenjoyMap& dm, const VerifyOptions& opt) {
    Report rep;
    const auto& sc = dm.scheme;
    double theta = static_cast<double>(sc.theta.approx());

    // (a) C^0 and C^1 distance to the rotation on a grid
    double sup_c0 = 0.0, sup_c1 = 0.0;
    const int grid = 4096;
    for (int i = 0; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        sup_c0 = std::max(sup_c0,
                          std::abs(dm.f.eval_lift(x) - (x + theta)));
        auto d = dm.f.lift().exact_deriv1(std::min(x, 1.0));
        if (d) sup_c1 = std::max(sup_c1, std::abs(*d - 1.0));
    }
    rep.check_le("sup|f - R_theta| vs eps", sup_c0, opt.eps);
    rep.check_le("sup|f' - 1| vs eps", sup_c1, opt.eps);

    // (b) wandering: f^n(J_0) disjoint from J_0 for 1 <= n <= n_iters
    {
        double a = sc.x(0), b = sc.x(0) + sc.ell(0);
        double la = a, lb = b;
        bool wander = true;
        for (long nit = 1; nit <= opt.wandering_iters; ++nit) {
            la = dm.f.eval_lift(la);
            lb = dm.f.eval_lift(lb);
            double ca = la - std::floor(la);
            double cb = lb - std::floor(lb);
            // arc [ca, cb] vs arc [a, b] on the circle (no wrap in scheme arcs)
            bool disjoint;
            if (ca <= cb)
                disjoint = (cb < a - 1e-12) || (ca > b + 1e-12);
            else
                disjoint = (ca > b + 1e-12) && (cb < a - 1e-12);
            if (!disjoint) {
                wander = false;
                break;
            }
        }
        rep.check_true("wandering f^n(J0) disjoint J0, n <= " +
                           std::to_string(opt.wandering_iters),
                       wander);
    }

    // (c) endpoint transport f(J_k) = J_{k+1}
    {
        double worst = 0.0;
        long r = std::min(opt.endpoint_range, sc.window - 1);
        for (long k = -r; k <= r; ++k) {
            double left = dm.f.eval_circle(sc.x(k));
            double right = dm.f.eval_circle(sc.x(k) + sc.ell(k));
            worst = std::max(worst, std::abs(left - sc.x(k + 1)));
            worst = std::max(worst,
                             std::abs(right - (sc.x(k + 1) + sc.ell(k + 1))));
        }
        rep.check_le("f(J_k) = J_{k+1} endpoints, |k| <= " + std::to_string(r),
                     worst, opt.endpoint_tol);
    }

    // (d) rotation number estimate
    {
        auto est = rotation::rotation_number(dm.f, opt.rotation_n, 0.0);
        double diff = std::abs(est.value - theta);
        diff = std::min(diff, 1.0 - diff);
        rep.check_le("|rot estimate - theta|", diff,
                     opt.rotation_tol + est.error_bound);
    }

    // (e) equal-gap residual of the truncated scheme (reported)
    {
        double worst = 0.0;
        for (long i : {-2L, -1L, 0L, 1L, 2L}) {
            double g1 = std::abs(frac_ktheta(sc.theta, i) -
                                 frac_ktheta(sc.theta, i - 1));
            double g2 = std::abs(frac_ktheta(sc.theta, i + 1) -
                                 frac_ktheta(sc.theta, i));
            g1 = std::min(g1, 1.0 - g1);
            g2 = std::min(g2, 1.0 - g2);
            worst = std::max(worst, std::abs(g1 - g2) * (1.0 - sc.sum_lengths));
        }
        rep.add("equal-gap residual (reported)", worst, sc.tail_bound,
                true, "truncation residual, informative");
    }
    return rep;
}

std::vector<double> sorted_length_ratios(const WanderingScheme& scheme) {
    std::vector<double> sorted = scheme.lengths;
    std::sort(sorted.rbegin(), sorted.rend());
    std::vector<double> ratios;
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        ratios.push_back(sorted[i + 1] / sorted[i]);
    return ratios;
}

} // namespace onedyn::denjoy
