#include "onedyn/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "onedyn/mollifier.hpp"

namespace onedyn::expansion {

using homeo::iterate;

double phi_c_norm(int r) {
    static std::map<int, double> cache;
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;
    double v = MollifierPhi::shared().c_norm(r);
    cache[r] = v;
    return v;
}

double k0_constant(int k, double delta0) {
    double d0 = (1.0 - delta0) / 2.0;
    return phi_c_norm(k + 1) / std::pow(d0, k + 1);
}

double ell0_threshold(int k, const ConcaveModulus& alpha, double delta0) {
    double K0 = k0_constant(k, delta0);
    for (double ell = 0.5; ell > 1e-300; ell /= 2)
        if (ell + K0 * alpha.eval_global(ell) <= 1.0) return ell;
    throw std::runtime_error("ell0_threshold: no admissible ell found");
}

double FastDiffeoParams::delta_step() const {
    return delta0 * std::pow(ell, k) * alpha.eval_global(ell);
}

long FastDiffeoParams::n0() const {
    return static_cast<long>(
        std::ceil(1.0 / (std::pow(ell, k - 1) * alpha.eval_global(ell))));
}

void FastDiffeoParams::validate() const {
    if (k < 1) throw std::invalid_argument("fast diffeo: k >= 1");
    if (!(delta0 >= 0.9 && delta0 < 1.0))
        throw std::invalid_argument("fast diffeo: delta0 must lie in [9/10, 1)");
    if (!(ell > 0)) throw std::invalid_argument("fast diffeo: ell > 0");
    if (!(delta_step() < ell))
        throw std::invalid_argument("fast diffeo: Delta must be < ell");
}

FastDiffeo build_fast_diffeo(const FastDiffeoParams& p) {
    p.validate();
    double D0 = p.d0();
    double Delta = p.delta_step();
    double ell = p.ell;
    double K0 = k0_constant(p.k, p.delta0);
    double alpha_ell = p.alpha.eval_global(ell);

    FastDiffeo out{Map1D(), p, false, {}};
    // slope certificate: |g'| <= Delta ||Phi'|| / (2 D0 ell)
    double slope_bound = Delta * phi_c_norm(1) / (2 * D0 * ell);
    out.monotone_regime = slope_bound < 1.0;
    out.f = Map1D::plateau_bump({0.0, ell}, D0 * ell, Delta, !out.monotone_regime);

    Report& cert = out.certificate;
    cert.check_le("endpoint 0 fixed", std::abs(out.f.eval(0.0)), 1e-15);
    cert.check_le("endpoint ell fixed", std::abs(out.f.eval(ell) - ell), 1e-15);
    // plateau value exact
    double mid = D0 * ell;
    cert.check_le("plateau displacement exact",
                  std::abs(out.f.eval(mid) - (mid + Delta)), 0.0);
    // plateau iteration arithmetic: f^i(D0 ell) = D0 ell + i Delta bit-for-bit
    long n0 = p.n0();
    double x = mid, acc = mid;
    bool exact = true;
    for (long i = 1; i <= n0; ++i) {
        x = out.f.eval(x);
        acc = acc + Delta;
        if (x != acc) exact = false;
    }
    cert.check_true("plateau iteration exact to N0", exact);
    cert.check_le("fastness of f^N0", p.delta0,
                  std::abs(x - mid) / ell + 1e-15, "measured displacement/|J|");
    // sampled |f' - 1| <= K0 alpha(ell)
    double sup_d1 = 0.0;
    for (int i = 0; i <= 512; ++i) {
        double xx = ell * i / 512.0;
        sup_d1 = std::max(sup_d1,
                          std::abs(homeo::derivative_k(out.f, xx, 1).value - 1.0));
    }
    cert.check_le("sup|f'-1| vs K0 alpha(ell)", sup_d1, K0 * alpha_ell);
    // sampled [f^{(k)} - Id^{(k)}]_alpha <= K0 (alpha-norm of the k-th
    // derivative data; a lower bound for [f]_{k,alpha})
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 96; ++i) {
        double xx = ell * i / 96.0;
        samples.emplace_back(xx, homeo::derivative_k(out.f, xx, p.k).value);
    }
    cert.check_le("sampled [f]_{k,alpha} vs K0",
                  modulus::alpha_norm_estimate(samples, p.alpha), K0);
    return out;
}

namespace {

// Chart-translation mover for intervals too long for the plateau regime:
// psi^{-1}(psi(x) + tau) transported to J, with tau = 2/D0 so that f^N is
// delta0-fast for every N >= 1 (displacement 1 - 4/(N tau) >= 1 - 2 D0).
Map1D chart_mover(Interval J, double delta0) {
    double d0 = (1.0 - delta0) / 2.0;
    Map1D unit = Map1D::compactified_affine(1.0, 2.0 / d0);
    return Map1D::affine_conj(J.length(), J.lo, unit);
}

} // namespace

FastChain build_fast_on_chain(int k, const ConcaveModulus& alpha, double delta0,
                              const std::vector<Interval>& intervals) {
    FastChain out;
    std::vector<Interval> sorted = intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](Interval a, Interval b) { return a.lo < b.lo; });
    for (size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].lo < sorted[i - 1].hi)
            throw std::invalid_argument("build_fast_on_chain: intervals overlap");

    double K0 = k0_constant(k, delta0);
    double d0 = (1.0 - delta0) / 2.0;
    int plateau_count = 0;
    std::vector<std::pair<Interval, Map1D>> pieces;
    for (Interval J : sorted) {
        double ell = J.length();
        double Delta = delta0 * std::pow(ell, k) * alpha.eval_global(ell);
        double slope_bound = Delta * phi_c_norm(1) / (2 * d0 * ell);
        if (slope_bound < 0.5) {
            Map1D unit = Map1D::plateau_bump({0.0, ell}, d0 * ell, Delta);
            pieces.emplace_back(J, Map1D::affine_conj(1.0, J.lo, unit));
            ++plateau_count;
        } else {
            pieces.emplace_back(J, chart_mover(J, delta0));
        }
    }
    if (pieces.empty()) {
        out.f = Map1D::identity({0.0, 1.0});
        out.certificate.check_true("empty chain -> identity", true);
        return out;
    }
    Interval dom{sorted.front().lo, sorted.back().hi};
    out.f = Map1D::piecewise_glue(dom, std::move(pieces));
    out.certificate.meta("plateau_intervals", std::to_string(plateau_count));
    out.certificate.meta("chart_intervals",
                         std::to_string(sorted.size() - plateau_count));
    // sampled global alpha-norm of the k-th derivative data vs 2 K0, only
    // meaningful when every interval is in the plateau regime
    if (plateau_count == static_cast<int>(sorted.size()) && !sorted.empty()) {
        std::vector<std::pair<double, double>> samples;
        for (Interval J : sorted)
            for (int i = 0; i <= 32; ++i) {
                double xx = J.lo + J.length() * i / 32.0;
                samples.emplace_back(xx, homeo::derivative_k(out.f, xx, k).value);
            }
        out.certificate.check_le("sampled [f]_{k,alpha} vs 2 K0",
                                 modulus::alpha_norm_estimate(samples, alpha),
                                 2 * K0);
    }
    return out;
}

double measure_fast(const Map1D& f, Interval J, const std::vector<double>& grid) {
    if (J.length() <= 0) throw std::invalid_argument("measure_fast: degenerate J");
    double best = 0.0;
    for (double x : grid)
        if (J.contains(x))
            best = std::max(best, std::abs(f.eval(x) - x));
    return best / J.length();
}

double measure_fast(const Map1D& f, Interval J, int grid_points) {
    return measure_fast(f, J, homeo::uniform_grid(J, grid_points));
}

double measure_expansive(const Map1D& f, Interval J, int grid_points) {
    if (J.length() <= 0)
        throw std::invalid_argument("measure_expansive: degenerate J");
    double best = 0.0;
    for (int i = 1; i < grid_points; ++i) {
        double x = J.lo + J.length() * i / grid_points;
        double fx = f.eval(x);
        double lo = std::min(x, fx), hi = std::max(x, fx);
        double d = std::min(lo - J.lo, J.hi - hi);
        if (d <= 0) continue;
        best = std::max(best, (hi - lo) / d);
    }
    return best;
}

KFixedReport k_fixed_and_bounds(const Map1D& f, Interval J, int k,
                                const ConcaveModulus& beta, int grid_points) {
    KFixedReport rep;
    const double root_tol = 1e-11;
    // locate fixed points: endpoint membership + sign changes of f - Id,
    // bracketing across tiny-displacement stretches so that roots landing on
    // grid points are not missed
    std::vector<double> roots;
    auto disp = [&](double x) { return f.eval(x) - x; };
    if (std::abs(disp(J.lo)) <= root_tol) roots.push_back(J.lo);
    double res = J.length() / grid_points;
    int last_sign = 0;
    double last_x = J.lo;
    int zero_run = 0;
    for (int i = 0; i <= grid_points; ++i) {
        double x = J.lo + J.length() * i / grid_points;
        double d = disp(x);
        if (std::abs(d) <= root_tol) {
            ++zero_run;
            if (zero_run >= 3) rep.accumulation_cluster = true; // flat stretch
            continue;
        }
        int sign = d > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            double a = last_x, b = x;
            for (int j = 0; j < 60; ++j) {
                double m = 0.5 * (a + b);
                double dm = disp(m);
                if (std::abs(dm) <= root_tol) {
                    // refine into the exact-zero region from the left
                    b = m;
                } else {
                    ((dm > 0) == (sign > 0) ? b : a) = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        last_sign = sign;
        last_x = x;
        zero_run = 0;
    }
    if (std::abs(disp(J.hi)) <= root_tol) roots.push_back(J.hi);
    // distinct roots (resolution-separated); close pairs flag a cluster
    std::sort(roots.begin(), roots.end());
    int distinct = 0;
    double last = -1e300;
    for (double r : roots) {
        if (r - last > res) {
            ++distinct;
            last = r;
        } else {
            rep.accumulation_cluster = true;
        }
    }
    rep.fixed_points = distinct;
    rep.is_k_fixed = distinct > k || rep.accumulation_cluster;

    // expansivity bounds from sampled derivative data
    Map1D finv = f.inverse();
    double sup_f = 0.0, sup_finv = 0.0;
    std::vector<std::pair<double, double>> sf, sfi;
    const int m = 48;
    for (int i = 0; i <= m; ++i) {
        double x = J.lo + J.length() * i / m;
        double idk = (k == 1) ? 1.0 : 0.0;
        double dk = homeo::derivative_k(f, x, k).value;
        sup_f = std::max(sup_f, std::abs(dk - idk));
        sf.emplace_back(x, dk);
        double y = std::clamp(f.eval(x), J.lo, J.hi);
        double dki = homeo::derivative_k(finv, y, k).value;
        sup_finv = std::max(sup_finv, std::abs(dki - idk));
        sfi.emplace_back(y, dki);
    }
    double Jk1 = std::pow(J.length(), k - 1);
    rep.delta1 = Jk1 * (sup_f + sup_finv);
    rep.delta2 = Jk1 * beta.eval_global(J.length()) *
                 (modulus::alpha_norm_estimate(sf, beta) +
                  modulus::alpha_norm_estimate(sfi, beta));
    return rep;
}

RootPowerResult root_power_expansive(const Map1D& f, Interval J, long N, double delta,
                                     int grid_points, double slack) {
    if (N < 1) throw std::invalid_argument("root_power_expansive: N >= 1");
    RootPowerResult r;
    // measure f^N on the grid
    double bestN = 0.0, best1 = 0.0;
    for (int i = 1; i < grid_points; ++i) {
        double x = J.lo + J.length() * i / grid_points;
        double fx = iterate(f, N, x);
        double f1 = f.eval(x);
        double lo = std::min(x, fx), hi = std::max(x, fx);
        double d = std::min(lo - J.lo, J.hi - hi);
        if (d > 0) bestN = std::max(bestN, (hi - lo) / d);
        lo = std::min(x, f1);
        hi = std::max(x, f1);
        d = std::min(lo - J.lo, J.hi - hi);
        if (d > 0) best1 = std::max(best1, (hi - lo) / d);
    }
    r.measured_power = bestN;
    r.measured_base = best1;
    r.premise_met = bestN >= delta - slack;
    r.threshold = std::log1p(delta) / static_cast<double>(N);
    r.pass = r.premise_met && r.measured_base >= r.threshold - slack;
    return r;
}

std::pair<double, double> upper_density(const std::vector<long>& indices,
                                        long horizon) {
    if (horizon < 1) throw std::invalid_argument("upper_density: horizon >= 1");
    std::vector<long> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    double hi = 0.0, lo = 1.0;
    size_t j = 0;
    long count = 0;
    for (long n = 1; n <= horizon; ++n) {
        while (j < sorted.size() && sorted[j] <= n) {
            if (sorted[j] >= 1) ++count;
            ++j;
        }
        if (n >= horizon / 2) {
            double r = static_cast<double>(count) / static_cast<double>(n);
            hi = std::max(hi, r);
            lo = std::min(lo, r);
        }
    }
    return {hi, lo};
}

ProgressDensityResult progress_density(const std::vector<long>& d) {
    if (d.size() < 2) throw std::invalid_argument("progress_density: short sequence");
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0) throw std::invalid_argument("progress_density: d >= 0");
        if (i && std::abs(d[i] - d[i - 1]) > 1)
            throw std::invalid_argument("progress_density: step |d_{i+1}-d_i| > 1");
    }
    ProgressDensityResult res;
    res.identity_holds = true;
    long run_max = d[0];
    long progress_count = 0;
    long horizon = static_cast<long>(d.size()) - 1;
    for (long n = 1; n <= horizon; ++n) {
        if (d[n] > run_max) {
            run_max = d[n];
            ++progress_count;
        }
        if (progress_count != run_max - d[0]) res.identity_holds = false;
        if (n >= horizon / 2) {
            res.progress_density =
                std::max(res.progress_density,
                         static_cast<double>(progress_count) / n);
            res.max_rate = std::max(
                res.max_rate, static_cast<double>(run_max - d[0]) / n);
        }
    }
    return res;
}

TwoJumpsCertificate two_jumps_witness(const Map1D& f, const Map1D& g,
                                      const std::vector<TwoJumpsTriple>& triples,
                                      double tol) {
    TwoJumpsCertificate cert;
    for (size_t i = 0; i < triples.size(); ++i) {
        auto [s, y, t] = triples[i];
        double fy = f.eval(y), gy = g.eval(y);
        double gs = g.eval(s), ft = f.eval(t);
        bool cfg1 = fy <= s + tol && std::abs(gs - s) <= tol && s < y && y < t &&
                    std::abs(ft - t) <= tol && t <= gy + tol;
        bool cfg2 = gy <= t + tol && std::abs(ft - t) <= tol && t < y && y < s &&
                    std::abs(gs - s) <= tol && s <= fy + tol;
        if (!cfg1 && !cfg2) {
            cert.first_failing = static_cast<int>(i);
            cert.reason = "triple satisfies neither configuration";
            return cert;
        }
        cert.gaps.push_back(std::abs(gy - fy));
    }
    for (size_t i = 1; i < cert.gaps.size(); ++i) {
        if (cert.gaps[i] >= cert.gaps[i - 1]) {
            cert.first_failing = static_cast<int>(i);
            cert.reason = "gaps |g(y)-f(y)| are not decreasing";
            return cert;
        }
    }
    if (cert.gaps.empty()) {
        cert.reason = "no triples supplied";
        return cert;
    }
    cert.valid = true;
    return cert;
}

} // namespace onedyn::expansion
