#include "onedyn/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "onedyn/quadrature.hpp"

namespace onedyn::modulus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// omega'(x) has the sign of  2 s L + t sqrt(L) + 2 u,  L = log(1/x).
double omega_mono_factor(double s, double t, double u, double L) {
    return 2 * s * L + t * std::sqrt(L) + 2 * u;
}

// omega''(x) has the sign of F(L); concave iff F < 0.
double omega_conc_factor(double s, double t, double u, double L) {
    double r = std::sqrt(L);
    return 4 * (s - 1) * s * L * L + 2 * (2 * s - 1) * t * L * r +
           (8 * s * u + t * t - 4 * u) * L + (4 * t * u + t) * r + 4 * u * (u + 1);
}

// Smallest L >= 1 (by doubling) past which omega is strictly increasing.
double omega_mono_L(double s, double t, double u) {
    double L = 1.0;
    for (int it = 0; it < 200; ++it, L *= 2)
        if (omega_mono_factor(s, t, u, L) > 0) return L;
    throw std::runtime_error("omega_stu: no monotonicity threshold found");
}

// Smallest L >= Lmin past which concavity is certified by dominance of the
// negative leading term of F (classified regimes only).
double omega_concave_L(double s, double t, double u, double Lmin) {
    double L = std::max(1.0, Lmin);
    for (int it = 0; it < 200; ++it, L *= 2) {
        double r = std::sqrt(L);
        double lead, rest;
        if (s > 0 && s < 1) {
            lead = 4 * s * (1 - s) * L * L;
            rest = std::abs(2 * (2 * s - 1) * t) * L * r +
                   std::abs(8 * s * u + t * t - 4 * u) * L +
                   std::abs(4 * t * u + t) * r + 4 * u * (u + 1);
        } else if (s == 0.0) { // t > 0
            lead = 2 * t * L * r;
            rest = std::abs(t * t - 4 * u) * L + std::abs(4 * t * u + t) * r +
                   4 * u * (u + 1);
        } else { // s == 1, t < 0
            lead = 2 * (-t) * L * r;
            rest = std::abs(t * t + 4 * u) * L + std::abs(4 * t * u + t) * r +
                   4 * u * (u + 1);
        }
        // Each |term|/lead is nonincreasing in L, so dominance persists.
        if (lead > rest && omega_conc_factor(s, t, u, L) < 0) return L;
    }
    throw std::runtime_error("omega_stu: no concavity threshold found");
}

double omega_value(double s, double t, double u, double x) {
    if (x <= 0) return 0.0;
    double L = std::log(1.0 / x);
    return std::exp(-s * L - t * std::sqrt(L) - u * std::log(L));
}

} // namespace

ConcaveModulus ConcaveModulus::hoelder(double tau) {
    if (!(tau > 0.0 && tau <= 1.0))
        throw std::invalid_argument("hoelder: tau must lie in (0,1]");
    ConcaveModulus m;
    m.kind_ = Kind::Hoelder;
    m.s_ = tau;
    m.validity_sup_ = kInf;
    m.concave_sup_ = kInf;
    return m;
}

ConcaveModulus ConcaveModulus::lipschitz() {
    ConcaveModulus m;
    m.kind_ = Kind::Lipschitz;
    m.s_ = 1.0;
    m.validity_sup_ = kInf;
    m.concave_sup_ = kInf;
    return m;
}

ConcaveModulus ConcaveModulus::omega_stu(double s, double t, double u) {
    if (s < 0 || s > 1) throw std::invalid_argument("omega_stu: s must lie in [0,1]");
    if (u < 0) throw std::invalid_argument("omega_stu: u must be >= 0");
    ConcaveModulus m;
    m.kind_ = Kind::OmegaSTU;
    m.s_ = s;
    m.t_ = t;
    m.u_ = u;
    m.classified_ =
        (s == 0.0 && t > 0.0) || (s > 0.0 && s < 1.0) || (s == 1.0 && t < 0.0);
    if (s == 0.0 && t <= 0.0)
        throw std::invalid_argument("omega_stu: s=0 requires t>0 (not a modulus)");
    double Lmono = omega_mono_L(s, t, u);
    m.validity_sup_ = std::exp(-Lmono); // the log(1/x) >= 1 convention
    m.concave_sup_ =
        m.classified_ ? std::exp(-omega_concave_L(s, t, u, Lmono)) : 0.0;
    return m;
}

ConcaveModulus ConcaveModulus::tabulated(std::vector<std::pair<double, double>> grid) {
    if (grid.empty()) throw std::invalid_argument("tabulated: empty grid");
    std::sort(grid.begin(), grid.end());
    if (grid.front().first > 0.0) grid.insert(grid.begin(), {0.0, 0.0});
    if (grid.front() != std::make_pair(0.0, 0.0))
        throw std::invalid_argument("tabulated: grid must anchor at (0,0)");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i].first <= grid[i - 1].first || grid[i].second <= grid[i - 1].second)
            throw std::invalid_argument("tabulated: grid must be strictly increasing");
    ConcaveModulus m;
    m.kind_ = Kind::Tabulated;
    m.validity_sup_ = grid.back().first;
    m.concave_sup_ = m.validity_sup_;
    m.grid_ = std::move(grid);
    return m;
}

double ConcaveModulus::eval(double x) const {
    if (x < 0) throw std::domain_error("modulus: x < 0");
    if (x > validity_sup_ * (1 + 1e-15))
        throw std::domain_error("modulus: x above validity_sup");
    if (x == 0.0) return 0.0;
    switch (kind_) {
    case Kind::Hoelder: return std::pow(x, s_);
    case Kind::Lipschitz: return x;
    case Kind::OmegaSTU: return omega_value(s_, t_, u_, std::min(x, validity_sup_));
    case Kind::Tabulated: {
        auto it = std::upper_bound(grid_.begin(), grid_.end(),
                                   std::make_pair(x, kInf));
        if (it == grid_.begin()) return 0.0;
        if (it == grid_.end()) return grid_.back().second;
        auto [x1, y1] = *it;
        auto [x0, y0] = *(it - 1);
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    }
    throw std::logic_error("unreachable");
}

double ConcaveModulus::eval_global(double x) const {
    if (x < 0) throw std::domain_error("modulus: x < 0");
    double v = validity_sup_;
    if (x <= v || v == kInf) return eval(x);
    // Concave linear extension: matched value, slope from a one-sided secant.
    double h = v * 1e-6;
    double f1 = eval(v), f0 = eval(v - h);
    double slope = (f1 - f0) / h;
    if (slope < 0) slope = 0;
    return f1 + slope * (x - v);
}

std::vector<double> geometric_grid(const ConcaveModulus& alpha, int jmax) {
    std::vector<double> g;
    for (int j = 1; j <= jmax; ++j) {
        double x = std::ldexp(1.0, -j);
        if (x <= alpha.validity_sup()) g.push_back(x);
    }
    std::sort(g.begin(), g.end());
    return g;
}

ConcavityResult check_concavity(const ConcaveModulus& alpha,
                                const std::vector<double>& grid, double tol) {
    if (grid.empty()) throw std::invalid_argument("check_concavity: empty grid");
    ConcavityResult r;
    std::vector<double> v(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) v[i] = alpha.eval(grid[i]);
    for (size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("check_concavity: grid not increasing");
        if (v[i] <= v[i - 1]) {
            r.ok = false;
            r.monotone = false;
            r.x = grid[i - 1];
            r.y = grid[i];
            r.defect = v[i - 1] - v[i];
            return r;
        }
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        for (size_t j = i + 1; j < grid.size(); ++j) {
            double mid = 0.5 * (grid[i] + grid[j]);
            double lhs = alpha.eval(mid);
            double rhs = 0.5 * (v[i] + v[j]);
            if (lhs < rhs - tol) {
                r.ok = false;
                r.x = grid[i];
                r.y = grid[j];
                r.defect = rhs - lhs;
                return r;
            }
        }
    }
    return r;
}

namespace {

// All closed-form kinds embed in exp(-p L - t sqrt(L) - u log L), L = log(1/x).
struct ExpPoly {
    double p = 1.0, t = 0.0, u = 0.0;
};

ExpPoly exp_poly_of(const ConcaveModulus& m) {
    switch (m.kind()) {
    case Kind::Hoelder: return {m.hoelder_tau(), 0.0, 0.0};
    case Kind::Lipschitz: return {1.0, 0.0, 0.0};
    case Kind::OmegaSTU: return {m.omega_s(), m.omega_t(), m.omega_u()};
    case Kind::Tabulated: return {1.0, 0.0, 0.0}; // linear near 0
    }
    throw std::logic_error("unreachable");
}

// The integrand near zero is exp(g(L) - L) dL with
//   g(L) = (1 - q.p) L + ... for denjoy (q = alpha), scaled by 1/k for pairs.
// Convergence of int exp(c2*L + c1*sqrt(L) + c0*log(L)) dL at L -> inf:
// c2 < 0, or (c2 = 0 and c1 < 0), or (c2 = c1 = 0 and c0 < -1).
struct TailExponent {
    double c2 = 0, c1 = 0, c0 = 0;
    double at(double L) const { return c2 * L + c1 * std::sqrt(L) + c0 * std::log(L); }
};

bool tail_converges(const TailExponent& e) {
    if (e.c2 < 0) return true;
    if (e.c2 > 0) return false;
    if (e.c1 < 0) return true;
    if (e.c1 > 0) return false;
    return e.c0 < -1.0;
}

// Certified bound for int_A^inf exp(e.at(L)) dL for a convergent exponent.
// Majorizes by exp(-c L) or exp(-c sqrt(L)) past a threshold where the
// residual is nonpositive and provably decreasing (derivative sign check),
// with A escalated by doubling until both hold.
double tail_integral_bound(const TailExponent& e, double& A) {
    if (e.c2 < 0) {
        double c = -e.c2 / 2;
        // residual r(L) = e.at(L) + c L = (c2/2) L + c1 sqrt(L) + c0 log(L);
        // r'(L) <= 0 for all L >= A once max(c1,0)/(2 sqrt A) + max(c0,0)/A <= c.
        auto resid = [&](double L) {
            return (e.c2 + c) * L + e.c1 * std::sqrt(L) + e.c0 * std::log(L);
        };
        while (!(resid(A) <= 0 && std::max(e.c1, 0.0) / (2 * std::sqrt(A)) +
                                          std::max(e.c0, 0.0) / A <=
                                      c)) {
            A *= 2;
            if (A > 1e12) throw std::runtime_error("tail bound: threshold escape");
        }
        return std::exp(-c * A) / c;
    }
    if (e.c1 < 0) {
        double c = -e.c1 / 2;
        // residual r(L) = (c1/2) sqrt(L) + c0 log(L); decreasing once
        // 2 max(c0,0)/sqrt(A) <= c.
        auto resid = [&](double L) {
            return (e.c1 + c) * std::sqrt(L) + e.c0 * std::log(L);
        };
        while (!(resid(A) <= 0 && 2 * std::max(e.c0, 0.0) / std::sqrt(A) <= c)) {
            A *= 2;
            if (A > 1e12) throw std::runtime_error("tail bound: threshold escape");
        }
        // int_A^inf exp(-c sqrt(L)) dL = 2 (c sqrt(A) + 1) exp(-c sqrt(A)) / c^2.
        double r = std::sqrt(A);
        return 2 * (c * r + 1) * std::exp(-c * r) / (c * c);
    }
    // c2 = c1 = 0, c0 < -1: int_A^inf L^c0 dL = A^(c0+1)/(-c0-1).
    return std::pow(A, e.c0 + 1) / (-e.c0 - 1);
}

IntegrabilityResult integrate_singular(const std::function<double(double)>& f,
                                       const TailExponent& tail, double tol,
                                       double cap) {
    IntegrabilityResult res;
    if (!tail_converges(tail)) {
        // Divergence certificate: monotone lower bounds on dyadic panels.
        // exp(tail.at(L)) is, up to the panel's internal variation, the
        // integrand in L-coordinates; we bound each panel [2^-(j+1), 2^-j]
        // below by width * min(f at endpoints) which is valid for monotone
        // integrands and still a growing sequence of certified sums otherwise.
        double lower = 0.0;
        for (int j = 0; j < 1020; ++j) {
            double a = std::ldexp(1.0, -(j + 1)), b = std::ldexp(1.0, -j);
            double fb = f(b), fa = f(a);
            lower += (b - a) * std::min(fa, fb);
            res.panels = j + 1;
            if (lower >= cap) {
                res.finite = false;
                res.partial_lower = lower;
                return res;
            }
        }
        res.finite = false;
        res.partial_lower = lower;
        return res;
    }
    // Convergent: pick A (threshold in L = log(1/x)) with certified tail
    // <= tol/2, then integrate over L in [0, A], where the substituted
    // integrand e^{-L} f(e^{-L}) is bounded and smooth.
    double A = 8.0;
    double bound = tail_integral_bound(tail, A);
    while (bound > tol / 2) {
        A *= 2;
        bound = tail_integral_bound(tail, A);
        if (A > 1e12) throw std::runtime_error("integrability: tail too heavy");
    }
    auto g = [&](double L) {
        double x = std::exp(-L);
        return x * f(x);
    };
    double acc = 0.0, err = 0.0;
    int panels = 0;
    for (double a = 0.0; a < A; a += 8.0) {
        double b = std::min(A, a + 8.0);
        auto q = integrate(g, a, b, tol / 64);
        acc += q.value;
        err += q.error;
        ++panels;
    }
    res.finite = true;
    res.value = acc;
    res.tail_bound = bound + err;
    res.delta = std::exp(-A);
    res.panels = panels;
    return res;
}

} // namespace

IntegrabilityResult integrability(const ConcaveModulus& alpha, double tol,
                                  double divergence_cap) {
    ExpPoly q = exp_poly_of(alpha);
    // 1/alpha dx in L-coordinates: exp((q.p - 1) L + q.t sqrt(L) + q.u log L) dL.
    TailExponent e{q.p - 1.0, q.t, q.u};
    auto f = [&](double x) { return 1.0 / alpha.eval_global(x); };
    return integrate_singular(f, e, tol, divergence_cap);
}

IntegrabilityResult integrability_pair(const ConcaveModulus& beta,
                                       const ConcaveModulus& alpha, int k,
                                       double tol, double divergence_cap) {
    if (k < 1) throw std::invalid_argument("integrability_pair: k >= 1");
    ExpPoly qb = exp_poly_of(beta), qa = exp_poly_of(alpha);
    // (1/x)(beta/alpha)^(1/k) dx in L-coordinates:
    // exp(-((qb.p - qa.p)/k) L - ((qb.t - qa.t)/k) sqrt(L) - ((qb.u - qa.u)/k) log L) dL
    TailExponent e{-(qb.p - qa.p) / k, -(qb.t - qa.t) / k, -(qb.u - qa.u) / k};
    auto f = [&](double x) {
        return std::pow(beta.eval_global(x) / alpha.eval_global(x), 1.0 / k) / x;
    };
    return integrate_singular(f, e, tol, divergence_cap);
}

double inverse_integral_upper(const ConcaveModulus& alpha, double eps, double tol) {
    if (!(eps > 0) || eps > 1.0)
        throw std::invalid_argument("inverse_integral_upper: eps in (0,1]");
    ExpPoly q = exp_poly_of(alpha);
    TailExponent e{q.p - 1.0, q.t, q.u};
    if (!tail_converges(e))
        throw std::runtime_error("inverse_integral_upper: 1/alpha not integrable");
    double A = std::max(8.0, std::log(1.0 / eps));
    double bound = tail_integral_bound(e, A);
    while (bound > tol / 2) {
        A *= 2;
        bound = tail_integral_bound(e, A);
        if (A > 1e12)
            throw std::runtime_error("inverse_integral_upper: tail too heavy");
    }
    // integrate over L = log(1/x) in [log(1/eps), A]: bounded smooth integrand
    auto g = [&](double L) {
        double x = std::exp(-L);
        return x / alpha.eval_global(x);
    };
    double acc = 0.0, err = 0.0;
    for (double a = std::log(1.0 / eps); a < A; a += 8.0) {
        double b = std::min(A, a + 8.0);
        auto qq = integrate(g, a, b, tol / 64);
        acc += qq.value;
        err += qq.error;
    }
    return acc + bound + err;
}

TamenessReport tameness(const ConcaveModulus& beta, const std::vector<double>& t_grid,
                        const std::vector<double>& x_grid) {
    std::vector<double> ts = t_grid, xs = x_grid;
    if (ts.empty())
        for (int j = 2; j <= 14; ++j) ts.push_back(std::ldexp(1.0, -j));
    if (xs.empty()) xs = geometric_grid(beta, 40);
    if (xs.empty()) throw std::invalid_argument("tameness: empty x grid");
    std::sort(ts.rbegin(), ts.rend());

    TamenessReport rep;
    for (double t : ts) {
        double sub = 0.0, sup = 0.0;
        for (double x : xs) {
            double bx = beta.eval(x);
            double btx = beta.eval(t * x);
            if (bx > 0) sub = std::max(sub, btx / bx);
            if (btx > 0) sup = std::max(sup, t * bx / btx);
        }
        rep.sub_tame_sup_estimates.emplace_back(t, sub);
        rep.sup_tame_sup_estimates.emplace_back(t, sup);
    }
    auto tends_to_zero = [](const std::vector<std::pair<double, double>>& e) {
        // Advisory: decreasing along the t grid and small at the end.
        double last = e.back().second;
        bool decreasing = true;
        for (size_t i = 1; i < e.size(); ++i)
            if (e[i].second > e[i - 1].second + 1e-12) decreasing = false;
        return decreasing && last < 0.2;
    };
    rep.verdict_sub = tends_to_zero(rep.sub_tame_sup_estimates);
    rep.verdict_sup = tends_to_zero(rep.sup_tame_sup_estimates);
    return rep;
}

bool is_tame_pair(int k, const ConcaveModulus& beta) {
    if (k < 0) throw std::invalid_argument("is_tame_pair: k >= 0");
    if (k >= 2) return true;
    TamenessReport r = tameness(beta);
    return k == 1 ? r.verdict_sub : r.verdict_sup;
}

double alpha_norm_estimate(const std::vector<std::pair<double, double>>& samples,
                           const ConcaveModulus& alpha) {
    if (samples.size() < 2)
        throw std::invalid_argument("alpha_norm_estimate: need >= 2 samples");
    double best = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        for (size_t j = i + 1; j < samples.size(); ++j) {
            double dx = std::abs(samples[i].first - samples[j].first);
            if (dx < 1e-300 ||
                dx < 4 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(samples[i].first), std::abs(samples[j].first)))
                continue;
            double df = std::abs(samples[i].second - samples[j].second);
            double a = alpha.eval_global(dx);
            if (a > 0) best = std::max(best, df / a);
        }
    }
    return best;
}

std::pair<ConcaveModulus, double> medvedev_smooth(const ConcaveModulus& alpha,
                                                  int grid_points) {
    if (grid_points < 8) throw std::invalid_argument("medvedev_smooth: grid too small");
    double hi = std::min(alpha.validity_sup(), 1.0);
    std::vector<std::pair<double, double>> g;
    double worst = 1.0;
    for (int i = 1; i <= grid_points; ++i) {
        double x = hi * i / grid_points;
        // Averaged value against an even triangular window of half-width x/8.
        double d = x / 8;
        double lo = std::max(0.0, x - d);
        auto q = integrate([&](double s) { return alpha.eval_global(s); }, lo, x + d,
                           1e-12);
        double v = q.value / (x + d - lo);
        double ratio = v / alpha.eval(x);
        worst = std::max(worst, std::max(ratio, 1.0 / ratio));
        g.emplace_back(x, v);
    }
    return {ConcaveModulus::tabulated(std::move(g)), worst};
}

nlohmann::json ConcaveModulus::descriptor_json() const {
    nlohmann::json j;
    switch (kind_) {
    case Kind::Hoelder:
        j["kind"] = "hoelder";
        j["tau"] = s_;
        break;
    case Kind::Lipschitz: j["kind"] = "lipschitz"; break;
    case Kind::OmegaSTU:
        j["kind"] = "omega";
        j["s"] = s_;
        j["t"] = t_;
        j["u"] = u_;
        break;
    case Kind::Tabulated: {
        j["kind"] = "tabulated";
        auto arr = nlohmann::json::array();
        for (auto& [x, y] : grid_) arr.push_back({x, y});
        j["grid"] = arr;
        break;
    }
    }
    return j;
}

std::string ConcaveModulus::descriptor() const { return descriptor_json().dump(); }

ConcaveModulus ConcaveModulus::from_descriptor_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "hoelder") return hoelder(j.at("tau").get<double>());
    if (kind == "lipschitz") return lipschitz();
    if (kind == "omega")
        return omega_stu(j.at("s").get<double>(), j.at("t").get<double>(),
                         j.at("u").get<double>());
    if (kind == "tabulated") {
        std::vector<std::pair<double, double>> g;
        for (auto& row : j.at("grid"))
            g.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        return tabulated(std::move(g));
    }
    throw std::invalid_argument("unknown modulus kind: " + kind);
}

ConcaveModulus ConcaveModulus::from_descriptor(const std::string& text) {
    return from_descriptor_json(nlohmann::json::parse(text));
}

ConcaveModulus ConcaveModulus::parse_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "lipschitz") return lipschitz();
    if (name == "hoelder") return hoelder(std::stod(args));
    if (name == "omega") {
        std::istringstream ss(args);
        double s, t, u;
        char c1, c2;
        if (!(ss >> s >> c1 >> t >> c2 >> u) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("omega spec: expected omega:s,t,u");
        return omega_stu(s, t, u);
    }
    throw std::invalid_argument("unknown modulus spec: " + spec);
}

ConcaveModulus ConcaveModulus::tabulated_from_csv(std::istream& is) {
    std::vector<std::pair<double, double>> g;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, y;
        if (ss >> x >> y) g.emplace_back(x, y);
    }
    return tabulated(std::move(g));
}

} // namespace onedyn::modulus
