#include "onedyn/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "onedyn/rng.hpp"

namespace onedyn::rotation {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

BigInt isqrt(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    if (n == 0) return 0;
    BigInt x = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(n)) / 2 + 1);
    for (;;) {
        BigInt y = (x + n / x) >> 1;
        if (y >= x) break;
        x = y;
    }
    return x;
}

long double to_ld(const BigInt& n) { return n.convert_to<long double>(); }

} // namespace

Theta Theta::value(double v) {
    Theta t;
    t.quadratic_ = false;
    t.val_ = v;
    return t;
}

Theta Theta::quadratic(long a, long d, long b) {
    if (d <= 0 || b <= 0)
        throw std::invalid_argument("quadratic: need d > 0 and b > 0");
    BigInt D(d), A(a), B(b);
    BigInt s = isqrt(D);
    if (s * s == D) throw std::invalid_argument("quadratic: d is a perfect square");
    // Normalize so that B | D - A^2: scale numerator and denominator by B.
    if ((D - A * A) % B != 0) {
        A = A * B;
        D = D * B * B;
        B = B * B;
    }
    Theta t;
    t.quadratic_ = true;
    t.a_ = A;
    t.d_ = D;
    t.b_ = B;
    t.val_ = (to_ld(A) + sqrtl(to_ld(D))) / to_ld(B);
    return t;
}

Theta Theta::golden() { return quadratic(-1, 5, 2); }

Theta Theta::parse(const std::string& spec) {
    if (spec == "golden") return golden();
    if (spec == "sqrt2m1") return quadratic(-1, 2, 1);
    if (spec.rfind("quad:", 0) == 0) {
        long a, d, b;
        char c1, c2;
        std::istringstream ss(spec.substr(5));
        if (!(ss >> a >> c1 >> d >> c2 >> b) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("theta spec: expected quad:a,d,b");
        return quadratic(a, d, b);
    }
    return value(std::stod(spec));
}

long double Theta::approx() const { return val_; }

std::string Theta::str() const {
    if (!quadratic_) {
        std::ostringstream ss;
        ss << static_cast<double>(val_);
        return ss.str();
    }
    std::ostringstream ss;
    ss << "(" << a_ << "+sqrt(" << d_ << "))/" << b_;
    return ss.str();
}

std::vector<BigInt> Theta::cf_terms(int count) const {
    std::vector<BigInt> out;
    if (count <= 0) return out;
    if (quadratic_) {
        BigInt P = a_, Q = b_, D = d_;
        BigInt s = isqrt(D);
        for (int k = 0; k < count; ++k) {
            BigInt ak = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
            out.push_back(ak);
            BigInt Pn = ak * Q - P;
            BigInt Qn = (D - Pn * Pn) / Q;
            if (Qn == 0) throw std::logic_error("cf_terms: degenerate quadratic");
            P = Pn;
            Q = Qn;
        }
        return out;
    }
    long double x = val_;
    for (int k = 0; k < count; ++k) {
        long double fl = floorl(x);
        out.push_back(BigInt(static_cast<long long>(fl)));
        long double frac = x - fl;
        if (frac < 1e-15L) break; // rational at working precision
        x = 1.0L / frac;
    }
    return out;
}

RotationEstimate rotation_number(const homeo::CircleMap& f, long n, double x0,
                                 double tol) {
    if (n < 1) throw std::invalid_argument("rotation_number: n >= 1");
    double xn = f.iterate_lift(x0, n, tol);
    double v = (xn - x0) / static_cast<double>(n);
    v -= std::floor(v);
    RotationEstimate e;
    e.value = v;
    e.iterations = n;
    e.error_bound = 1.0 / static_cast<double>(n);
    e.basepoint = x0;
    return e;
}

RationalApprox dirichlet_approx(const Theta& theta, long N) {
    if (N < 2) throw std::invalid_argument("dirichlet_approx: N >= 2");
    long double th = theta.approx();
    // S = {0, 1, {k theta} : 1 <= k <= N-1}; track k for each point
    // (k = 0 covers both endpoints 0 and 1).
    struct Pt {
        long double v;
        long k;
    };
    std::vector<Pt> pts;
    pts.push_back({0.0L, 0});
    pts.push_back({1.0L, 0});
    for (long k = 1; k < N; ++k) {
        long double fk = k * th;
        fk -= floorl(fk);
        // rational detection at working precision
        if (fk < 1e-17L || 1.0L - fk < 1e-17L) {
            RationalApprox r;
            r.q = k;
            r.p = BigInt(static_cast<long long>(llroundl(k * th)));
            BigInt g = boost::multiprecision::gcd(r.p, r.q);
            if (g > 1) {
                r.p /= g;
                r.q /= g;
            }
            r.exact_rational = true;
            return r;
        }
        pts.push_back({fk, k});
    }
    // boxes of width 1/N; best collision by |q theta - p|
    std::vector<std::vector<Pt>> boxes(static_cast<size_t>(N));
    for (const auto& p : pts) {
        auto b = static_cast<size_t>(std::min<long double>(N - 1, p.v * N));
        boxes[b].push_back(p);
    }
    bool found = false;
    long best_q = 0;
    long long best_p = 0;
    long double best_err = 0.0L;
    for (auto& box : boxes) {
        for (size_t i = 0; i < box.size(); ++i) {
            for (size_t j = i + 1; j < box.size(); ++j) {
                long q = std::abs(box[i].k - box[j].k);
                if (q == 0) continue;
                long double err = q * th;
                long long p = llroundl(err);
                err = fabsl(err - p);
                if (!found || err < best_err ||
                    (err == best_err && q < best_q)) {
                    found = true;
                    best_q = q;
                    best_p = p;
                    best_err = err;
                }
            }
        }
    }
    if (!found) throw std::logic_error("dirichlet_approx: pigeonhole failed");
    RationalApprox r;
    r.p = best_p;
    r.q = best_q;
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(r.p), r.q);
    if (g > 1) {
        r.p /= g;
        r.q /= g;
    }
    return r;
}

std::vector<Convergent> convergents(const Theta& theta, int count) {
    if (count < 1) throw std::invalid_argument("convergents: count >= 1");
    // generous term budget; integer approximations (q = 1) are skipped
    std::vector<BigInt> terms = theta.cf_terms(count + 4);
    std::vector<Convergent> out;
    BigInt pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1; // p_{-1}=1,p_{-2}=0 convention
    // p_k = a_k p_{k-1} + p_{k-2}; q_k likewise
    BigInt pk, qk;
    for (size_t k = 0; k < terms.size() && out.size() < static_cast<size_t>(count);
         ++k) {
        pk = terms[k] * pm1 + pm2;
        qk = terms[k] * qm1 + qm2;
        pm2 = pm1;
        pm1 = pk;
        qm2 = qm1;
        qm1 = qk;
        if (qk >= 2) out.push_back({pk, qk});
    }
    if (out.size() < static_cast<size_t>(count))
        throw std::runtime_error("convergents: continued fraction terminated "
                                 "(rational at working precision)");
    return out;
}

KoksmaResult denjoy_koksma_check(const homeo::CircleMap& f,
                                 const std::function<double(double)>& phi,
                                 double phi_variation, double phi_integral, long q,
                                 bool q_is_convergent, double x0, double tol) {
    if (q < 1) throw std::invalid_argument("denjoy_koksma_check: q >= 1");
    double acc = 0.0;
    double x = x0;
    double per = tol / static_cast<double>(q);
    for (long k = 0; k < q; ++k) {
        acc += phi(x - std::floor(x));
        x = f.eval_lift(x, per);
    }
    KoksmaResult r;
    r.lhs = std::abs(acc / static_cast<double>(q) - phi_integral);
    r.bound = phi_variation / static_cast<double>(q);
    r.q_is_convergent = q_is_convergent;
    r.pass = r.lhs <= r.bound + 1e-9;
    return r;
}

BirkhoffResult birkhoff_unique_ergodicity(const homeo::CircleMap& f,
                                          const std::function<double(double)>& phi,
                                          long n,
                                          const std::vector<double>& basepoints) {
    if (n < 1 || basepoints.empty())
        throw std::invalid_argument("birkhoff_unique_ergodicity: bad arguments");
    BirkhoffResult res;
    RotationEstimate rot = rotation_number(f, std::min<long>(n, 4096), 0.0);
    // rationality probe: a low-denominator rational within the error bound
    for (long den = 1; den <= 12; ++den) {
        double nearest = std::round(rot.value * den) / den;
        double d = std::abs(rot.value - nearest);
        if (d <= rot.error_bound + 1e-12) res.applicable = false;
    }
    std::vector<double> means;
    means.reserve(basepoints.size());
    for (double b : basepoints) {
        double acc = 0.0, x = b;
        for (long k = 0; k < n; ++k) {
            acc += phi(x - std::floor(x));
            x = f.eval_lift(x, 1e-12);
        }
        means.push_back(acc / static_cast<double>(n));
    }
    double grand = std::accumulate(means.begin(), means.end(), 0.0) /
                   static_cast<double>(means.size());
    for (double m : means)
        res.max_deviation = std::max(res.max_deviation, std::abs(m - grand));
    return res;
}

double EmpiricalMeasure::total_weight() const {
    double s = 0.0;
    for (auto& [x, w] : atoms) s += w;
    return s;
}

void EmpiricalMeasure::normalize() {
    double s = total_weight();
    if (s <= 0) throw std::invalid_argument("EmpiricalMeasure: nonpositive mass");
    for (auto& [x, w] : atoms) w /= s;
}

double EmpiricalMeasure::arc_mass(double x, double y) const {
    auto in_arc = [&](double p) {
        if (x <= y) return p >= x && p < y;
        return p >= x || p < y; // wrap-around
    };
    double s = 0.0;
    for (auto& [p, w] : atoms)
        if (in_arc(p)) s += w;
    return s;
}

double measure_rotation_number(const EmpiricalMeasure& mu, const homeo::CircleMap& f,
                               double x, double tol) {
    double total = mu.total_weight();
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("measure_rotation_number: mu not normalized");
    double fx = f.eval_circle(x, tol);
    double x0 = x - std::floor(x);
    return mu.arc_mass(x0, fx);
}

StationaryResult stationary_measure_mc(const std::vector<homeo::CircleMap>& gens,
                                       const std::vector<double>& probs, int steps,
                                       int samples, std::uint64_t seed, int bins) {
    if (gens.empty() || gens.size() != probs.size())
        throw std::invalid_argument("stationary_measure_mc: bad generators/probs");
    double psum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("stationary_measure_mc: probs must sum to 1");
    for (double p : probs)
        if (p <= 0) throw std::invalid_argument("stationary_measure_mc: probs > 0");

    StationaryResult res;
    res.measure.atoms.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        SplitMix64 rng(SplitMix64::derive(seed, static_cast<std::uint64_t>(s)));
        double x = rng.next_double();
        for (int k = 0; k < steps; ++k) {
            double u = rng.next_double();
            size_t g = 0;
            double acc = probs[0];
            while (u > acc && g + 1 < gens.size()) acc += probs[++g];
            x = gens[g].eval_circle(x, 1e-12);
        }
        res.measure.atoms.emplace_back(x, 1.0 / samples);
    }
    // self-consistency residual on a binned mesh
    res.bins = bins;
    std::vector<double> mu(bins, 0.0), push(bins, 0.0);
    auto bin_of = [&](double x) {
        int b = static_cast<int>(x * bins);
        return std::clamp(b, 0, bins - 1);
    };
    for (auto& [x, w] : res.measure.atoms) {
        mu[bin_of(x)] += w;
        for (size_t g = 0; g < gens.size(); ++g)
            push[bin_of(gens[g].eval_circle(x, 1e-12))] += w * probs[g];
    }
    for (int b = 0; b < bins; ++b)
        res.self_consistency_residual =
            std::max(res.self_consistency_residual, std::abs(mu[b] - push[b]));
    return res;
}

} // namespace onedyn::rotation
