#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "onedyn/dyadic.hpp"
#include "onedyn/homeo.hpp"

namespace onedyn::rotation {

using dyadic::BigInt;

/// An angle, either a plain floating value or a tagged quadratic irrational
/// (a + sqrt(d))/b enabling exact continued fractions.  Approximations are
/// served in 80-bit extended precision.
class Theta {
public:
    static Theta value(double v);
    static Theta quadratic(long a, long d, long b);
    static Theta golden();  // (sqrt(5) - 1)/2
    /// "golden", "sqrt2m1", "quad:a,d,b", or a decimal literal.
    static Theta parse(const std::string& spec);

    long double approx() const;
    bool is_quadratic() const { return quadratic_; }
    /// Continued fraction terms a_0, a_1, ... (exact in the quadratic case).
    std::vector<BigInt> cf_terms(int count) const;
    std::string str() const;

private:
    bool quadratic_ = false;
    long double val_ = 0.0L;
    BigInt a_, d_, b_; // (a + sqrt(d))/b with b | d - a^2 after normalization
};

struct RotationEstimate {
    double value = 0.0;      // mod 1
    long iterations = 0;
    double error_bound = 0.0; // = 1/n, from the defect-1 bound on the cocycle
    double basepoint = 0.0;
};

/// frac((F^n(x0) - x0)/n) with the a-priori bound |estimate - rot(f)| <= 1/n.
RotationEstimate rotation_number(const homeo::CircleMap& f, long n, double x0 = 0.0,
                                 double tol = 1e-12);

struct RationalApprox {
    BigInt p, q;
    bool exact_rational = false; // theta detected rational at working precision
};

/// Pigeonhole scan: p, q coprime, 1 <= q < N, |q theta - p| < 1/N.
/// Among colliding pairs the one minimizing |q theta - p| is returned.
RationalApprox dirichlet_approx(const Theta& theta, long N);

struct Convergent {
    BigInt p, q;
};

/// Continued-fraction convergents p/q with q >= 2 onward (integer
/// approximations omitted); each satisfies |theta - p/q| < 1/q^2.
std::vector<Convergent> convergents(const Theta& theta, int count);

struct KoksmaResult {
    double lhs = 0.0;     // |(1/q) sum phi(f^k x) - int phi dmu|
    double bound = 0.0;   // Var(phi)/q
    bool pass = false;
    bool q_is_convergent = true; // else the inequality is not guaranteed
};

/// Denjoy-Koksma test for a BV observable with known variation and known
/// invariant integral (for rotations: the Lebesgue integral).
KoksmaResult denjoy_koksma_check(const homeo::CircleMap& f,
                                 const std::function<double(double)>& phi,
                                 double phi_variation, double phi_integral, long q,
                                 bool q_is_convergent, double x0 = 0.0,
                                 double tol = 1e-12);

struct BirkhoffResult {
    double max_deviation = 0.0;
    bool applicable = true; // false when rot(f) looks rational
};

/// Max over basepoints of |(1/n) sum phi o f^k  -  mean over basepoints|.
BirkhoffResult birkhoff_unique_ergodicity(const homeo::CircleMap& f,
                                          const std::function<double(double)>& phi,
                                          long n, const std::vector<double>& basepoints);

struct EmpiricalMeasure {
    std::vector<std::pair<double, double>> atoms; // (point in [0,1), weight)
    double total_weight() const;
    void normalize();
    /// mu[x, y) as an arc of the circle traversed positively.
    double arc_mass(double x, double y) const;
};

/// rho_mu(f) = mu[x, f(x)) mod 1.
double measure_rotation_number(const EmpiricalMeasure& mu, const homeo::CircleMap& f,
                               double x, double tol = 1e-12);

struct StationaryResult {
    EmpiricalMeasure measure;
    double self_consistency_residual = 0.0; // sup over bins |P*mu - mu|
    int bins = 0;
};

/// Monte-Carlo stationary measure for a finite random walk on generators;
/// deterministic for a fixed seed (per-sample derived streams).
StationaryResult stationary_measure_mc(const std::vector<homeo::CircleMap>& gens,
                                       const std::vector<double>& probs, int steps,
                                       int samples, std::uint64_t seed,
                                       int bins = 64);

} // namespace onedyn::rotation
