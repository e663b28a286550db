#pragma once

#include <cstdint>
#include <vector>

#include "onedyn/homeo.hpp"
#include "onedyn/modulus.hpp"
#include "onedyn/report.hpp"

namespace onedyn::expansion {

using homeo::Interval;
using homeo::Map1D;
using modulus::ConcaveModulus;

/// sup over [0,1] of |Phi^(i)|, i <= r (cached per r).
double phi_c_norm(int r);

/// K0(k) = ||Phi||_{C^{k+1}} / D0^{k+1}, D0 = (1 - delta0)/2.
double k0_constant(int k, double delta0);

/// Largest ell of the form 2^-j with ell + K0 alpha(ell) <= 1.
double ell0_threshold(int k, const ConcaveModulus& alpha, double delta0);

struct FastDiffeoParams {
    int k = 1;
    ConcaveModulus alpha = ConcaveModulus::lipschitz();
    double ell = 0.0;
    double delta0 = 0.9;

    double d0() const { return (1.0 - delta0) / 2.0; }
    double delta_step() const; // Delta = delta0 * ell^k * alpha(ell)
    long n0() const;           // ceil(1/(ell^{k-1} alpha(ell)))
    void validate() const;     // hard invariants: delta0 in [9/10,1), Delta < ell
};

struct FastDiffeo {
    Map1D f;                  // Id + g_ell on [0, ell], identity outside support
    FastDiffeoParams params;
    bool monotone_regime = false; // true iff the slope bound certifies f' > 0
    Report certificate;           // construction-time property checks
};

/// The two-ramp plateau map f = Id + g_ell on [0, ell].  Checks at
/// construction: support, exact plateau value, plateau iteration arithmetic,
/// sampled |f' - 1| <= K0 alpha(ell), sampled [f^{(k)}]_alpha <= K0.
FastDiffeo build_fast_diffeo(const FastDiffeoParams& p);

/// Per-interval fast product: intervals of length <= the monotone threshold
/// get affine-transported plateau maps; longer ones get boundary-flattened
/// chart translations tuned so that f^N is delta0-fast for every N >= 1.
/// Sampled global [f]_{k,alpha} is reported against 2 K0.
struct FastChain {
    Map1D f;
    Report certificate;
};
FastChain build_fast_on_chain(int k, const ConcaveModulus& alpha, double delta0,
                              const std::vector<Interval>& intervals);

/// max over grid of |f(x) - x| / |J|: a lower bound for the best delta.
double measure_fast(const Map1D& f, Interval J, const std::vector<double>& grid);
double measure_fast(const Map1D& f, Interval J, int grid_points = 4096);

/// sup over interior grid of |f(x)-x| / d({x, f(x)}, boundary J).
double measure_expansive(const Map1D& f, Interval J, int grid_points = 4096);

struct KFixedReport {
    bool is_k_fixed = false;
    int fixed_points = 0;
    bool accumulation_cluster = false; // >= k+2 roots within resolution
    double delta1 = 0.0;
    double delta2 = 0.0;
};

/// Fixed points by sign-change bracketing + bisection; delta1/delta2 are the
/// expansivity bounds from sampled derivative data.
KFixedReport k_fixed_and_bounds(const Map1D& f, Interval J, int k,
                                const ConcaveModulus& beta, int grid_points = 16384);

struct RootPowerResult {
    bool premise_met = false; // f^N measured delta-expansive
    double measured_power = 0.0;
    double threshold = 0.0;   // log(1+delta)/N
    double measured_base = 0.0;
    bool pass = false;
};

/// If f^N is delta-expansive, f must be (1/N) log(1+delta)-expansive.
RootPowerResult root_power_expansive(const Map1D& f, Interval J, long N, double delta,
                                     int grid_points = 8192, double slack = 1e-6);

/// Finite-horizon upper/lower density estimates of a sorted index set,
/// windowed over [horizon/2, horizon].
std::pair<double, double> upper_density(const std::vector<long>& indices,
                                        long horizon);

struct ProgressDensityResult {
    bool identity_holds = false; // #(P cap [1,n]) == max_{m<=n} d_m for all n
    double progress_density = 0.0; // windowed density of the progress set
    double max_rate = 0.0;         // windowed max of (running max)/n
};

/// For a walk with |d_{i+1} - d_i| <= 1, d >= 0: the progress-set count up to
/// n equals the running maximum (the finite form of the density identity).
ProgressDensityResult progress_density(const std::vector<long>& d);

struct TwoJumpsTriple {
    double s, y, t;
};

struct TwoJumpsCertificate {
    bool valid = false;
    int first_failing = -1; // index of the first failing triple, -1 if none
    std::string reason;
    std::vector<double> gaps; // |g(y_i) - f(y_i)|
};

/// Validates the two-jumps configuration
///   f(y) <= s = g(s) < y < t = f(t) <= g(y)   (or its mirror image)
/// for each triple and that the gaps decrease toward zero.
TwoJumpsCertificate two_jumps_witness(const Map1D& f, const Map1D& g,
                                      const std::vector<TwoJumpsTriple>& triples,
                                      double tol = 1e-9);

} // namespace onedyn::expansion
