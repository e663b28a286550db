#pragma once

#include <vector>

#include "onedyn/homeo.hpp"
#include "onedyn/modulus.hpp"
#include "onedyn/report.hpp"
#include "onedyn/rotation.hpp"

namespace onedyn::denjoy {

using homeo::CircleMap;
using modulus::ConcaveModulus;
using rotation::Theta;

/// The truncated wandering-interval scheme: lengths ell_k = 1/v(|k|+K) with
/// v(x) = x^2 alpha(1/x), cutoff K escalated (doubling) until the total is
/// at most 1 and the analytic tail meets the target; positions from the
/// blow-up measure (1 - sum ell) Lebesgue + sum ell Dirac({k theta}).
struct WanderingScheme {
    Theta theta = Theta::golden();
    double K = 2.0;
    long window = 0;               // indices |k| <= window materialized
    std::vector<double> lengths;   // ell_k at slot k + window
    std::vector<double> positions; // x_k at slot k + window
    double sum_lengths = 0.0;      // materialized sum
    double tail_bound = 0.0;       // certified bound for the |k| > W mass

    double ell(long k) const { return lengths[static_cast<size_t>(k + window)]; }
    double x(long k) const { return positions[static_cast<size_t>(k + window)]; }
};

struct LengthsResult {
    double K = 0.0;
    std::vector<double> lengths;
    double tail_bound = 0.0;
    double sum = 0.0;
};

/// Requires the denjoy integrability of alpha (throws otherwise, naming the
/// broken hypothesis).
LengthsResult lengths_from_modulus(const ConcaveModulus& alpha, long window,
                                   double tail_target = 1e-3);

/// x_k = (1 - sum ell) {k theta} + sum of ell_j over {j theta} < {k theta}.
std::vector<double> blowup_positions(const Theta& theta,
                                     const std::vector<double>& lengths,
                                     long window);

WanderingScheme build_scheme(const ConcaveModulus& alpha, const Theta& theta,
                             long window, double tail_target = 1e-3);

struct DenjoyMap {
    CircleMap f;
    WanderingScheme scheme;
    Report certificate; // construction-time hypothesis checks
};

/// The integrated bump construction f = Id + C + B with the Phi'-profile
/// rho; the last index closes the length cycle so the lift is exactly
/// degree one.  Certificates: positivity of g, integral of g = 1, endpoint
/// transport f(J_k) = J_{k+1} on a sample of k.
DenjoyMap build_denjoy(const ConcaveModulus& alpha, const Theta& theta, long window,
                       double tail_target = 1e-3);

struct FundamentalEstimate {
    double sup = 0.0;
    double bound = 0.0; // 64 K
    bool pass = false;
};

/// sup over |k| < W of (1/alpha(ell_k)) |1 - ell_{k+1}/ell_k| against 64 K.
FundamentalEstimate fundamental_estimate(const WanderingScheme& scheme,
                                         const ConcaveModulus& alpha);

struct VerifyOptions {
    long wandering_iters = 1000;
    double eps = 0.1;           // C^1 closeness target
    long endpoint_range = 50;   // f(J_k) = J_{k+1} for |k| <= this
    double endpoint_tol = 1e-9;
    long rotation_n = 100000;
    double rotation_tol = 1e-4; // + 1/n
};

/// Report: C^0/C^1 distance to the rotation, wandering of J_0, endpoint
/// transport, rotation-number estimate, equal-gap residual of the truncated
/// scheme.
Report verify_denjoy(const DenjoyMap& dm, const VerifyOptions& opt = {});

/// Sorted-length successive-ratio diagnostic (lambda_{i+1}/lambda_i).
std::vector<double> sorted_length_ratios(const WanderingScheme& scheme);

} // namespace onedyn::denjoy
