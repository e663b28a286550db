#pragma once

#include <map>
#include <string>
#include <vector>

#include "onedyn/chains.hpp"
#include "onedyn/groupword.hpp"
#include "onedyn/homeo.hpp"
#include "onedyn/modulus.hpp"
#include "onedyn/report.hpp"

namespace onedyn::optgroup {

using homeo::Interval;
using homeo::Map1D;
using modulus::ConcaveModulus;

/// A summable positive length sequence with ratio bounds ("admissible").
class AdmissibleLengths {
public:
    /// ell_i = 1/((i+1) log^2(i+1)), i >= 1.
    static AdmissibleLengths inv_log_sq();
    /// ell_i = r^i for r in (0,1).
    static AdmissibleLengths geometric(double r);
    static AdmissibleLengths custom(std::vector<double> values);
    static AdmissibleLengths parse_spec(const std::string& spec); // "invlogsq", ...

    double operator()(long i) const; // i >= 1
    /// Certified bound for sum_{i > window} ell_i (0 for custom, flagged).
    double tail_bound(long window) const;
    bool has_closed_tail() const;
    std::string name() const { return name_; }

    struct CheckResult {
        double partial_sum = 0.0;
        double tail = 0.0;
        double ratio_inf = 0.0, ratio_sup = 0.0;
        bool summable = false;
        bool ratios_bounded = false;
        bool admissible = false;
    };
    CheckResult admissible_check(long window) const;

private:
    enum class Kind { InvLogSq, Geometric, Custom } kind_ = Kind::InvLogSq;
    double r_ = 0.5;
    std::vector<double> values_;
    std::string name_;
};

struct Constants {
    double c1 = 0.0, c2 = 0.0;   // ratio bounds: c1 <= ell_{i+1}/ell_i <= c2
    double kappa = 0.0;          // overlap fraction
    double delta0 = 0.9;
    std::string binding;         // which constraint bound kappa
};

/// c1, c2 from window ratios (+ tail justification where closed-form),
/// kappa = min(1/(1+c2), 1/ell_1)/2, delta0 = max(9/10, 1 - c1 kappa/(2(1+c1))).
Constants derive_constants(const AdmissibleLengths& ell, long window);

/// N_i = ceil(1 / (ell_i^{k-1} alpha(ell_i))).
long n_steps(const AdmissibleLengths& ell, long i, int k, const ConcaveModulus& alpha);

/// The interval family F: J_{-3..3} with J_i = (i - 3/4, i + 3/4), then
/// L_1, L_2, ... with |J_3 cap L_1| = kappa ell_1, |L_i cap L_{i+1}| =
/// kappa ell_{i+1}, and L_{-i} the mirror image.
class ChainConfiguration {
public:
    ChainConfiguration(const AdmissibleLengths& ell, long window, Constants consts);

    Interval J(int i) const;       // |i| <= 3
    Interval L(long i) const;      // 1 <= |i| <= window
    long window() const { return window_; }
    const Constants& constants() const { return consts_; }
    Interval hull() const;         // closure of the union
    /// The ordered family ..., L_{-1}, J_{-3}, ..., J_3, L_1, ... as a list.
    std::vector<Interval> family() const;
    chains::ChainCheck chain_check() const;

private:
    long window_;
    Constants consts_;
    std::vector<Interval> L_pos_; // L_1..L_W
};

struct OptAction {
    std::map<std::string, Map1D> gens; // a, b, c, d, e on the hull
    ChainConfiguration config;
    int k = 1;
    ConcaveModulus alpha = ConcaveModulus::lipschitz();
    AdmissibleLengths lengths = AdmissibleLengths::inv_log_sq();
    groupword::GroupWord u0;
    double marker_start = 0.0, marker_end = 0.0; // J0 ping-pong witness
    Report certificate;
};

/// Assembles the action: fast movers for a (odd L's) and b (even L's + the
/// J_1 bump), chain movers c, d on J_2, J_3, the BS(1,2)-with-center block
/// action inside J_0 carrying a, c, d, e, and mirrored negative parts.
/// Construction-time certificates (fastness, two-chain condition, ping-pong
/// witness, mirror symmetry) are collected; any failure throws.
OptAction build_action(int k, const ConcaveModulus& alpha,
                       const AdmissibleLengths& ell, long window);

struct SlowProgressRow {
    long i = 0;
    long n_i = 0;
    double s_next = 0.0;
    bool in_overlap = false; // s_{i+1} in L_i cap L_{i+1}
    bool ledger_ok = false;  // s_i - inf L_i in ((1-delta0) ell_i, kappa ell_i)
    int cd = 0;              // CD(s_1, s_{i+1})
};

struct SlowProgressResult {
    std::vector<SlowProgressRow> rows;
    double realized_rate = 0.0; // min over the run tail of CD/i
    double ceiling = 0.0;       // 1 - 1/(4k+2)
    bool separation = false;    // realized_rate > ceiling
    Report certificate;
};

/// Runs the orbit s_{i+1} = phi(v_i)^{N_i}(s_i), v odd = a, v even = b,
/// with membership, jump-ledger and covering-distance checks per step.
SlowProgressResult slow_progress_experiment(const OptAction& action, long i_max,
                                            double s1 = -1.0);

/// Heuristic word search driving a subinterval into L_1 cap J_3 (expansion
/// property proxy); reports syllables used or a cap miss.
struct ExpandSearchResult {
    bool reached = false;
    int syllables_used = 0;
    groupword::GroupWord word;
};
ExpandSearchResult expand_search(const OptAction& action, Interval U,
                                 int syllable_cap = 40);

} // namespace onedyn::optgroup
