#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onedyn/groupword.hpp"
#include "onedyn/homeo.hpp"

namespace onedyn::chains {

using homeo::Interval;
using homeo::Map1D;

struct ChainCheck {
    bool is_chain = false;
    int first_violation = -1; // index j of the first failing consecutive pair
};

/// inf I_j < inf I_{j+1} < sup I_j < sup I_{j+1} for consecutive j.
ChainCheck is_chain(const std::vector<Interval>& intervals);

/// A cover by open intervals together with the covering-length machinery.
class SupportCover {
public:
    explicit SupportCover(std::vector<Interval> intervals);
    /// Union of support components of the given generators.
    static SupportCover from_maps(const std::vector<Map1D>& maps,
                                  int resolution = 4096, double tol = 1e-12);

    const std::vector<Interval>& intervals() const { return ivs_; }
    /// Max number of listed intervals containing a single point (sampled at
    /// interval endpoints, where the multiplicity is attained).
    int intersection_multiplicity() const;

    /// Minimal m with [a,b] covered by m intervals (greedy sweep);
    /// nullopt encodes infinity (frontier stalls).
    std::optional<int> covering_length(Interval target) const;
    std::optional<int> covering_distance(double x, double y) const;
    /// Exhaustive minimum over subsets; oracle for the greedy (small covers).
    std::optional<int> covering_length_bruteforce(Interval target) const;

private:
    std::vector<Interval> ivs_; // sorted by lo
};

struct SyllableSearchResult {
    bool found = false;
    int syllables = 0;
    groupword::GroupWord word;
    long exponent_cap_used = 0;
};

/// Least syllable count of a word moving J off itself (g(J) and J disjoint,
/// tested at the endpoints by monotonicity).  Breadth-first over generator
/// patterns with exponent escalation |n| = 1, 2, 4, ..., exponent_cap.
SyllableSearchResult min_syllable_mover(
    const std::map<std::string, Map1D>& gens, Interval J, int max_syllables,
    long exponent_cap, double tol = 1e-9);

struct ChainGroupResult {
    bool holds = false;
    // per consecutive pair: the sign pattern (e_i, e_{i+1}) achieving
    // f_{i+1}^{e'} ( f_i^{e} (inf J_{i+1}) ) >= sup J_i, or the max value seen
    std::vector<std::pair<int, int>> patterns;
    std::vector<double> best_values;
    int first_failing = -1;
};

/// The chain-group condition for maps f_i supported in J_i.
ChainGroupResult chain_group_condition(const std::vector<Map1D>& maps,
                                       const std::vector<Interval>& intervals,
                                       double tol = 1e-9);

/// Minimal N >= 1 such that replacing every f_i by f_i^N satisfies the chain
/// group condition; nullopt if the cap is exhausted.
std::optional<long> chain_group_stabilization(const std::vector<Map1D>& maps,
                                              const std::vector<Interval>& intervals,
                                              long n_cap, double tol = 1e-9);

} // namespace onedyn::chains
