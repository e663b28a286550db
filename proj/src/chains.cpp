#include "onedyn/chains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace onedyn::chains {

ChainCheck is_chain(const std::vector<Interval>& intervals) {
    ChainCheck c;
    for (size_t j = 0; j + 1 < intervals.size(); ++j) {
        const Interval &a = intervals[j], &b = intervals[j + 1];
        if (!(a.lo < b.lo && b.lo < a.hi && a.hi < b.hi)) {
            c.first_violation = static_cast<int>(j);
            return c;
        }
    }
    c.is_chain = true;
    return c;
}

SupportCover::SupportCover(std::vector<Interval> intervals) : ivs_(std::move(intervals)) {
    for (const auto& iv : ivs_)
        if (!(iv.lo < iv.hi))
            throw std::invalid_argument("SupportCover: degenerate interval");
    std::sort(ivs_.begin(), ivs_.end(),
              [](Interval a, Interval b) { return a.lo < b.lo; });
}

SupportCover SupportCover::from_maps(const std::vector<Map1D>& maps, int resolution,
                                     double tol) {
    std::vector<Interval> all;
    for (const auto& m : maps) {
        auto comps = homeo::support_components(m, resolution, tol);
        all.insert(all.end(), comps.begin(), comps.end());
    }
    return SupportCover(std::move(all));
}

int SupportCover::intersection_multiplicity() const {
    int best = 0;
    for (const auto& probe : ivs_) {
        for (double x : {probe.lo + 1e-12, 0.5 * (probe.lo + probe.hi)}) {
            int count = 0;
            for (const auto& iv : ivs_)
                if (iv.lo < x && x < iv.hi) ++count;
            best = std::max(best, count);
        }
    }
    return best;
}

std::optional<int> SupportCover::covering_length(Interval target) const {
    if (target.hi < target.lo) std::swap(target.lo, target.hi);
    // Greedy sweep: among intervals strictly containing the frontier point,
    // take the one with maximal sup; the closed target is covered once the
    // reach strictly exceeds its right endpoint.
    double frontier = target.lo;
    int count = 0;
    for (;;) {
        double best = -1e300;
        bool found = false;
        for (const auto& iv : ivs_) {
            if (iv.lo < frontier && frontier < iv.hi) {
                found = true;
                best = std::max(best, iv.hi);
            }
        }
        if (!found) return std::nullopt;
        ++count;
        if (best > target.hi) return count;
        if (best <= frontier) return std::nullopt; // stalled
        frontier = best;
        if (count > static_cast<int>(ivs_.size())) return std::nullopt;
    }
}

std::optional<int> SupportCover::covering_distance(double x, double y) const {
    return covering_length({std::min(x, y), std::max(x, y)});
}

std::optional<int> SupportCover::covering_length_bruteforce(Interval target) const {
    size_t n = ivs_.size();
    if (n > 20) throw std::invalid_argument("bruteforce: cover too large");
    std::optional<int> best;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        int bits = __builtin_popcount(mask);
        if (best && bits >= *best) continue;
        // does the selected union cover the closed target?
        std::vector<Interval> sel;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sel.push_back(ivs_[i]);
        std::sort(sel.begin(), sel.end(),
                  [](Interval a, Interval b) { return a.lo < b.lo; });
        double reach = target.lo;
        bool started = false;
        for (const auto& iv : sel) {
            if (!started) {
                if (iv.lo < target.lo && target.lo < iv.hi) {
                    started = true;
                    reach = iv.hi;
                }
                continue;
            }
            if (iv.lo < reach && iv.hi > reach) reach = iv.hi;
        }
        if (started && reach > target.hi) best = bits;
    }
    return best;
}

SyllableSearchResult min_syllable_mover(const std::map<std::string, Map1D>& gens,
                                        Interval J, int max_syllables,
                                        long exponent_cap, double tol) {
    SyllableSearchResult res;
    std::vector<std::string> names;
    for (const auto& [n, m] : gens) names.push_back(n);
    std::vector<long> exps;
    for (long e = 1; e <= exponent_cap; e *= 2) {
        exps.push_back(e);
        exps.push_back(-e);
    }
    // patterns of generator names, adjacent distinct
    std::vector<std::vector<int>> patterns = {{}};
    for (int len = 1; len <= max_syllables; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& p : patterns)
            for (int g = 0; g < static_cast<int>(names.size()); ++g) {
                if (!p.empty() && p.back() == g) continue;
                auto q = p;
                q.push_back(g);
                next.push_back(std::move(q));
            }
        patterns = std::move(next);
        for (const auto& p : patterns) {
            // enumerate exponent assignments in escalation order
            std::vector<size_t> idx(p.size(), 0);
            for (;;) {
                groupword::GroupWord w;
                {
                    std::vector<groupword::Syllable> sy;
                    for (size_t i = 0; i < p.size(); ++i)
                        sy.push_back({names[p[i]], exps[idx[i]]});
                    w = groupword::GroupWord(std::move(sy));
                }
                double a = groupword::eval_word(gens, w, J.lo, tol * 1e-2);
                double b = groupword::eval_word(gens, w, J.hi, tol * 1e-2);
                if (a >= J.hi - tol || b <= J.lo + tol) {
                    res.found = true;
                    res.syllables = len;
                    res.word = w;
                    res.exponent_cap_used = exponent_cap;
                    return res;
                }
                // advance the exponent multi-index
                size_t k = 0;
                while (k < idx.size() && ++idx[k] == exps.size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
        }
    }
    res.exponent_cap_used = exponent_cap;
    return res;
}

ChainGroupResult chain_group_condition(const std::vector<Map1D>& maps,
                                       const std::vector<Interval>& intervals,
                                       double tol) {
    if (maps.size() != intervals.size() || maps.size() < 2)
        throw std::invalid_argument("chain_group_condition: need >= 2 maps");
    // support containment: supp f_i inside J_i
    for (size_t i = 0; i < maps.size(); ++i) {
        auto comps = homeo::support_components(maps[i], 2048, 1e-10);
        for (const auto& c : comps)
            if (c.lo < intervals[i].lo - 1e-9 || c.hi > intervals[i].hi + 1e-9)
                throw std::invalid_argument(
                    "chain_group_condition: support escapes its interval");
    }
    ChainGroupResult res;
    res.holds = true;
    for (size_t i = 0; i + 1 < maps.size(); ++i) {
        double z = intervals[i + 1].lo;
        double target = intervals[i].hi;
        bool ok = false;
        double best_val = -1e300;
        std::pair<int, int> best_pat{0, 0};
        for (int e1 : {+1, -1}) {
            for (int e2 : {+1, -1}) {
                double v = homeo::iterate(maps[i], e1, z);
                v = homeo::iterate(maps[i + 1], e2, v);
                if (v > best_val) {
                    best_val = v;
                    best_pat = {e1, e2};
                }
                if (v >= target - tol) ok = true;
            }
        }
        res.patterns.push_back(best_pat);
        res.best_values.push_back(best_val);
        if (!ok && res.first_failing < 0) {
            res.first_failing = static_cast<int>(i);
            res.holds = false;
        }
    }
    return res;
}

std::optional<long> chain_group_stabilization(const std::vector<Map1D>& maps,
                                              const std::vector<Interval>& intervals,
                                              long n_cap, double tol) {
    for (long N = 1; N <= n_cap; ++N) {
        bool all = true;
        for (size_t i = 0; i + 1 < maps.size() && all; ++i) {
            double z = intervals[i + 1].lo;
            double target = intervals[i].hi;
            bool ok = false;
            for (int e1 : {+1, -1})
                for (int e2 : {+1, -1}) {
                    double v = homeo::iterate(maps[i], e1 * N, z);
                    v = homeo::iterate(maps[i + 1], e2 * N, v);
                    if (v >= target - tol) ok = true;
                }
            all = ok;
        }
        if (all) return N;
    }
    return std::nullopt;
}

} // namespace onedyn::chains
