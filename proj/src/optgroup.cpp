#include "onedyn/optgroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "onedyn/expansion.hpp"

namespace onedyn::optgroup {

using groupword::GroupWord;
using groupword::Syllable;

// ---------------------------------------------------------------------------
// Lengths
// ---------------------------------------------------------------------------

AdmissibleLengths AdmissibleLengths::inv_log_sq() {
    AdmissibleLengths a;
    a.kind_ = Kind::InvLogSq;
    a.name_ = "invlogsq";
    return a;
}

AdmissibleLengths AdmissibleLengths::geometric(double r) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("geometric: r in (0,1)");
    AdmissibleLengths a;
    a.kind_ = Kind::Geometric;
    a.r_ = r;
    a.name_ = "geometric";
    return a;
}

AdmissibleLengths AdmissibleLengths::custom(std::vector<double> values) {
    for (double v : values)
        if (!(v > 0)) throw std::invalid_argument("custom lengths must be positive");
    if (values.empty()) throw std::invalid_argument("custom lengths: empty");
    AdmissibleLengths a;
    a.kind_ = Kind::Custom;
    a.values_ = std::move(values);
    a.name_ = "custom";
    return a;
}

AdmissibleLengths AdmissibleLengths::parse_spec(const std::string& spec) {
    if (spec == "invlogsq") return inv_log_sq();
    if (spec.rfind("geometric:", 0) == 0)
        return geometric(std::stod(spec.substr(10)));
    throw std::invalid_argument("unknown lengths spec: " + spec);
}

double AdmissibleLengths::operator()(long i) const {
    if (i < 1) throw std::invalid_argument("lengths: index >= 1");
    switch (kind_) {
    case Kind::InvLogSq: {
        double t = static_cast<double>(i + 1);
        double lg = std::log(t);
        return 1.0 / (t * lg * lg);
    }
    case Kind::Geometric: return std::pow(r_, static_cast<double>(i));
    case Kind::Custom:
        if (static_cast<size_t>(i) > values_.size())
            throw std::out_of_range("custom lengths: index beyond list");
        return values_[static_cast<size_t>(i - 1)];
    }
    throw std::logic_error("unreachable");
}

double AdmissibleLengths::tail_bound(long window) const {
    switch (kind_) {
    case Kind::InvLogSq:
        // sum_{i > W} 1/((i+1) log^2(i+1)) <= int_{W+1}^inf dx/(x log^2 x)
        return 1.0 / std::log(static_cast<double>(window + 1));
    case Kind::Geometric:
        return std::pow(r_, static_cast<double>(window + 1)) / (1.0 - r_);
    case Kind::Custom: return 0.0;
    }
    throw std::logic_error("unreachable");
}

bool AdmissibleLengths::has_closed_tail() const { return kind_ != Kind::Custom; }

AdmissibleLengths::CheckResult AdmissibleLengths::admissible_check(long window) const {
    CheckResult r;
    double prev = (*this)(1);
    r.partial_sum = prev;
    r.ratio_inf = 1e300;
    r.ratio_sup = 0.0;
    for (long i = 2; i <= window; ++i) {
        double cur = (*this)(i);
        r.partial_sum += cur;
        double ratio = cur / prev;
        r.ratio_inf = std::min(r.ratio_inf, ratio);
        r.ratio_sup = std::max(r.ratio_sup, ratio);
        prev = cur;
    }
    r.tail = tail_bound(window);
    r.summable = std::isfinite(r.partial_sum + r.tail) &&
                 (has_closed_tail() || kind_ == Kind::Custom);
    r.ratios_bounded = r.ratio_inf > 0 && std::isfinite(r.ratio_sup);
    r.admissible = r.summable && r.ratios_bounded;
    return r;
}

Constants derive_constants(const AdmissibleLengths& ell, long window) {
    auto chk = ell.admissible_check(window);
    if (!chk.admissible)
        throw std::invalid_argument("derive_constants: lengths not admissible");
    Constants c;
    c.c1 = chk.ratio_inf;
    // invlogsq ratios increase toward 1; geometric ratios are constant: in
    // both cases the window sup extends to the tail with c2 <= max(sup, 1).
    c.c2 = std::max(chk.ratio_sup, ell.name() == "invlogsq" ? 1.0 : chk.ratio_sup);
    double ell1 = ell(1);
    double cap_ratio = 1.0 / (1.0 + c.c2);
    double cap_len = 1.0 / ell1;
    c.kappa = 0.5 * std::min(cap_ratio, cap_len);
    c.binding = cap_ratio <= cap_len ? "1/(1+c2)" : "kappa*ell_1 < 1";
    c.delta0 = std::max(0.9, 1.0 - c.c1 * c.kappa / (2.0 * (1.0 + c.c1)));
    // feasibility recheck (the paper's two constraints)
    if (!(1.0 / (1.0 + c.c2) > c.kappa))
        throw std::runtime_error("derive_constants: kappa constraint infeasible");
    if (!(c.c1 * c.kappa / (1.0 + c.c1) > 1.0 - c.delta0))
        throw std::runtime_error("derive_constants: delta0 constraint infeasible");
    return c;
}

long n_steps(const AdmissibleLengths& ell, long i, int k,
             const ConcaveModulus& alpha) {
    double li = ell(i);
    return static_cast<long>(
        std::ceil(1.0 / (std::pow(li, k - 1) * alpha.eval_global(li))));
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

ChainConfiguration::ChainConfiguration(const AdmissibleLengths& ell, long window,
                                       Constants consts)
    : window_(window), consts_(consts) {
    if (window < 2) throw std::invalid_argument("configuration: window >= 2");
    double kappa = consts_.kappa;
    L_pos_.reserve(static_cast<size_t>(window));
    double l1 = ell(1);
    double lo = 3.75 - kappa * l1;
    L_pos_.push_back({lo, lo + l1});
    for (long i = 2; i <= window; ++i) {
        double li = ell(i);
        double nlo = L_pos_.back().hi - kappa * li;
        L_pos_.push_back({nlo, nlo + li});
    }
}

Interval ChainConfiguration::J(int i) const {
    if (std::abs(i) > 3) throw std::out_of_range("J index");
    return {i - 0.75, i + 0.75};
}

Interval ChainConfiguration::L(long i) const {
    if (i == 0 || std::abs(i) > window_) throw std::out_of_range("L index");
    if (i > 0) return L_pos_[static_cast<size_t>(i - 1)];
    Interval p = L_pos_[static_cast<size_t>(-i - 1)];
    return {-p.hi, -p.lo};
}

Interval ChainConfiguration::hull() const {
    return {-L_pos_.back().hi, L_pos_.back().hi};
}

std::vector<Interval> ChainConfiguration::family() const {
    std::vector<Interval> f;
    for (long i = window_; i >= 1; --i) f.push_back(L(-i));
    for (int i = -3; i <= 3; ++i) f.push_back(J(i));
    for (long i = 1; i <= window_; ++i) f.push_back(L(i));
    return f;
}

chains::ChainCheck ChainConfiguration::chain_check() const {
    return chains::is_chain(family());
}

// ---------------------------------------------------------------------------
// The J0 block: finite ping-pong suspension of u0 = [[c^d, e e^d e^{-1}], c]
// ---------------------------------------------------------------------------

namespace {

// free-product factor: 0 for {a, c, e}, 1 for {b, d}
int factor_of(const std::string& g) {
    if (g == "a" || g == "c" || g == "e") return 0;
    if (g == "b" || g == "d") return 1;
    throw std::invalid_argument("unknown generator: " + g);
}

struct PingPongSyllable {
    int factor;
    long net_c = 0, net_e = 0, net_d = 0; // letter content of the run
};

// Split a reduced word into maximal same-factor runs, rightmost run first.
std::vector<PingPongSyllable> syllable_runs(const GroupWord& w) {
    std::vector<PingPongSyllable> runs; // leftmost first while building
    for (const auto& s : w.reduced().syllables()) {
        int f = factor_of(s.gen);
        if (runs.empty() || runs.back().factor != f) runs.push_back({f, 0, 0, 0});
        if (s.gen == "c") runs.back().net_c += s.exp;
        if (s.gen == "e") runs.back().net_e += s.exp;
        if (s.gen == "d") runs.back().net_d += s.exp;
        if (s.gen == "a" || s.gen == "b")
            throw std::invalid_argument("ping-pong word must use c, d, e only");
    }
    std::reverse(runs.begin(), runs.end()); // rightmost (acting first) first
    return runs;
}

// One ping-pong block: model interval (i, i+2) transported into J0, carrying
// a chart translation for its mover (and the chart doubling for a on
// e-blocks, so that a e a^{-1} = e^2 holds exactly on every block).
struct BlockPlan {
    Interval block;      // absolute coordinates
    char mover;          // 'c', 'd' or 'e'
    double tau;          // chart translation of the mover (one application)
};

constexpr double kChartStep = 8.0; // psi(3/4) - psi(1/4) for the odd chart

} // namespace

// ---------------------------------------------------------------------------
// build_action
// ---------------------------------------------------------------------------

OptAction build_action(int k, const ConcaveModulus& alpha,
                       const AdmissibleLengths& ell, long window) {
    Constants consts = derive_constants(ell, window);
    ChainConfiguration config(ell, window, consts);
    auto chain_ok = config.chain_check();
    if (!chain_ok.is_chain)
        throw std::runtime_error("build_action: configuration is not a chain");

    OptAction act{{}, config, k, alpha, ell, GroupWord(), 0.0, 0.0, {}};
    Report& cert = act.certificate;
    cert.check_true("F family is a chain", chain_ok.is_chain);
    Interval hull = config.hull();
    double delta0 = consts.delta0;
    double d0 = (1.0 - delta0) / 2.0;

    // --- u0 and the J0 ping-pong plan -------------------------------------
    GroupWord c1 = GroupWord::parse("c"), d1 = GroupWord::parse("d"),
              e1 = GroupWord::parse("e");
    GroupWord cd = GroupWord::conjugate(c1, d1);  // d^{-1} c d
    GroupWord ed = GroupWord::conjugate(e1, d1);  // d^{-1} e d
    GroupWord inner = GroupWord::commutator(cd, e1 * ed * e1.inverse());
    act.u0 = GroupWord::commutator(inner, c1);

    auto runs = syllable_runs(act.u0);
    size_t nblocks = runs.size();
    if (nblocks < 2) throw std::logic_error("u0 ping-pong: degenerate word");
    // blocks (i, i+2) in model coords [0, nblocks+1], transported into J0
    Interval J0 = config.J(0);
    double model_len = static_cast<double>(nblocks) + 1.0;
    auto to_abs = [&](double u) {
        return J0.lo + J0.length() * u / model_len;
    };
    std::vector<BlockPlan> plan;
    for (size_t i = 0; i < nblocks; ++i) {
        const auto& run = runs[i];
        BlockPlan bp;
        bp.block = {to_abs(static_cast<double>(i)), to_abs(static_cast<double>(i) + 2.0)};
        if (run.factor == 1) {
            if (std::abs(run.net_d) != 1)
                throw std::logic_error("u0 ping-pong: |net d| != 1 in a run");
            bp.mover = 'd';
            bp.tau = kChartStep * static_cast<double>(run.net_d);
        } else if (run.net_c != 0) {
            if (std::abs(run.net_c) != 1)
                throw std::logic_error("u0 ping-pong: |net c| != 1 in a run");
            bp.mover = 'c';
            bp.tau = kChartStep * static_cast<double>(run.net_c);
        } else {
            if (std::abs(run.net_e) != 1)
                throw std::logic_error("u0 ping-pong: |net e| != 1 in a run");
            bp.mover = 'e';
            bp.tau = kChartStep * static_cast<double>(run.net_e);
        }
        plan.push_back(bp);
    }
    // parity sanity: movers of equal parity live on disjoint blocks
    for (size_t i = 0; i + 2 < nblocks; i += 1)
        if (plan[i].block.hi > plan[i + 2].block.lo + 1e-12)
            throw std::logic_error("u0 ping-pong: same-parity blocks overlap");

    // --- generator pieces ---------------------------------------------------
    auto chart_translation = [](Interval J, double tau) {
        return Map1D::affine_conj(J.length(), J.lo,
                                  Map1D::compactified_affine(1.0, tau));
    };
    auto chart_doubling = [](Interval J) {
        return Map1D::affine_conj(J.length(), J.lo,
                                  Map1D::compactified_affine(2.0, 0.0));
    };
    auto mirror = [](const Map1D& m) { return Map1D::affine_conj(-1.0, 0.0, m); };

    std::vector<std::pair<Interval, Map1D>> a_pieces, b_pieces, c_pieces, d_pieces,
        e_pieces;

    // a, b on the L intervals: delta0-fast movers (chart translations with
    // tau = 2/D0: f^N is delta0-fast for every N >= 1), mirrored on L_{-i}
    double tau_fast = 2.0 / d0;
    for (long i = 1; i <= window; ++i) {
        Interval Li = config.L(i);
        Map1D mover = chart_translation(Li, tau_fast);
        auto& side = (i % 2 == 1) ? a_pieces : b_pieces;
        side.emplace_back(Li, mover);
        Map1D mneg = mirror(mover);
        side.emplace_back(config.L(-i), mneg);
    }
    // b on J_1 (and mirrored on J_{-1}): a positive plateau bump
    {
        Interval J1 = config.J(1);
        double ramp = J1.length() / 4.0;
        Map1D bump = Map1D::plateau_bump(J1, ramp, 0.1);
        b_pieces.emplace_back(J1, bump);
        b_pieces.emplace_back(config.J(-1), mirror(bump));
    }
    // c, d on J_2, J_3 (two-chain movers) and mirrored
    {
        Interval J2 = config.J(2), J3 = config.J(3);
        Map1D cp = chart_translation(J2, kChartStep);
        Map1D dp = chart_translation(J3, kChartStep);
        auto cond = chains::chain_group_condition({cp, dp}, {J2, J3});
        if (!cond.holds) {
            auto N = chains::chain_group_stabilization({cp, dp}, {J2, J3}, 64);
            if (!N)
                throw std::runtime_error("build_action: two-chain condition failed");
            cp = chart_translation(J2, kChartStep * static_cast<double>(*N));
            dp = chart_translation(J3, kChartStep * static_cast<double>(*N));
            cond = chains::chain_group_condition({cp, dp}, {J2, J3});
        }
        cert.check_true("c,d two-chain condition on J2,J3", cond.holds);
        c_pieces.emplace_back(J2, cp);
        c_pieces.emplace_back(config.J(-2), mirror(cp));
        d_pieces.emplace_back(J3, dp);
        d_pieces.emplace_back(config.J(-3), mirror(dp));
    }
    // J0 ping-pong blocks
    for (const auto& bp : plan) {
        Map1D mover = chart_translation(bp.block, bp.tau);
        switch (bp.mover) {
        case 'c': c_pieces.emplace_back(bp.block, mover); break;
        case 'd': d_pieces.emplace_back(bp.block, mover); break;
        case 'e':
            e_pieces.emplace_back(bp.block, mover);
            // a doubles in chart coordinates here so that a e a^{-1} = e^2
            a_pieces.emplace_back(bp.block, chart_doubling(bp.block));
            break;
        default: throw std::logic_error("unknown mover");
        }
    }

    act.gens.emplace("a", Map1D::piecewise_glue(hull, std::move(a_pieces)));
    act.gens.emplace("b", Map1D::piecewise_glue(hull, std::move(b_pieces)));
    act.gens.emplace("c", Map1D::piecewise_glue(hull, std::move(c_pieces)));
    act.gens.emplace("d", Map1D::piecewise_glue(hull, std::move(d_pieces)));
    act.gens.emplace("e", Map1D::piecewise_glue(hull, std::move(e_pieces)));

    // --- construction certificates -----------------------------------------
    // (1) fastness of the L movers: f^{N_i} moves some grid point by >= delta0 |L_i|
    {
        double worst = 1e300;
        for (long i = 1; i <= std::min<long>(window, 8); ++i) {
            Interval Li = config.L(i);
            const Map1D& g = act.gens.at(i % 2 == 1 ? "a" : "b");
            long Ni = n_steps(ell, i, k, alpha);
            std::vector<double> grid = homeo::uniform_grid(Li, 512);
            grid.push_back(Li.lo + d0 * Li.length()); // the extremal point
            double best = 0.0;
            for (double x : grid) {
                double y = homeo::iterate(g, Ni, x);
                best = std::max(best, std::abs(y - x));
            }
            worst = std::min(worst, best / Li.length());
        }
        cert.add("a,b movers delta0-fast (sampled)", worst, delta0,
                 worst >= delta0 - 1e-12);
        if (worst < delta0 - 1e-12)
            throw std::runtime_error("build_action: fastness certificate failed");
    }
    // (3) ping-pong witness: phi(u0) moves the marker across >= 1 block
    {
        act.marker_start = to_abs(0.5);
        act.marker_end = groupword::eval_word(act.gens, act.u0, act.marker_start);
        double moved = act.marker_end - act.marker_start;
        double block_step = J0.length() / model_len;
        cert.add("phi(u0) marker displacement (blocks)", moved / block_step, 1.0,
                 moved >= block_step);
        if (moved < block_step)
            throw std::runtime_error("build_action: ping-pong witness failed");
    }
    // relations: a e a^{-1} e^{-2} = 1 and [c, a] = [c, e] = 1 on a grid
    {
        GroupWord rel = GroupWord::parse("a e a^-1 e^-2");
        GroupWord com1 = GroupWord::commutator(GroupWord::parse("c"),
                                               GroupWord::parse("a"));
        GroupWord com2 = GroupWord::commutator(GroupWord::parse("c"),
                                               GroupWord::parse("e"));
        double worst = 0.0;
        for (int i = 1; i < 64; ++i) {
            double x = hull.lo + hull.length() * i / 64.0;
            worst = std::max(worst,
                             std::abs(groupword::eval_word(act.gens, rel, x) - x));
            worst = std::max(worst,
                             std::abs(groupword::eval_word(act.gens, com1, x) - x));
            worst = std::max(worst,
                             std::abs(groupword::eval_word(act.gens, com2, x) - x));
        }
        // extra probes inside the J0 blocks where the relations are loaded
        for (const auto& bp : plan)
            for (double t : {0.25, 0.5, 0.75}) {
                double x = bp.block.lo + bp.block.length() * t;
                worst = std::max(
                    worst, std::abs(groupword::eval_word(act.gens, rel, x) - x));
            }
        cert.check_le("BS and center relations on grid", worst, 1e-8);
        if (worst > 1e-8)
            throw std::runtime_error("build_action: relation certificate failed");
    }
    // (4) mirror symmetry v(-x) = -v(x) away from J0
    {
        double worst = 0.0;
        for (const auto& name : {"a", "b", "c", "d"}) {
            const Map1D& g = act.gens.at(name);
            for (int i = 0; i <= 64; ++i) {
                double x = 0.8 + (hull.hi - 0.9) * i / 64.0;
                worst = std::max(worst, std::abs(g.eval(-x) + g.eval(x)));
            }
        }
        cert.check_le("mirror symmetry away from J0", worst, 1e-9);
    }
    // b positive on J_1
    {
        Interval J1 = config.J(1);
        double mind = 1e300;
        for (int i = 1; i < 64; ++i) {
            double x = J1.lo + J1.length() * i / 64.0;
            mind = std::min(mind, act.gens.at("b").eval(x) - x);
        }
        cert.check_true("b > id on J1 interior", mind > 0);
    }
    if (!cert.all_pass())
        throw std::runtime_error("build_action: certificate failure\n" + cert.str());
    return act;
}

// ---------------------------------------------------------------------------
// Slow progress
// ---------------------------------------------------------------------------

SlowProgressResult slow_progress_experiment(const OptAction& action, long i_max,
                                            double s1) {
    const auto& config = action.config;
    const Constants& consts = config.constants();
    if (i_max + 1 > config.window())
        throw std::invalid_argument("slow_progress: i_max must be < window");
    double l1 = config.L(1).length();
    if (s1 < 0) {
        double frac = ((1.0 - consts.delta0) + consts.kappa) / 2.0;
        s1 = config.L(1).lo + frac * l1;
    }
    {
        double rel = s1 - config.L(1).lo;
        if (!(rel > (1 - consts.delta0) * l1 && rel < consts.kappa * l1))
            throw std::invalid_argument("slow_progress: s1 outside the admissible slot");
        if (!(config.J(3).contains(s1)))
            throw std::invalid_argument("slow_progress: s1 must lie in L1 cap J3");
    }
    chains::SupportCover cover(config.family());

    SlowProgressResult res;
    res.ceiling = 1.0 - 1.0 / (4.0 * action.k + 2.0);
    double s = s1;
    double min_rate = 1e300;
    for (long i = 1; i <= i_max; ++i) {
        const Map1D& g = action.gens.at(i % 2 == 1 ? "a" : "b");
        long Ni = n_steps(action.lengths, i, action.k, action.alpha);
        s = homeo::iterate(g, Ni, s, 1e-13);
        SlowProgressRow row;
        row.i = i;
        row.n_i = Ni;
        row.s_next = s;
        Interval Li = config.L(i), Ln = config.L(i + 1);
        row.in_overlap = s > Ln.lo && s < Li.hi;
        double rel = s - Ln.lo;
        row.ledger_ok = rel > (1 - consts.delta0) * Ln.length() &&
                        rel < consts.kappa * Ln.length();
        auto cd = cover.covering_distance(s1, s);
        row.cd = cd ? *cd : -1;
        res.rows.push_back(row);
        if (!row.in_overlap) {
            res.certificate.check_true(
                "membership s_{i+1} in L_i cap L_{i+1} at i=" + std::to_string(i),
                false);
            return res;
        }
        min_rate = std::min(min_rate, static_cast<double>(row.cd) /
                                          static_cast<double>(i));
    }
    res.realized_rate = min_rate;
    res.separation = min_rate > res.ceiling;
    res.certificate.check_true("all memberships hold", true);
    bool cds_ok = true, ledger_ok = true;
    for (const auto& r : res.rows) {
        if (!(r.cd == r.i || r.cd == r.i + 1)) cds_ok = false;
        if (!r.ledger_ok) ledger_ok = false;
    }
    res.certificate.check_true("CD(s_1, s_{i+1}) = i or i+1 for all i", cds_ok);
    res.certificate.check_true("jump ledger (1-delta0, kappa) per step", ledger_ok);
    res.certificate.add("realized CD/i (min over run)", res.realized_rate,
                        res.ceiling, res.separation,
                        "must exceed the slow-progress ceiling");
    return res;
}

ExpandSearchResult expand_search(const OptAction& action, Interval U,
                                 int syllable_cap) {
    // Greedy hill climb: drive the right endpoint of U toward the slot
    // L_1 cap J_3, at each step taking the generator power (among g^{+-4},
    // g in {a,b,c,d,e}) that makes the most progress.
    ExpandSearchResult res;
    const auto& config = action.config;
    Interval target{config.L(1).lo, config.J(3).hi};
    double x = U.hi;
    std::vector<Syllable> word;
    const char* names[] = {"a", "b", "c", "d", "e"};
    for (int iter = 0; iter < syllable_cap; ++iter) {
        if (x > target.lo && x < target.hi) {
            res.reached = true;
            break;
        }
        double want_right = (x <= target.lo) ? 1.0 : -1.0;
        double best = x;
        std::string best_g;
        long best_e = 0;
        for (const char* g : names) {
            for (long e : {4L, -4L}) {
                double y = homeo::iterate(action.gens.at(g), e, x);
                if ((y - x) * want_right > (best - x) * want_right) {
                    best = y;
                    best_g = g;
                    best_e = e;
                }
            }
        }
        if (best_e == 0 || best == x) break; // stalled
        x = best;
        if (!word.empty() && word.back().gen == best_g)
            word.back().exp += best_e;
        else
            word.push_back({best_g, best_e});
    }
    res.syllables_used = static_cast<int>(word.size());
    res.word = GroupWord(word);
    if (x > target.lo && x < target.hi) res.reached = true;
    return res;
}

} // namespace onedyn::optgroup
