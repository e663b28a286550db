#include <doctest.h>

#include <cmath>

#include "onedyn/expansion.hpp"
#include "onedyn/mollifier.hpp"
#include "onedyn/rng.hpp"

using namespace onedyn;
using namespace onedyn::expansion;
using modulus::ConcaveModulus;

TEST_CASE("mollifier properties") {
    const auto& phi = MollifierPhi::shared();
    CHECK(phi.value(-0.5) == -1.0);
    CHECK(phi.value(1.5) == 1.0);
    CHECK(phi.value(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    // odd symmetry on a grid
    for (int i = 1; i < 32; ++i) {
        double x = i / 32.0;
        CHECK(phi.value(x) + phi.value(1.0 - x) ==
              doctest::Approx(0.0).epsilon(1e-13));
    }
    // derivative consistency with finite differences
    double h = 1e-6;
    CHECK(phi.derivative(0.37) ==
          doctest::Approx((phi.value(0.37 + h) - phi.value(0.37 - h)) / (2 * h))
              .epsilon(1e-6));
    // C-norms grow with the order
    CHECK(phi_c_norm(1) > 1.0);
    CHECK(phi_c_norm(2) > phi_c_norm(1));
    CHECK(phi_c_norm(3) > phi_c_norm(2));
}

TEST_CASE("fast diffeo: plateau arithmetic and bounds") {
    for (int k : {1, 2}) {
        FastDiffeoParams p;
        p.k = k;
        p.alpha = ConcaveModulus::hoelder(0.5);
        p.ell = std::ldexp(1.0, -7);
        p.delta0 = 0.9;
        auto fd = build_fast_diffeo(p);
        INFO("k = " << k << "\n" << fd.certificate.str());
        CHECK(fd.certificate.all_pass());
        CHECK(fd.f.eval(0.0) == 0.0);
        CHECK(fd.f.eval(p.ell) == p.ell);
        // exact plateau iteration, measured fastness >= delta0
        double D0 = p.d0(), Delta = p.delta_step();
        long N0 = p.n0();
        double x = D0 * p.ell, acc = D0 * p.ell;
        for (long i = 1; i <= N0; ++i) {
            x = fd.f.eval(x);
            acc = acc + Delta;
            CHECK(x == acc); // bitwise plateau arithmetic (x + Delta per step)
            CHECK(x == doctest::Approx(D0 * p.ell + i * Delta).epsilon(1e-13));
        }
        std::vector<double> grid = homeo::uniform_grid({0.0, p.ell}, 512);
        grid.push_back(x);
        grid.push_back(D0 * p.ell);
        // displacement of f^{N0} at the plateau start
        double disp = (x - D0 * p.ell) / p.ell;
        CHECK(disp >= p.delta0 - 1e-14);
    }
    // k = 2 at this scale is an honest diffeomorphism
    FastDiffeoParams p2{2, ConcaveModulus::hoelder(0.5), std::ldexp(1.0, -7), 0.9};
    CHECK(build_fast_diffeo(p2).monotone_regime);

    FastDiffeoParams bad{1, ConcaveModulus::hoelder(0.5), 0.5, 0.5};
    CHECK_THROWS(build_fast_diffeo(bad)); // delta0 below 9/10
}

TEST_CASE("measure_fast basics") {
    auto id = homeo::Map1D::identity({0.0, 1.0});
    CHECK(measure_fast(id, {0.0, 1.0}) == 0.0);

    // translation-by-Delta plateau region gives at least Delta/ell
    auto f = homeo::Map1D::plateau_bump({0.0, 1.0}, 0.25, 0.05);
    CHECK(measure_fast(f, {0.0, 1.0}) >= 0.05 - 1e-12);
}

TEST_CASE("fast implies expansive with delta' = 2 delta/(1-delta)") {
    SplitMix64 rng(905);
    int instances = 0;
    while (instances < 20) {
        double ramp = 0.1 + 0.15 * rng.next_double();
        double delta = (2.0 * ramp / phi_c_norm(1)) * (0.2 + 0.5 * rng.next_double());
        double tau = 1.0 + 30.0 * rng.next_double();
        homeo::Map1D f = (instances % 2 == 0)
                             ? homeo::Map1D::plateau_bump({0.0, 1.0}, ramp, delta)
                             : homeo::Map1D::compactified_affine(1.0, tau);
        double measured = measure_fast(f, {0.0, 1.0}, 8192);
        if (measured <= 0 || measured >= 1) continue;
        double predicted = 2 * measured / (1 - measured);
        double expans = measure_expansive(f, {0.0, 1.0}, 8192);
        CHECK(expans >= predicted - 1e-3);
        ++instances;
    }
}

TEST_CASE("k-fixed detection and expansivity bounds") {
    auto beta = ConcaveModulus::hoelder(0.5);
    // identity: k-fixed for every k with vanishing bounds
    auto id = homeo::Map1D::identity({0.0, 1.0});
    auto rid = k_fixed_and_bounds(id, {0.0, 1.0}, 1, beta, 2048);
    CHECK(rid.is_k_fixed);
    CHECK(rid.delta1 == doctest::Approx(0.0).epsilon(1e-8));

    // one transversal interior fixed point plus fixed endpoints:
    // the compactified doubling fixes 0, 1/2, 1 and crosses at 1/2
    auto f = homeo::Map1D::compactified_affine(2.0, 0.0);
    auto rf = k_fixed_and_bounds(f, {0.0, 1.0}, 1, beta, 4096);
    CHECK(rf.is_k_fixed);
    CHECK(rf.fixed_points >= 3);

    // a flat zero stretch is reported as an accumulation cluster
    auto up = homeo::Map1D::plateau_bump({0.0, 0.5}, 0.12, 0.04);
    auto down = homeo::Map1D::plateau_bump({0.5, 1.0}, 0.12, -0.04);
    auto flat = homeo::Map1D::piecewise_glue({0.0, 1.0},
                                             {{{0.0, 0.5}, up}, {{0.5, 1.0}, down}});
    auto rflat = k_fixed_and_bounds(flat, {0.0, 1.0}, 1, beta, 4096);
    CHECK(rflat.is_k_fixed);
    CHECK(rflat.accumulation_cluster);
    // measured expansivity is dominated by delta1 + slack (the lemma bound)
    double expans = measure_expansive(f, {0.0, 1.0}, 4096);
    CHECK(expans <= rf.delta1 + 0.05);
    CHECK(expans <= rf.delta2 + 0.05);
}

TEST_CASE("root power expansivity") {
    // N = 1: pass is immediate since log(1+d) <= d
    auto f = homeo::Map1D::plateau_bump({0.0, 1.0}, 0.2, 0.06);
    double d = measure_expansive(f, {0.0, 1.0}, 4096);
    auto r1 = root_power_expansive(f, {0.0, 1.0}, 1, d * 0.99);
    CHECK(r1.premise_met);
    CHECK(r1.pass);

    // identity: premise unmet for any positive delta
    auto id = homeo::Map1D::identity({0.0, 1.0});
    auto r0 = root_power_expansive(id, {0.0, 1.0}, 4, 0.5);
    CHECK_FALSE(r0.premise_met);
    CHECK_FALSE(r0.pass);

    // chained: fast mover, N = 8
    auto g = homeo::Map1D::compactified_affine(1.0, 3.0);
    double dN = 0.0;
    {
        // measure g^8 expansivity directly
        double best = 0.0;
        for (int i = 1; i < 4096; ++i) {
            double x = i / 4096.0;
            double fx = homeo::iterate(g, 8, x);
            double lo = std::min(x, fx), hi = std::max(x, fx);
            double dist = std::min(lo, 1.0 - hi);
            if (dist > 0) best = std::max(best, (hi - lo) / dist);
        }
        dN = best;
    }
    auto r8 = root_power_expansive(g, {0.0, 1.0}, 8, dN * 0.9);
    CHECK(r8.premise_met);
    CHECK(r8.pass);
}

TEST_CASE("fast chain over disjoint intervals") {
    auto alpha = ConcaveModulus::hoelder(0.5);
    auto empty = build_fast_on_chain(1, alpha, 0.9, {});
    CHECK(empty.f.eval(0.5) == 0.5);

    std::vector<homeo::Interval> ivs = {{0.0, 0.3}, {0.4, 0.9}};
    auto chain = build_fast_on_chain(1, alpha, 0.9, ivs);
    // per-interval fastness matches the single-interval measurement
    for (auto J : ivs) {
        std::vector<double> grid = homeo::uniform_grid(J, 2048);
        grid.push_back(J.lo + 0.05 * J.length());
        double m = measure_fast(chain.f, J, grid);
        CHECK(m >= 0.9 - 1e-9); // chart movers are delta0-fast at N = 1
    }
    CHECK_THROWS(build_fast_on_chain(1, alpha, 0.9, {{0.0, 0.5}, {0.4, 0.9}}));
}

TEST_CASE("cross-interval alpha-norm bound on plateau chains") {
    // small intervals so that every piece is in the plateau regime
    auto alpha = ConcaveModulus::hoelder(0.5);
    std::vector<homeo::Interval> ivs = {{0.0, 1e-6}, {2e-6, 3.2e-6}};
    auto chain = build_fast_on_chain(2, alpha, 0.9, ivs);
    INFO(chain.certificate.str());
    CHECK(chain.certificate.all_pass());
}

TEST_CASE("upper density and progress identity") {
    std::vector<long> evens;
    for (long n = 2; n <= 1000; n += 2) evens.push_back(n);
    auto [hi, lo] = upper_density(evens, 1000);
    CHECK(hi == doctest::Approx(0.5).epsilon(0.01));
    CHECK(lo == doctest::Approx(0.5).epsilon(0.01));

    // d_i = i: progress set is everything, density 1
    std::vector<long> lin;
    for (long i = 0; i <= 400; ++i) lin.push_back(i);
    auto pr = progress_density(lin);
    CHECK(pr.identity_holds);
    CHECK(pr.progress_density == doctest::Approx(1.0).epsilon(0.01));

    // capped random walk (seeded): identity of the counting argument
    SplitMix64 rng(2024);
    std::vector<long> walk{0};
    for (int i = 0; i < 3000; ++i) {
        long step = static_cast<long>(rng.next_below(3)) - 1;
        long next = std::max(0L, walk.back() + step);
        walk.push_back(next);
    }
    auto pw = progress_density(walk);
    CHECK(pw.identity_holds);
    CHECK(pw.progress_density == doctest::Approx(pw.max_rate).epsilon(1e-12));

    std::vector<long> badstep{0, 2};
    CHECK_THROWS(progress_density(badstep));
}

TEST_CASE("two jumps witness") {
    auto id = homeo::Map1D::identity({0.0, 1.0});
    // identity pair admits no valid triple (strict inequalities fail)
    auto c0 = two_jumps_witness(id, id, {{0.2, 0.4, 0.6}});
    CHECK_FALSE(c0.valid);

    // hand-built crossed pair: f fixes t_i, g fixes s_i, with shrinking gaps
    // around accumulating y_i; use chart movers localized on small blocks
    std::vector<TwoJumpsTriple> triples;
    std::vector<std::pair<homeo::Interval, homeo::Map1D>> fParts, gParts;
    double base = 0.0;
    for (int i = 0; i < 4; ++i) {
        double w = std::pow(0.5, i); // block width shrinks: gaps decrease
        homeo::Interval blk{base, base + w};
        double s = base + 0.2 * w, y = base + 0.5 * w, t = base + 0.8 * w;
        // f: on [s', t] moves y down to f(y) <= s; realize with an inverse
        // bump supported on (base, t) fixing t
        fParts.push_back({{blk.lo, t},
                          homeo::Map1D::affine_conj(
                              t - blk.lo, blk.lo,
                              homeo::Map1D::compactified_affine(1.0, -40.0))});
        // g: supported on (s, blk.hi) fixing s, moves y up beyond t
        gParts.push_back({{s, blk.hi},
                          homeo::Map1D::affine_conj(
                              blk.hi - s, s,
                              homeo::Map1D::compactified_affine(1.0, 40.0))});
        triples.push_back({s, y, t});
        base += w + 0.01;
    }
    auto f = homeo::Map1D::piecewise_glue({0.0, 2.1}, fParts);
    auto g = homeo::Map1D::piecewise_glue({0.0, 2.1}, gParts);
    auto cert = two_jumps_witness(f, g, triples);
    INFO(cert.reason);
    CHECK(cert.valid);
    REQUIRE(cert.gaps.size() == 4);
    for (size_t i = 1; i < cert.gaps.size(); ++i)
        CHECK(cert.gaps[i] < cert.gaps[i - 1]);

    // violating s = g(s): s inside g's support is moved by g
    auto bad = two_jumps_witness(f, g, {{0.3, 0.5, 0.8}});
    CHECK_FALSE(bad.valid);
    CHECK(bad.first_failing == 0);
}
