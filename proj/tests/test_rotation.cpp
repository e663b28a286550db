#include <doctest.h>

#include <cmath>

#include "onedyn/rotation.hpp"

using namespace onedyn;
using namespace onedyn::rotation;
using homeo::CircleMap;
using homeo::Map1D;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("rotation number of rigid rotations and the identity") {
    auto r = CircleMap::rotation(0.375);
    for (long n : {10L, 100L, 1000L}) {
        auto e = rotation_number(r, n);
        CHECK(e.value == doctest::Approx(0.375).epsilon(1e-12));
        CHECK(e.error_bound == doctest::Approx(1.0 / n));
    }
    auto id = CircleMap::rotation(0.0);
    CHECK(rotation_number(id, 50).value == doctest::Approx(0.0));
}

TEST_CASE("rotation number homogeneity and conjugacy invariance") {
    auto f = CircleMap::rotation(kGolden);
    long n = 20000;
    auto e1 = rotation_number(f, n);
    // f^3 via iterating three steps inside a wrapped lift
    auto lift3 = Map1D::affine(1.0, 3.0 * kGolden - std::floor(3.0 * kGolden),
                               {0.0, 1.0});
    auto f3 = CircleMap(lift3);
    auto e3 = rotation_number(f3, n);
    double expect = 3.0 * e1.value - std::floor(3.0 * e1.value);
    double diff = std::abs(e3.value - expect);
    diff = std::min(diff, 1.0 - diff);
    CHECK(diff <= 3 * e1.error_bound + e3.error_bound);
}

TEST_CASE("dirichlet pigeonhole approximations") {
    auto golden = Theta::golden();
    auto r = dirichlet_approx(golden, 9);
    CHECK(r.p == 5);
    CHECK(r.q == 8);
    double err = std::abs(8 * kGolden - 5);
    CHECK(err < 1.0 / 9);

    // N = 2: q = 1, p = round(theta)
    auto r2 = dirichlet_approx(Theta::value(0.7), 2);
    CHECK(r2.q == 1);
    CHECK(r2.p == 1);

    // sqrt(2) - 1 with N = 13 gives 5/12
    auto r3 = dirichlet_approx(Theta::parse("sqrt2m1"), 13);
    CHECK(r3.p == 5);
    CHECK(r3.q == 12);

    // rational detection
    auto r4 = dirichlet_approx(Theta::value(0.5), 8);
    CHECK(r4.exact_rational);
    CHECK(r4.p == 1);
    CHECK(r4.q == 2);
}

TEST_CASE("convergents: golden ratio gives Fibonacci ratios") {
    auto cs = convergents(Theta::golden(), 10);
    REQUIRE(cs.size() == 10);
    long fib[13] = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233};
    for (int i = 0; i < 10; ++i) {
        CHECK(cs[i].p == fib[i + 1]);
        CHECK(cs[i].q == fib[i + 2]);
    }
    // q |q theta - p| < 1 in 80-bit precision
    long double th = Theta::golden().approx();
    for (const auto& c : cs) {
        long double q = c.q.convert_to<long double>();
        long double p = c.p.convert_to<long double>();
        CHECK(static_cast<double>(q * fabsl(q * th - p)) < 1.0);
    }
}

TEST_CASE("convergents of sqrt2-1 and 1/pi") {
    auto cs = convergents(Theta::parse("sqrt2m1"), 3);
    CHECK(cs[0].p == 1);
    CHECK(cs[0].q == 2);
    CHECK(cs[1].p == 2);
    CHECK(cs[1].q == 5);
    CHECK(cs[2].p == 5);
    CHECK(cs[2].q == 12);

    auto cpi = convergents(Theta::value(1.0 / M_PI), 3);
    CHECK(cpi[0].p == 1);
    CHECK(cpi[0].q == 3);
    CHECK(cpi[1].p == 7);
    CHECK(cpi[1].q == 22);
    CHECK(cpi[2].p == 106);
    CHECK(cpi[2].q == 333);

    // |theta - p/q| < 1/q^2 for every returned convergent
    for (const auto& c : cpi) {
        double p = c.p.convert_to<double>(), q = c.q.convert_to<double>();
        CHECK(std::abs(1.0 / M_PI - p / q) < 1.0 / (q * q));
    }
}

TEST_CASE("denjoy-koksma for rotations") {
    auto f = CircleMap::rotation(kGolden);
    auto sin2pi = [](double x) { return std::sin(2 * M_PI * x); };

    // constant observable: lhs = 0
    auto rc = denjoy_koksma_check(f, [](double) { return 1.0; }, 0.0, 1.0, 8, true);
    CHECK(rc.lhs == doctest::Approx(0.0));

    // q = 8 (a golden convergent denominator): lhs <= Var/q = 0.5
    auto r8 = denjoy_koksma_check(f, sin2pi, 4.0, 0.0, 8, true);
    CHECK(r8.pass);
    CHECK(r8.lhs <= 0.5 + 1e-12);

    // all convergent denominators q <= 1000
    for (const auto& c : convergents(Theta::golden(), 14)) {
        long q = c.q.convert_to<long>();
        if (q > 1000) break;
        auto rr = denjoy_koksma_check(f, sin2pi, 4.0, 0.0, q, true);
        CHECK(rr.pass);
    }
}

TEST_CASE("birkhoff unique ergodicity measurements") {
    auto f = CircleMap::rotation(kGolden);
    auto sin2pi = [](double x) { return std::sin(2 * M_PI * x); };
    auto r = birkhoff_unique_ergodicity(f, sin2pi, 10000,
                                        {0.0, 0.17, 0.39, 0.62, 0.85});
    CHECK(r.applicable);
    CHECK(r.max_deviation < 1e-2);

    auto rc = birkhoff_unique_ergodicity(f, [](double) { return 2.5; }, 500,
                                         {0.1, 0.5});
    CHECK(rc.max_deviation == doctest::Approx(0.0));

    // rational rotation reports non-applicability
    auto r3 = CircleMap::rotation(1.0 / 3.0);
    auto rr = birkhoff_unique_ergodicity(r3, sin2pi, 3000, {0.05, 0.45});
    CHECK_FALSE(rr.applicable);
}

TEST_CASE("measure rotation numbers") {
    // Lebesgue discretized
    EmpiricalMeasure mu;
    const int M = 4096;
    for (int i = 0; i < M; ++i)
        mu.atoms.emplace_back((i + 0.5) / M, 1.0 / M);
    auto f = CircleMap::rotation(kGolden);
    CHECK(measure_rotation_number(mu, f, 0.2) ==
          doctest::Approx(kGolden).epsilon(1e-3));
    auto id = CircleMap::rotation(0.0);
    CHECK(measure_rotation_number(mu, id, 0.2) == doctest::Approx(0.0));

    EmpiricalMeasure bad;
    bad.atoms.emplace_back(0.5, 0.7);
    CHECK_THROWS(measure_rotation_number(bad, f, 0.1));
}

TEST_CASE("stationary measure monte carlo") {
    auto f = CircleMap::rotation(kGolden);
    auto res = stationary_measure_mc({f}, {1.0}, 64, 4000, 12345u);
    // unique ergodicity: close to Lebesgue in binned sup norm
    CHECK(res.self_consistency_residual < 5.0 / std::sqrt(4000.0));
    double bin_mass_bound = 5.0 / std::sqrt(4000.0);
    std::vector<double> bins(res.bins, 0.0);
    for (auto& [x, w] : res.measure.atoms)
        bins[std::min<int>(res.bins - 1, static_cast<int>(x * res.bins))] += w;
    for (double b : bins)
        CHECK(std::abs(b - 1.0 / res.bins) < bin_mass_bound);

    // identity generators reproduce the uniform start distribution
    auto id = CircleMap::rotation(0.0);
    auto ri = stationary_measure_mc({id}, {1.0}, 16, 1000, 7u);
    CHECK(ri.measure.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

    // two rotations: residual small, deterministic under the seed
    auto g = CircleMap::rotation(0.31);
    auto r1 = stationary_measure_mc({f, g}, {0.5, 0.5}, 32, 2000, 99u);
    auto r2 = stationary_measure_mc({f, g}, {0.5, 0.5}, 32, 2000, 99u);
    REQUIRE(r1.measure.atoms.size() == r2.measure.atoms.size());
    for (size_t i = 0; i < r1.measure.atoms.size(); ++i)
        CHECK(r1.measure.atoms[i] == r2.measure.atoms[i]); // bit identical
}
