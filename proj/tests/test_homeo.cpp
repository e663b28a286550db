#include <doctest.h>

#include <cmath>

#include "onedyn/homeo.hpp"
#include "onedyn/groupword.hpp"

using namespace onedyn;
using homeo::Interval;
using homeo::Map1D;

TEST_CASE("eval of primitives") {
    auto id = Map1D::identity({0.0, 1.0});
    CHECK(id.eval(0.3) == 0.3);

    auto moeb = Map1D::moebius(1.0, 1.0, {0.0, 0.5});
    CHECK(moeb.eval(0.1) == doctest::Approx(0.1 / 0.9).epsilon(1e-15));

    auto aff = Map1D::affine(2.0, 0.0, {0.0, 1.0});
    CHECK(aff.inverse().eval(0.5) == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(id.eval(1.5), std::domain_error);
    CHECK_THROWS(Map1D::moebius(1.0, 4.0, {0.0, 0.5})); // pole at 0.25
}

TEST_CASE("inverse correctness on grids") {
    auto m = Map1D::plateau_bump({0.0, 1.0}, 0.25, 0.09);
    auto inv = m.inverse();
    for (int i = 0; i <= 32; ++i) {
        double x = i / 32.0;
        CHECK(inv.eval(m.eval(x), 1e-13) == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("compose type-checks domains against ranges") {
    auto f = Map1D::affine(2.0, 0.0, {0.0, 1.0});  // range [0,2]
    auto g = Map1D::identity({0.0, 1.0});
    CHECK_THROWS(Map1D::compose_chain({f, g}));
    auto h = Map1D::identity({0.0, 2.0});
    CHECK_NOTHROW(Map1D::compose_chain({f, h}));
}

TEST_CASE("word composition matches nested evaluation") {
    std::map<std::string, Map1D> gens;
    gens.emplace("t1", Map1D::plateau_bump({0.0, 1.0}, 0.25, 0.05));
    gens.emplace("t2", Map1D::plateau_bump({0.0, 1.0}, 0.2, -0.03));

    auto w = groupword::GroupWord::parse("t2^2 t1^3");
    auto composed = groupword::compose_word(gens, w);
    for (int i = 0; i <= 16; ++i) {
        double x = i / 16.0;
        double y = x;
        for (int k = 0; k < 3; ++k) y = gens.at("t1").eval(y); // rightmost first
        for (int k = 0; k < 2; ++k) y = gens.at("t2").eval(y);
        CHECK(composed.eval(x) == doctest::Approx(y).epsilon(1e-12));
    }

    // empty word is the identity; a a^{-1} is the identity on a grid
    auto e = groupword::compose_word(gens, groupword::GroupWord::parse(""));
    CHECK(e.eval(0.37) == 0.37);
    auto aa = groupword::compose_word(gens, groupword::GroupWord::parse("t1 t1^-1"));
    for (int i = 0; i <= 8; ++i) {
        double x = i / 8.0;
        CHECK(aa.eval(x, 1e-13) == doctest::Approx(x).epsilon(1e-10));
    }
    CHECK_THROWS(groupword::compose_word(gens, groupword::GroupWord::parse("zz")));
}

TEST_CASE("derivatives: closed forms, chain rule, finite differences") {
    auto aff = Map1D::affine(2.0, 0.0, {0.0, 1.0});
    CHECK(homeo::derivative_k(aff, 0.3, 1).value == 2.0);

    // Yoccoz endpoint derivatives are 1
    auto y = Map1D::yoccoz(1.0, 2.0);
    CHECK(homeo::derivative_k(y, 0.0, 1).value == doctest::Approx(1.0));
    CHECK(homeo::derivative_k(y, 1.0, 1).value == doctest::Approx(1.0));

    // plateau: f' = 1 on the plateau of the fast map
    auto f = Map1D::plateau_bump({0.0, 1.0}, 0.2, 0.05);
    CHECK(homeo::derivative_k(f, 0.5, 1).value == doctest::Approx(1.0));

    // chain rule across compositions against finite differences
    auto comp = Map1D::compose_chain({f, Map1D::affine(1.0, 0.0, {0.0, 1.0})});
    auto d1 = homeo::derivative_k(comp, 0.33, 1);
    double h = 1e-6;
    double fd = (comp.eval(0.33 + h) - comp.eval(0.33 - h)) / (2 * h);
    CHECK(d1.value == doctest::Approx(fd).epsilon(1e-5));

    // second derivative of x/(1-x): f'' = 2/(1-x)^3
    auto moeb = Map1D::moebius(1.0, 1.0, {0.0, 0.5});
    auto d2 = homeo::derivative_k(moeb, 0.2, 2);
    CHECK(d2.value == doctest::Approx(2.0 / std::pow(0.8, 3)).epsilon(1e-4));
}

TEST_CASE("support components") {
    auto id = Map1D::identity({0.0, 1.0});
    CHECK(homeo::support_components(id).empty());

    auto f = Map1D::plateau_bump({0.2, 0.5}, 0.06, 0.02);
    auto glue = Map1D::piecewise_glue(
        {0.0, 1.0}, {{{0.2, 0.5}, f},
                     {{0.6, 0.9}, Map1D::plateau_bump({0.6, 0.9}, 0.06, 0.02)}});
    auto comps = homeo::support_components(glue, 4096, 1e-12);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].lo == doctest::Approx(0.2).epsilon(0.1));
    CHECK(comps[0].hi == doctest::Approx(0.5).epsilon(0.1));
    CHECK(comps[1].lo == doctest::Approx(0.6).epsilon(0.1));
}

TEST_CASE("iteration") {
    auto f = Map1D::plateau_bump({0.0, 1.0}, 0.25, 0.09);
    CHECK(homeo::iterate(f, 0, 0.37) == 0.37);
    CHECK(homeo::iterate(f, -2, homeo::iterate(f, 2, 0.3), 1e-13) ==
          doctest::Approx(0.3).epsilon(1e-9));

    homeo::CircleMap rot = homeo::CircleMap::rotation(0.3);
    CHECK(rot.iterate_lift(0.1, 10) == doctest::Approx(3.1).epsilon(1e-12));
    CHECK(rot.iterate_lift(0.1, -10) == doctest::Approx(-2.9).epsilon(1e-9));
}

TEST_CASE("circle lift periodicity") {
    auto f = Map1D::plateau_bump({0.0, 1.0}, 0.25, 0.09);
    homeo::CircleMap cm(f);
    for (int i = 0; i <= 16; ++i) {
        double x = i / 16.0;
        CHECK(cm.eval_lift(x + 1.0) ==
              doctest::Approx(cm.eval_lift(x) + 1.0).epsilon(1e-12));
    }
}

TEST_CASE("variation estimates") {
    auto aff = Map1D::affine(1.0, 0.0, {0.0, 1.0});
    CHECK(homeo::variation_estimate(aff, 1, homeo::uniform_grid({0.0, 1.0}, 64)) ==
          0.0);
    // monotone derivative: variation telescopes to |f'(b) - f'(a)|
    auto moeb = Map1D::moebius(1.0, 1.0, {0.0, 0.5});
    double var =
        homeo::variation_estimate(moeb, 1, homeo::uniform_grid({0.0, 0.5}, 128));
    double expect = std::abs(*moeb.exact_deriv1(0.5) - *moeb.exact_deriv1(0.0));
    CHECK(var == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("monotonicity on grids for constructed maps") {
    for (auto m : {Map1D::plateau_bump({0.0, 1.0}, 0.25, 0.08),
                   Map1D::compactified_affine(2.0, 0.0),
                   Map1D::compactified_affine(1.0, 5.0),
                   Map1D::yoccoz(1.0, 3.0)}) {
        auto grid = homeo::uniform_grid(m.domain(), 257);
        CHECK(homeo::monotone_on_grid(m, grid));
        for (int i = 1; i < 16; ++i) {
            double x = m.domain().lo + m.domain().length() * i / 16.0;
            CHECK(homeo::derivative_k(m, x, 1).value >= -1e-8);
        }
    }
}

TEST_CASE("odd chart and compactified affine maps") {
    CHECK(homeo::odd_chart(0.25) == -4.0);
    CHECK(homeo::odd_chart(0.75) == 4.0);
    CHECK(homeo::odd_chart(0.5) == 0.0);
    CHECK(homeo::odd_chart_inv(-4.0) == doctest::Approx(0.25).epsilon(1e-12));

    // unit translation in chart coordinates behaves as x/(1-x) near 0
    auto e = Map1D::compactified_affine(1.0, 1.0);
    for (double x : {0.01, 0.05, 0.1}) {
        CHECK(e.eval(x) == doctest::Approx(x / (1.0 - x)).epsilon(1e-12));
    }
    // marker identity: translation by 8 carries 1/4 to 3/4 exactly
    auto t8 = Map1D::compactified_affine(1.0, 8.0);
    CHECK(t8.eval(0.25) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("boundary flatten: tangency and chart consistency") {
    auto inner = Map1D::compactified_affine(2.0, 0.0); // end slopes 1/2
    auto flat = Map1D::boundary_flatten(inner);
    CHECK(flat.eval(0.0) == 0.0);
    CHECK(flat.eval(1.0) == 1.0);
    // near 0 the flattened map is superpolynomially tangent to the identity
    double x = std::ldexp(1.0, -20);
    CHECK(std::abs(flat.eval(x) - x) / (x * x * x) < 1e-6);
    // but it is not the identity in the middle
    CHECK(std::abs(flat.eval(0.3) - 0.3) > 1e-6);
    // monotone through the seam between the log path and the direct path
    auto grid = homeo::uniform_grid({0.15, 0.3}, 200);
    CHECK(homeo::monotone_on_grid(flat, grid, 1e-12));
}
