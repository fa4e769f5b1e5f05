#include <gbcv/error.hpp>
#include <gbcv/field.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gbcv;

TEST_CASE("covering grids are aligned with the origin") {
    const GridSpec s = GridSpec::covering(-0.5, 0.5, -0.25, 0.75, 0.125);
    CHECK(s.nx == 9);
    CHECK(s.ny == 9);
    CHECK(s.node(4, 2).x == 0.0);
    CHECK(s.node(4, 2).y == 0.0);
    GridSpec bad;
    bad.h = -1;
    bad.nx = bad.ny = 3;
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("domains") {
    CHECK(Domain::disc(1).contains({0.6, 0.6}));
    CHECK_FALSE(Domain::disc(1).contains({0.8, 0.8}));
    CHECK(Domain::rectangle(-1, 1, -1, 2).contains({0.5, 1.5}));
    CHECK_THROWS_AS(Domain::rectangle(0.5, 1, 0, 2), InputError);
    const Domain sector = Domain::annulus(1, 2, -0.5, 0.5);
    CHECK(sector.contains({1.5, 0.1}));
    CHECK_FALSE(sector.contains({-1.5, 0.0}));
    CHECK_FALSE(sector.contains({0.5, 0.0}));
    CHECK_FALSE(sector.star_shaped());
    const Domain petal = Domain::radial(parse("1 + 0.5*cos(3*t)", {"t"}));
    CHECK(petal.contains({1.4, 0.0}));
    CHECK_FALSE(petal.contains({-1.4, 0.0}));
    CHECK(Domain::disc(1).dilated(0.5).contains({1.4, 0.0}));
    CHECK_FALSE(Domain::plane().bounded());
    CHECK_THROWS_AS(Domain::disc(-1), InputError);
}

TEST_CASE("expression fields carry exact jets") {
    const ScalarField f = ScalarField::parse("x^2*y + sin(y)");
    const Jet j = f.jet({0.5, 0.3}, 2);
    CHECK(j.value == doctest::Approx(0.075 + std::sin(0.3)));
    CHECK(j.dx == doctest::Approx(0.3));
    CHECK(j.dy == doctest::Approx(0.25 + std::cos(0.3)));
    CHECK(j.dxx == doctest::Approx(0.6));
    CHECK(j.dxy == doctest::Approx(1.0));
    CHECK(j.dyy == doctest::Approx(-std::sin(0.3)));
    CHECK(f.max_order() >= 2);
    CHECK(ScalarField::constant(2.5).constant_value() == 2.5);
}

TEST_CASE("function-backed fields") {
    const ScalarField f([](Point2 p, int order) {
        Jet j{p.x * p.y};
        if (order >= 1) {
            j.dx = p.y;
            j.dy = p.x;
        }
        return j;
    }, 1, "xy");
    CHECK(f({2, 3}) == 6);
    CHECK(f.gradient({2, 3})[0] == 3);
    CHECK_THROWS_AS(f.jet({2, 3}, 2), DomainError);
}

TEST_CASE("sampling masks outside the domain") {
    const GridSpec s = GridSpec::covering(-1, 1, -1, 1, 0.25);
    const Grid g = sample(ScalarField::parse("x + y"), s, Domain::disc(0.6));
    for (std::size_t j = 0; j < s.ny; ++j)
        for (std::size_t i = 0; i < s.nx; ++i) {
            const Point2 p = s.node(i, j);
            CHECK(g.in(i, j) == Domain::disc(0.6).contains(p));
        }
    CHECK(g.count_in() == 21);
    CHECK_THROWS_AS(sample(ScalarField::parse("x"), s, Domain::annulus(5, 6)), DomainError);
}

TEST_CASE("bilinear interpolation reproduces bilinear functions") {
    const GridSpec s = GridSpec::covering(-1, 1, -1, 1, 0.25);
    const Grid g = sample(ScalarField::parse("1 + 2*x - y + 3*x*y"), s);
    for (Point2 p : {Point2{0.1, 0.37}, Point2{-0.93, 0.51}, Point2{0.5, 0.5}})
        CHECK(g.interpolate(p) == doctest::Approx(1 + 2 * p.x - p.y + 3 * p.x * p.y));
    CHECK_THROWS_AS(g.interpolate({3, 0}), DomainError);
}

TEST_CASE("finite differences converge at second order") {
    const ScalarField f = ScalarField::parse("sin(2*x) * cos(y)");
    double err[2];
    for (int k = 0; k < 2; ++k) {
        const double h = k == 0 ? 1.0 / 32 : 1.0 / 64;
        const GridSpec s = GridSpec::covering(-1, 1, -1, 1, h);
        const Grid dx = fd_partial(sample(f, s), Axis::X, 1);
        const Grid dyy = fd_partial(sample(f, s), Axis::Y, 2, Stencil::CentralOnly);
        err[k] = 0;
        for (std::size_t j = 0; j < s.ny; ++j)
            for (std::size_t i = 0; i < s.nx; ++i) {
                const Point2 p = s.node(i, j);
                if (dx.in(i, j)) err[k] = std::max(err[k], std::abs(dx.at(i, j) - 2 * std::cos(2 * p.x) * std::cos(p.y)));
                if (dyy.in(i, j)) err[k] = std::max(err[k], std::abs(dyy.at(i, j) + std::sin(2 * p.x) * std::cos(p.y)));
            }
        CHECK_FALSE(dyy.in(5, 0));
        CHECK(dx.in(0, 5));
    }
    CHECK(std::log2(err[0] / err[1]) > 1.9);
}

TEST_CASE("grid-backed fields differentiate numerically") {
    const GridSpec s = GridSpec::covering(-1, 1, -1, 1, 1.0 / 64);
    const ScalarField g(sample(ScalarField::parse("x*x + y"), s));
    CHECK_FALSE(g.exact_derivatives());
    CHECK(g({0.3, 0.2}) == doctest::Approx(0.29).epsilon(1e-3));
}
