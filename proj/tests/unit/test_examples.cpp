#include <gbcv/error.hpp>
#include <gbcv/examples.hpp>
#include <gbcv/twin.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gbcv;

TEST_CASE("BCV presets") {
    const BaseSurface h = bcv_base(-4);
    CHECK(h.delta()({0.5, 0}) == doctest::Approx(0.75));
    CHECK(h.domain().bounded());
    CHECK_FALSE(h.contains({1.0, 0.1}));
    CHECK_FALSE(bcv_base(1).domain().bounded());
    CHECK(bcv_base(0).delta().constant_value() == 1.0);
    const GBCVSpace s = bcv_space(1, -0.5, Signature::Lorentzian);
    CHECK(s.sigma() == -1);
    CHECK(s.tau()({3, 4}) == -0.5);
}

TEST_CASE("helicoid expression") {
    const Expr h = helicoid(2, 1);
    CHECK(h.eval({0, 1}) == doctest::Approx(std::numbers::pi + 1));
    CHECK(h.eval({1, 0}) == doctest::Approx(1));
}

TEST_CASE("rho profile without bundle curvature is arccosh") {
    ProfileOptions o;
    o.epsilon = 1e-3;
    const RadialProfile r = solve_profile(ProfileKind::Rho, 1, 0, 3, o);
    CHECK(r.t_begin() == doctest::Approx(1.001));
    for (auto [a, b] : {std::pair{1.5, 2.0}, std::pair{1.01, 2.9}})
        CHECK(std::abs((r.value(b) - r.value(a)) - (std::acosh(b) - std::acosh(a))) < 1e-8);
    // The startup integral makes rho(t) = arccosh(t / lambda) exactly.
    CHECK(std::abs(r.value(2.0) - std::acosh(2.0)) < 1e-8);
}

TEST_CASE("h profile without bundle curvature") {
    const double lambda = 0.7;
    ProfileOptions o;
    o.epsilon = 1e-3;
    const RadialProfile h = solve_profile(ProfileKind::H, lambda, 0, 2, o);
    auto exact = [&](double t) {
        return 0.5 * (t * std::sqrt(t * t - lambda * lambda) - lambda * lambda * std::acosh(t / lambda));
    };
    CHECK(std::abs((h.value(1.8) - h.value(0.9)) - (exact(1.8) - exact(0.9))) < 1e-8);
    ProfileOptions zero;
    zero.epsilon = 0.5;
    const RadialProfile h0 = solve_profile(ProfileKind::H, 0, 0, 3, zero);
    CHECK(h0.value(2.5) - h0.value(1.0) == doctest::Approx((2.5 * 2.5 - 1) / 2).epsilon(1e-10));
    CHECK_THROWS_AS(solve_profile(ProfileKind::Rho, 0, 0.5, 2), InputError);
}

TEST_CASE("the two profiles have reciprocal slopes") {
    std::vector<double> stops;
    for (int i = 1; i < 32; ++i) stops.push_back(1.2 + 1.8 * i / 32);
    ProfileOptions o;
    o.stops = stops;
    const RadialProfile h = solve_profile(ProfileKind::H, 1, 0.5, 3, o);
    const RadialProfile rho = solve_profile(ProfileKind::Rho, 1, 0.5, 3, o);
    for (double t : stops) {
        CHECK(std::abs(h.derivative(t) * rho.derivative(t) - 1) < 1e-8);
        CHECK(h.rhs(t) * rho.rhs(t) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("catenoid and helicoidal CMC surfaces") {
    const Domain ann = Domain::annulus(1.2, 3);
    const GraphSurface cat = catenoid_surface(1, 0.5, ann);
    const GraphSurface hel = helicoidal_cmc_surface(1, 0.5, ann);
    CHECK(cat.sigma() == 1);
    CHECK(hel.sigma() == -1);
    for (double r : {1.3, 2.0, 2.9})
        for (double th : {-2.0, 0.4, 3.0}) {
            const Point2 p{r * std::cos(th), r * std::sin(th)};
            CHECK(std::abs(cat.mean_curvature(p)) < 1e-6);
            CHECK(std::abs(hel.mean_curvature(p) - 0.5) < 1e-6);
        }
    CHECK_THROWS_AS(catenoid_surface(1, 0.5, Domain::annulus(0.9, 3)), InputError);
    CHECK_THROWS_AS(catenoid_surface(1, 0.5, Domain::disc(3)), InputError);
}

TEST_CASE("the catenoid twins to the helicoidal CMC surface") {
    const Domain ann = Domain::annulus(1.2, 3, -0.6, 0.6);
    const GraphSurface cat = catenoid_surface(1, 0.5, ann);
    const GraphSurface hel = helicoidal_cmc_surface(1, 0.5, ann);
    TwinOptions o;
    o.domain = ann;
    o.h = 1.0 / 32;
    o.mean_curvature = ScalarField::constant(0.0);
    o.potential.anchor = o.potential.p0 = {2, 0};
    o.potential.c0 = hel.height()({2, 0});
    const TwinPair pair = twin(cat, o);
    double d = 0;
    const GridSpec& s = pair.report.grid;
    for (std::size_t j = 0; j < s.ny; ++j)
        for (std::size_t i = 0; i < s.nx; ++i)
            if (ann.contains(s.node(i, j)))
                d = std::max(d, std::abs(pair.lorentzian.height()(s.node(i, j)) - hel.height()(s.node(i, j))));
    CHECK(d < 1e-7);
    CHECK(pair.report.conformality_max < 1e-10);
}
