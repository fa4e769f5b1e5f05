#include <gbcv/error.hpp>
#include <gbcv/examples.hpp>
#include <gbcv/space.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gbcv;

namespace {

BaseSurface flat() { return BaseSurface(Domain::plane(), ScalarField::constant(1.0)); }

double gram_deviation(const GBCVSpace& s, Point3 q) {
    const Mat3 g = s.metric_at(q);
    const auto e = s.frame_at(q);
    double dev = 0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const double want = i != k ? 0.0 : (i == 2 ? s.sigma() : 1.0);
            dev = std::max(dev, std::abs(inner(g, e[i], e[k]) - want));
        }
    return dev;
}

}  // namespace

TEST_CASE("signatures") {
    CHECK(parse_signature("lorentzian") == Signature::Lorentzian);
    CHECK(parse_signature("E") == Signature::Riemannian);
    CHECK_THROWS_AS(parse_signature("euclid"), InputError);
    CHECK(sign_of(Signature::Lorentzian) == -1);
}

TEST_CASE("potential of polynomial curvature") {
    // tau = x gives C = 2x/3; tau = x^2 + y^2 gives C = r^2 / 2.
    const BaseSurface b = flat();
    CHECK(calabi_potential(b, ScalarField::parse("x"), {0.9, -0.4}, 1e-13) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(calabi_potential(b, ScalarField::parse("x^2 + y^2"), {0.3, 0.4}, 1e-13) ==
          doctest::Approx(0.125).epsilon(1e-12));
    const Jet j = calabi_potential_jet(b, ScalarField::parse("x^2 + y^2"), {0.3, 0.4}, 2, 1e-13);
    CHECK(j.dx == doctest::Approx(0.3));
    CHECK(j.dy == doctest::Approx(0.4));
    CHECK(j.dxx == doctest::Approx(1.0));
    CHECK(j.dxy == doctest::Approx(0.0));
}

TEST_CASE("BCV potential equals tau over delta") {
    for (double kappa : {-1.0, 0.0, 1.0}) {
        const BaseSurface b = bcv_base(kappa);
        for (Point2 p : {Point2{0.3, -0.2}, Point2{-1.1, 0.6}, Point2{0.0, 0.0}}) {
            const double delta = 1 + kappa / 4 * (p.x * p.x + p.y * p.y);
            CHECK(std::abs(calabi_potential(b, ScalarField::constant(2.0), p, 1e-12) - 2.0 / delta) < 1e-10);
        }
    }
    const GBCVSpace s = bcv_space(-1, 0.5, Signature::Riemannian);
    CHECK(s.has_closed_form_potential());
    CHECK(s.bcv()->kappa == -1);
    CHECK(s.calabi({1, 1}) == doctest::Approx(1.0));
    CHECK_FALSE(s.base().contains({2, 0.1}));
}

TEST_CASE("divergence identity converges") {
    const BaseSurface b(Domain::disc(1.5), ScalarField::parse("1 + 0.1*x*y + 0.05*x^2"));
    const GBCVSpace s(b, ScalarField::parse("0.5 + 0.3*sin(x) - 0.2*y^2"), Signature::Riemannian);
    double l2[2];
    for (int k = 0; k < 2; ++k) {
        const double h = k == 0 ? 1.0 / 16 : 1.0 / 32;
        l2[k] = verify_divergence_identity(s, GridSpec::covering(-1, 1, -1, 1, h)).l2_residual;
    }
    CHECK(std::log2(l2[0] / l2[1]) > 1.9);
    const DivergenceReport flat_rep =
        verify_divergence_identity(bcv_space(0, 0.7, Signature::Lorentzian), GridSpec::covering(-1, 1, -1, 1, 0.1));
    CHECK(flat_rep.max_residual < 1e-12);
}

TEST_CASE("metric and frame") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const BaseSurface b(Domain::disc(2), ScalarField::parse("1 + 0.2*x - 0.1*y^2"));
    for (Signature sig : {Signature::Riemannian, Signature::Lorentzian}) {
        const GBCVSpace s(b, ScalarField::parse("0.3 + x*y"), sig);
        for (int k = 0; k < 20; ++k) {
            const Point3 q{u(rng), u(rng), u(rng)};
            CHECK(gram_deviation(s, q) < 1e-12);
            const Mat3 g = s.metric_at(q);
            CHECK(g[2][2] == s.sigma());
            CHECK(g[0][1] == g[1][0]);
        }
    }
}

TEST_CASE("derived spaces") {
    const GBCVSpace s = bcv_space(0, 0.5, Signature::Riemannian);
    const GBCVSpace l = s.with_signature(Signature::Lorentzian);
    CHECK(l.sigma() == -1);
    CHECK(l.calabi({0.2, 0.1}) == doctest::Approx(0.5));
    const GBCVSpace t = s.with_tau(ScalarField::parse("x"));
    CHECK(t.calabi({0.9, 0}) == doctest::Approx(0.6));
    CHECK_FALSE(t.has_closed_form_potential());
}

TEST_CASE("tabulated potential") {
    const BaseSurface b(Domain::plane(), ScalarField::parse("1 + 0.1*(x^2 + y^2)"));
    const ScalarField tau = ScalarField::parse("0.4 + 0.3*x - 0.2*x*y");
    const GBCVSpace direct(b, tau, Signature::Riemannian);
    const GBCVSpace cached = direct.with_tau_cached(tau, Domain::disc(1), 1.0 / 64);
    CHECK(cached.calabi_order() >= 1);
    double dv = 0, dg = 0;
    for (Point2 p : {Point2{0.3, 0.2}, Point2{-0.6, 0.5}, Point2{0.0, -0.9}, Point2{0.01, 0.0}}) {
        const Jet a = direct.calabi_jet(p, 1), c = cached.calabi_jet(p, 1);
        dv = std::max(dv, std::abs(a.value - c.value));
        dg = std::max({dg, std::abs(a.dx - c.dx), std::abs(a.dy - c.dy)});
    }
    CHECK(dv < 1e-6);
    CHECK(dg < 1e-4);
    CHECK_THROWS_AS(direct.with_tau_cached(tau, Domain::annulus(0.5, 1), 0.1), InputError);
}
