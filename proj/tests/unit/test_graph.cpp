#include <gbcv/error.hpp>
#include <gbcv/examples.hpp>
#include <gbcv/graph.hpp>

#include <doctest.h>

#include <cmath>

using namespace gbcv;

namespace {

const Point2 kPoints[] = {{0.1, 0.2}, {-0.35, 0.4}, {0.5, -0.1}, {0.0, -0.6}, {0.45, 0.45}};

double max_mean_curvature_error(const GraphSurface& g, double expected) {
    double e = 0;
    for (Point2 p : kPoints) e = std::max(e, std::abs(g.mean_curvature(p) - expected));
    return e;
}

}  // namespace

TEST_CASE("spheres and hyperbolic caps") {
    const GBCVSpace e3 = bcv_space(0, 0, Signature::Riemannian);
    CHECK(max_mean_curvature_error(GraphSurface(e3, ScalarField::parse("sqrt(4 - x^2 - y^2)")), -0.5) < 1e-12);
    const GBCVSpace h2r = bcv_space(-1, 0, Signature::Riemannian);
    CHECK(max_mean_curvature_error(GraphSurface(h2r, ScalarField::parse("2/sqrt(1 - (x^2 + y^2)/4)")), 0.5) < 1e-12);
    const GBCVSpace l3 = bcv_space(0, 0, Signature::Lorentzian);
    const GraphSurface hyperboloid(l3, ScalarField::parse("sqrt(1 + x^2 + y^2)"));
    for (Point2 p : kPoints) CHECK(std::abs(std::abs(hyperboloid.mean_curvature(p)) - 1) < 1e-12);
}

TEST_CASE("helicoids are minimal") {
    for (double tau : {0.0, 0.5, -1.0}) {
        const GraphSurface h(bcv_space(0, tau, Signature::Riemannian), ScalarField(helicoid(0.8, 0.3)),
                             Domain::annulus(0.1, 0.9));
        CHECK(max_mean_curvature_error(h, 0) < 1e-12);
    }
}

TEST_CASE("spacelike test and angle") {
    const GBCVSpace l3 = bcv_space(0, 0, Signature::Lorentzian);
    const GraphSurface slow(l3, ScalarField::parse("0.6*x"));
    CHECK(slow.is_spacelike({0.2, 0.1}).spacelike);
    CHECK(slow.is_spacelike({0.2, 0.1}).margin == doctest::Approx(0.64));
    CHECK(slow.angle_function({0, 0}) == doctest::Approx(1 / 0.8));
    const GraphSurface fast(l3, ScalarField::parse("1.5*x"));
    CHECK_FALSE(fast.is_spacelike({0.2, 0.1}).spacelike);
    CHECK_THROWS_AS(fast.mean_curvature({0.2, 0.1}), NumericalError);
    const GraphSurface riem(bcv_space(0, 0, Signature::Riemannian), ScalarField::parse("0.6*x"));
    CHECK(riem.angle_function({0, 0}) == doctest::Approx(1 / std::sqrt(1.36)));
}

TEST_CASE("normal and induced metric agree with the ambient metric") {
    for (Signature sig : {Signature::Riemannian, Signature::Lorentzian}) {
        const GBCVSpace s = GBCVSpace(BaseSurface(Domain::disc(2), ScalarField::parse("1 + 0.1*x - 0.05*y^2")),
                                      ScalarField::parse("0.4 + 0.2*y"), sig);
        const GraphSurface g(s, ScalarField::parse("0.2*x*y - 0.1*x^2 + 0.3*y"));
        for (Point2 p : kPoints) {
            const Jet u = g.height().jet(p, 1);
            const Mat3 m = s.metric_at({p.x, p.y, u.value});
            const Vec3 tx{1, 0, u.dx}, ty{0, 1, u.dy};
            const Vec3 c = g.unit_normal(p);
            const auto e = s.frame_at({p.x, p.y, u.value});
            Vec3 n{};
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) n[k] += c[i] * e[i][k];
            CHECK(std::abs(inner(m, n, tx)) < 1e-12);
            CHECK(std::abs(inner(m, n, ty)) < 1e-12);
            CHECK(inner(m, n, n) == doctest::Approx(s.sigma()));
            const Mat2 I = g.induced_metric(p);
            CHECK(I[0][0] == doctest::Approx(inner(m, tx, tx)));
            CHECK(I[0][1] == doctest::Approx(inner(m, tx, ty)));
            CHECK(I[1][1] == doctest::Approx(inner(m, ty, ty)));
            CHECK(inner(m, n, {0, 0, 1}) == doctest::Approx(s.sigma() * g.angle_function(p)));
            const double h = g.mean_curvature(p);
            CHECK(std::abs(h - g.mean_curvature_div_m(p)) < 1e-10);
        }
    }
}

TEST_CASE("grid route converges to the pointwise value") {
    const GBCVSpace s = bcv_space(-1, 0.5, Signature::Riemannian);
    const GraphSurface g(s, ScalarField::parse("0.3*x^2 - 0.2*x*y + 0.1*y"), Domain::disc(0.8));
    double err[2];
    for (int k = 0; k < 2; ++k) {
        const GridSpec spec = GridSpec::covering(-0.8, 0.8, -0.8, 0.8, k == 0 ? 1.0 / 32 : 1.0 / 64);
        const Grid fd = g.mean_curvature_grid(spec, MeanCurvatureRoute::Grid);
        const Grid pw = g.mean_curvature_grid(spec, MeanCurvatureRoute::Pointwise);
        err[k] = 0;
        for (std::size_t n = 0; n < fd.values().size(); ++n)
            if (fd.mask()[n] && pw.mask()[n]) err[k] = std::max(err[k], std::abs(fd.values()[n] - pw.values()[n]));
    }
    CHECK(err[1] < 1e-3);
    CHECK(std::log2(err[0] / err[1]) > 1.8);
}

TEST_CASE("evaluate masks the graph domain") {
    const GraphSurface g(bcv_space(0, 0, Signature::Riemannian), ScalarField::parse("x"), Domain::disc(0.5));
    const GraphGrids grids = g.evaluate(GridSpec::covering(-1, 1, -1, 1, 0.25));
    CHECK(grids.mean_curvature.count_in() == grids.alpha.count_in());
    CHECK(grids.alpha.count_in() == 9);
    CHECK(grids.omega.max_abs() == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(g.mean_curvature({0.9, 0}), DomainError);
}
