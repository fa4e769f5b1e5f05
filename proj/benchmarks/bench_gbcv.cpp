#include <gbcv/bounds.hpp>
#include <gbcv/examples.hpp>
#include <gbcv/twin.hpp>

#include <benchmark/benchmark.h>

using namespace gbcv;

static void BM_ExprEval(benchmark::State& state) {
    const Expr e = parse("0.3*x^2 - 0.2*x*y + sin(y)*exp(-x)");
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e.eval({x, 0.4}));
        x += 1e-9;
    }
}
BENCHMARK(BM_ExprEval);

static void BM_ExprDerivative(benchmark::State& state) {
    const Expr e = parse("atan2(y, x) * sqrt(1 + x^2 + y^2) / (1 + 0.25*(x^2 + y^2))");
    for (auto _ : state) benchmark::DoNotOptimize(e.derivative("x").derivative("y"));
}
BENCHMARK(BM_ExprDerivative);

static void BM_CalabiPotentialJet(benchmark::State& state) {
    const BaseSurface b(Domain::plane(), ScalarField::parse("1 + 0.1*(x^2 + y^2)"));
    const ScalarField tau = ScalarField::parse("0.5 + 0.3*x - 0.2*x*y");
    for (auto _ : state) benchmark::DoNotOptimize(calabi_potential_jet(b, tau, {0.3, -0.2}, 2, 1e-12));
}
BENCHMARK(BM_CalabiPotentialJet);

static void BM_MeanCurvaturePointwise(benchmark::State& state) {
    const GraphSurface g(bcv_space(-1, 0.5, Signature::Riemannian), ScalarField::parse("0.3*x^2 - 0.2*x*y + 0.1*y"));
    for (auto _ : state) benchmark::DoNotOptimize(g.mean_curvature({0.2, 0.1}));
}
BENCHMARK(BM_MeanCurvaturePointwise);

static void BM_MeanCurvatureGrid(benchmark::State& state) {
    const GraphSurface g(bcv_space(-1, 0.5, Signature::Riemannian), ScalarField::parse("0.3*x^2 - 0.2*x*y + 0.1*y"),
                         Domain::disc(0.8));
    const GridSpec spec = GridSpec::covering(-0.8, 0.8, -0.8, 0.8, 1.0 / state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(g.mean_curvature_grid(spec, MeanCurvatureRoute::Grid));
}
BENCHMARK(BM_MeanCurvatureGrid)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Twin(benchmark::State& state) {
    const GraphSurface f(bcv_space(-1, 0.5, Signature::Riemannian),
                         ScalarField::parse("0.3*x - 0.2*y + 0.4*x*y - 0.1*x^2 + 0.25*y^3"));
    TwinOptions o;
    o.h = 1.0 / state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(twin(f, o));
}
BENCHMARK(BM_Twin)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RadialProfile(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_profile(ProfileKind::Rho, 1, 0.5, 4));
}
BENCHMARK(BM_RadialProfile)->Unit(benchmark::kMillisecond);

static void BM_CheegerFamily(benchmark::State& state) {
    std::vector<RegularDomain> family;
    for (int rho = 1; rho <= 8; ++rho) family.push_back(geodesic_disc(-1, rho));
    const BaseSurface base = bcv_base(-1);
    for (auto _ : state) benchmark::DoNotOptimize(cheeger_upper_bound(base, family));
}
BENCHMARK(BM_CheegerFamily)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
