// One line per acceptance criterion; exit status 1 if any criterion fails.
// Usage: gbcv_acceptance [path-to-gbcv-cli]

#include <gbcv/bounds.hpp>
#include <gbcv/error.hpp>
#include <gbcv/examples.hpp>
#include <gbcv/twin.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gbcv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt_line(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double max_over_grid(const GridSpec& spec, const Domain& d, const std::function<double(Point2)>& f) {
    double m = 0;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            if (d.contains(p)) m = std::max(m, std::abs(f(p)));
        }
    return m;
}

Point2 random_in_disc(std::mt19937_64& rng, double r_min, double r_max) {
    std::uniform_real_distribution<double> u(0, 1);
    const double r = std::sqrt(r_min * r_min + (r_max * r_max - r_min * r_min) * u(rng));
    const double t = 2 * std::numbers::pi * u(rng);
    return {r * std::cos(t), r * std::sin(t)};
}

// C1
Outcome bcv_potential() {
    std::mt19937_64 rng(11);
    double worst = 0;
    for (double kappa : {-1.0, 0.0, 1.0})
        for (double tau : {-1.0, 0.5, 2.0}) {
            const BaseSurface base = bcv_base(kappa);
            const double r_max = kappa < 0 ? 0.95 * 2 / std::sqrt(-kappa) : 3.0;
            for (int k = 0; k < 100; ++k) {
                const Point2 p = random_in_disc(rng, 0, r_max);
                const double delta = 1 + kappa / 4 * (p.x * p.x + p.y * p.y);
                const double c = calabi_potential(base, ScalarField::constant(tau), p, 1e-12);
                worst = std::max(worst, std::abs(c - tau / delta));
            }
        }
    return {worst <= 1e-9, fmt_line("max |C - tau0/delta| = %.2e over 9 (kappa, tau0) x 100 points (tol 1e-9)", worst)};
}

// C2
Outcome divergence_identity() {
    const BaseSurface base(Domain::disc(1.6), ScalarField::parse("1 + 0.1*x*y + 0.05*x^2 - 0.03*y^3"));
    const GBCVSpace s(base, ScalarField::parse("0.5 + 0.3*sin(x) - 0.2*y^2 + 0.1*x*y"), Signature::Riemannian);
    const DivergenceReport a = verify_divergence_identity(s, GridSpec::covering(-1, 1, -1, 1, 1.0 / 64));
    const DivergenceReport b = verify_divergence_identity(s, GridSpec::covering(-1, 1, -1, 1, 1.0 / 128));
    const double order_l2 = std::log2(a.l2_residual / b.l2_residual);
    const double order_max = std::log2(a.max_residual / b.max_residual);
    const DivergenceReport c =
        verify_divergence_identity(bcv_space(0, 0.7, Signature::Riemannian), GridSpec::covering(-1, 1, -1, 1, 1.0 / 64));
    return {order_l2 >= 1.9 && c.max_residual <= 1e-10,
            fmt_line("observed order %.3f (l2), %.3f (max) between h=1/64 and 1/128 (tol >= 1.9); constant C residual "
                     "%.1e (tol 1e-10)",
                     order_l2, order_max, c.max_residual)};
}

// C3
Outcome frame_orthonormality() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coef(-0.3, 0.3), box(-1, 1);
    double worst = 0;
    for (int pair = 0; pair < 5; ++pair) {
        const std::string delta = fmt_line("1 + %.3f*x + %.3f*y^2 + %.3f*x*y", coef(rng), coef(rng), coef(rng));
        const std::string tau = fmt_line("%.3f + %.3f*x*y - %.3f*y", coef(rng), coef(rng), coef(rng));
        for (Signature sig : {Signature::Riemannian, Signature::Lorentzian}) {
            const GBCVSpace s(BaseSurface(Domain::disc(1.2), ScalarField::parse(delta)), ScalarField::parse(tau), sig);
            std::mt19937_64 pts(100 + pair);
            for (int k = 0; k < 50; ++k) {
                const Point2 p = random_in_disc(pts, 0, 1.0);
                const Point3 q{p.x, p.y, box(pts)};
                const Mat3 g = s.metric_at(q);
                const auto e = s.frame_at(q);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        const double want = i != j ? 0.0 : (i == 2 ? s.sigma() : 1.0);
                        worst = std::max(worst, std::abs(inner(g, e[i], e[j]) - want));
                    }
            }
        }
    }
    return {worst <= 1e-9, fmt_line("max |gram - diag(1,1,sigma)| = %.2e over 5 pairs x 2 signatures x 50 points "
                                    "(tol 1e-9)",
                                    worst)};
}

// C4
Outcome helicoid_minimality() {
    const GBCVSpace nil = bcv_space(0, 0.5, Signature::Riemannian);
    const GBCVSpace radial(BaseSurface(Domain::disc(2), ScalarField::parse("1 + 0.3*(x^2 + y^2)")),
                           ScalarField::parse("0.5 + 0.2*(x^2 + y^2)"), Signature::Riemannian);
    std::mt19937_64 rng(4);
    double worst = 0;
    for (const GBCVSpace* s : {&nil, &radial}) {
        const GraphSurface h(*s, ScalarField(helicoid(0.7, -0.2)), Domain::annulus(0.1, 0.9));
        for (int k = 0; k < 30; ++k) worst = std::max(worst, std::abs(h.mean_curvature(random_in_disc(rng, 0.1, 0.9))));
    }
    return {worst <= 1e-8, fmt_line("max |H| = %.2e in Nil and a radial non-BCV space, 30 points each (tol 1e-8)", worst)};
}

struct TwinCase {
    std::string height;
    TwinPair pair;
    double involution = 0;
};

std::vector<TwinCase>& twin_cases() {
    static std::vector<TwinCase> cases = [] {
        std::vector<TwinCase> out;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> coef(-0.4, 0.4);
        const GBCVSpace e = bcv_space(-1, 0.5, Signature::Riemannian);
        for (int k = 0; k < 5; ++k) {
            const std::string u = fmt_line("%.4f*x + %.4f*y + %.4f*x^2 + %.4f*x*y + %.4f*y^2 + %.4f*x^3 + %.4f*x*y^2",
                                           coef(rng), coef(rng), coef(rng), coef(rng), coef(rng), coef(rng), coef(rng));
            const GraphSurface f(e, ScalarField::parse(u), Domain::disc(0.5));
            TwinOptions o;
            o.h = 1.0 / 128;
            o.enforce = false;
            TwinPair pair = twin(f, o);
            TwinOptions back = o;
            back.mean_curvature = ScalarField::constant(0.5);
            back.potential.c0 = f.height()({0, 0});
            const TwinPair round = twin_inverse(pair.lorentzian, back);
            const double inv = max_over_grid(pair.report.grid, o.domain, [&](Point2 p) {
                return round.riemannian.height()(p) - f.height()(p);
            });
            out.push_back({u, std::move(pair), inv});
        }
        return out;
    }();
    return cases;
}

// C5
Outcome twin_swap() {
    double margin = 0, swap = 0, swap_fd = 0, min_margin = 1;
    bool pointwise = true;
    for (const TwinCase& c : twin_cases()) {
        const TwinReport& r = c.pair.report;
        margin = std::max(margin, r.margin_max);
        swap = std::max(swap, r.swap_max);
        swap_fd = std::max(swap_fd, r.swap_fd_max);
        min_margin = std::min(min_margin, r.min_margin);
        pointwise = pointwise && r.swap_pointwise;
    }
    return {min_margin > kSpacelikeFloor && margin <= 1e-6 && swap <= 1e-5,
            fmt_line("5 cubic graphs over H^2(-1), tau=1/2, h=1/128: min margin %.3f (> 0), |margin - 1/omega^2| %.1e "
                     "(tol 1e-6), |H~ - tau| %.1e %s (tol 1e-5; central differences give %.1e)",
                     min_margin, margin, swap, pointwise ? "pointwise" : "FD", swap_fd)};
}

// C6
Outcome involution() {
    double worst = 0;
    for (const TwinCase& c : twin_cases()) worst = std::max(worst, c.involution);
    return {worst <= 1e-7, fmt_line("max |twin_inverse(twin(f)) - f| = %.2e on the C5 set (tol 1e-7)", worst)};
}

// C7
Outcome conformality() {
    std::vector<Point2> probe;
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) probe.push_back(random_in_disc(rng, 0, 0.49));

    const GraphSurface lin(bcv_space(0, 0, Signature::Riemannian), ScalarField::parse("0.6*x - 0.8*y"));
    TwinOptions o;
    o.mean_curvature = ScalarField::constant(0.0);
    const TwinPair lp = twin(lin, o);
    const ConformalityReport lc = verify_conformality(lp, probe);

    const Domain ann = Domain::annulus(1.2, 3, -0.6, 0.6);
    const GraphSurface cat = catenoid_surface(1, 0.5, ann);
    const GraphSurface hel = helicoidal_cmc_surface(1, 0.5, ann);
    TwinOptions co;
    co.domain = ann;
    co.h = 1.0 / 64;
    co.mean_curvature = ScalarField::constant(0.0);
    co.potential.anchor = co.potential.p0 = {2, 0};
    co.potential.c0 = hel.height()({2, 0});
    const TwinPair cp = twin(cat, co);
    std::vector<Point2> ring;
    for (int k = 0; k < 200; ++k) {
        Point2 p;
        do p = random_in_disc(rng, 1.21, 2.99);
        while (!ann.contains(p));
        ring.push_back(p);
    }
    const ConformalityReport cc = verify_conformality(cp, ring);
    const double g_vs_h = max_over_grid(cp.report.grid, ann, [&](Point2 p) { return cp.lorentzian.height()(p) - hel.height()(p); });
    const double lin_dev = std::max({lc.max_relative_deviation, lp.report.conformality_max});
    const double lin_ang = std::max(lc.max_angle_product_deviation, lp.report.omega_product_max);
    const double cat_dev = std::max({cc.max_relative_deviation, cp.report.conformality_max});
    const double cat_ang = std::max(cc.max_angle_product_deviation, cp.report.omega_product_max);
    return {lin_dev <= 1e-6 && lin_ang <= 1e-6 && cat_dev <= 1e-5 && cat_ang <= 1e-5,
            fmt_line("linear pair: I* vs I/omega^2 %.1e, angle product %.1e (tol 1e-6); catenoid/helicoid: %.1e, %.1e "
                     "(tol 1e-5); twin of catenoid vs helicoidal CMC graph %.1e",
                     lin_dev, lin_ang, cat_dev, cat_ang, g_vs_h)};
}

// C8
Outcome ode_pair() {
    ProfileOptions o;
    o.epsilon = 1e-3;
    const RadialProfile rho0 = solve_profile(ProfileKind::Rho, 1, 0, 4, o);
    double inc = 0;
    const std::vector<double> ts = {1.001, 1.01, 1.1, 1.5, 2.0, 3.0, 4.0};
    for (std::size_t a = 0; a < ts.size(); ++a)
        for (std::size_t b = a + 1; b < ts.size(); ++b)
            inc = std::max(inc, std::abs((rho0.value(ts[b]) - rho0.value(ts[a])) - (std::acosh(ts[b]) - std::acosh(ts[a]))));

    ProfileOptions shared;
    for (int k = 1; k < 64; ++k) shared.stops.push_back(1.05 + 2.9 * k / 64);
    const RadialProfile h = solve_profile(ProfileKind::H, 1, 0.5, 4, shared);
    const RadialProfile rho = solve_profile(ProfileKind::Rho, 1, 0.5, 4, shared);
    double prod = 0;
    for (double t : shared.stops) prod = std::max(prod, std::abs(h.derivative(t) * rho.derivative(t) - 1));

    const Domain ann = Domain::annulus(1.2, 3);
    const GraphSurface cat = catenoid_surface(1, 0.5, ann);
    const GraphSurface hel = helicoidal_cmc_surface(1, 0.5, ann);
    std::mt19937_64 rng(8);
    double hc = 0, hh = 0;
    for (int k = 0; k < 100; ++k) {
        const Point2 p = random_in_disc(rng, 1.21, 2.99);
        hc = std::max(hc, std::abs(cat.mean_curvature(p)));
        hh = std::max(hh, std::abs(hel.mean_curvature(p) - 0.5));
    }
    return {inc <= 1e-8 && prod <= 1e-8 && hc <= 1e-6 && hh <= 1e-6,
            fmt_line("arccosh increments %.1e, h'rho' - 1 %.1e at 63 shared nodes (tol 1e-8); catenoid |H| %.1e, "
                     "helicoidal |H - 1/2| %.1e (tol 1e-6)",
                     inc, prod, hc, hh)};
}

// C9
Outcome cheeger_numerics() {
    std::vector<RegularDomain> geo;
    for (int rho = 1; rho <= 8; ++rho) geo.push_back(geodesic_disc(-1, rho));
    geo.push_back(geodesic_disc(-1, 12));
    const CheegerEstimate e = cheeger_upper_bound(bcv_base(-1), geo, 1e-12);
    double coth_dev = 0;
    for (int rho = 1; rho <= 8; ++rho)
        coth_dev = std::max(coth_dev, std::abs(e.members[rho - 1].quotient - 1 / std::tanh(rho / 2.0)));
    const double q12 = e.members.back().quotient;
    std::vector<RegularDomain> discs;
    for (double r : {0.5, 1.0, 3.0, 10.0}) discs.push_back(RegularDomain::disc(r));
    const CheegerEstimate f = cheeger_upper_bound(bcv_base(0), discs);
    double flat_dev = 0;
    for (std::size_t k = 0; k < discs.size(); ++k)
        flat_dev = std::max(flat_dev, std::abs(f.members[k].quotient - 2 / *discs[k].constant_radius()));
    return {coth_dev <= 1e-6 && std::abs(q12 - 1) <= 0.01 && flat_dev <= 1e-9,
            fmt_line("|L/A - coth(rho/2)| %.1e for rho=1..8 (tol 1e-6); rho=12 quotient %.6f (within 1%% of 1); "
                     "Euclidean |L/A - 2/r| %.1e (tol 1e-9)",
                     coth_dev, q12, flat_dev)};
}

// C10
Outcome flux_inequality() {
    struct Run {
        GraphSurface surface;
        RegularDomain domain;
    };
    const GBCVSpace e3 = bcv_space(0, 0, Signature::Riemannian);
    const GBCVSpace h2r = bcv_space(-1, 0, Signature::Riemannian);
    const GBCVSpace nil = bcv_space(-1, 0.5, Signature::Riemannian);
    const GraphSurface cap(e3, ScalarField::parse("sqrt(4 - x^2 - y^2)"), Domain::disc(1.9));
    const GraphSurface cmc(h2r, ScalarField::parse("2/sqrt(1 - (x^2 + y^2)/4)"));
    const GraphSurface poly(nil, ScalarField::parse("0.3*x - 0.2*y^2 + 0.25*x*y + 0.1*x^3"));
    const RegularDomain petal = RegularDomain::polar(parse("0.6 + 0.15*cos(3*t)", {"t"}));
    const std::vector<Run> runs = {{cap, RegularDomain::disc(1.0)},  {cap, RegularDomain::disc(1.8)},
                                   {cap, petal},                    {cmc, geodesic_disc(-1, 1)},
                                   {cmc, geodesic_disc(-1, 3)},     {poly, RegularDomain::disc(0.7)},
                                   {poly, petal}};
    bool chain = true;
    double mismatch = 0;
    for (const Run& r : runs) {
        const FluxReport f = heinz_flux_check(r.surface, r.domain);
        chain = chain && f.chain_holds;
        mismatch = std::max(mismatch, f.divergence_mismatch);
    }
    return {chain && mismatch <= 1e-7,
            fmt_line("chain 2 inf H Area <= flux <= Length holds on %zu of %zu runs; max |boundary flux - interior "
                     "integral| %.1e (tol 1e-7)",
                     chain ? runs.size() : std::size_t{0}, runs.size(), mismatch)};
}

// C11
Outcome certificates() {
    std::vector<RegularDomain> geo, discs;
    for (int rho = 1; rho <= 8; ++rho) geo.push_back(geodesic_disc(-1, rho));
    for (int k = 0; k < 7; ++k) discs.push_back(RegularDomain::disc(std::ldexp(1.0, k)));
    const CertificateReport a = nonexistence_certificate(bcv_space(-1, 1, Signature::Lorentzian), geo);
    const CertificateReport b = nonexistence_certificate(bcv_space(0, 0.5, Signature::Lorentzian), discs);
    const CertificateReport c = nonexistence_certificate(bcv_space(-1, 0.5, Signature::Lorentzian), geo);
    return {a.verdict == Verdict::Certified && b.verdict == Verdict::Certified && c.boundary &&
                c.verdict == Verdict::Inconclusive,
            fmt_line("(kappa=-1, tau=1) %s; (kappa=0, tau=1/2) %s; (kappa=-1, tau=1/2) %s%s", to_string(a.verdict),
                     to_string(b.verdict), to_string(c.verdict), c.boundary ? " at the boundary" : "")};
}

// C12
Outcome determinism(const char* cli) {
    if (!cli) return {false, "no CLI path given"};
    const fs::path dir = fs::temp_directory_path() / "gbcv_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "twin.json")
        << R"({"space": {"preset": "bcv", "kappa": -1, "tau": 0.5},
               "surface": {"height": "0.3*x - 0.2*y + 0.4*x*y", "domain": {"kind": "disc", "params": [0.5]}},
               "family": {"kind": "geodesic", "radii": [0.2, 0.4, 0.8]}})";
    std::ofstream(dir / "potential.json") << R"({"space": {"delta": "1 + 0.1*x^2", "tau": "0.5 + 0.2*y"}})";
    const std::vector<std::string> commands = {"twin --job " + (dir / "twin.json").string() + " --svg contour",
                                               "potential --job " + (dir / "potential.json").string() + " --svg",
                                               "bounds --job " + (dir / "twin.json").string(),
                                               "example catenoid --lambda 1 --tau 0.5"};
    std::size_t files = 0;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        for (const char* run : {"a", "b"}) {
            const fs::path out = dir / (std::to_string(k) + run);
            const std::string line = std::string(cli) + " " + commands[k] + " --out " + out.string();
            if (std::system(line.c_str()) != 0) return {false, "command failed: " + commands[k]};
        }
        for (const auto& entry : fs::directory_iterator(dir / (std::to_string(k) + "a"))) {
            auto slurp = [](const fs::path& p) {
                std::ifstream f(p, std::ios::binary);
                std::stringstream ss;
                ss << f.rdbuf();
                return ss.str();
            };
            const fs::path twin = dir / (std::to_string(k) + "b") / entry.path().filename();
            if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin))
                return {false, "outputs differ: " + entry.path().filename().string()};
            ++files;
        }
    }
    return {true, fmt_line("%zu output files byte-identical across repeated runs of %zu commands", files, commands.size())};
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"BCV Calabi potential golden test", bcv_potential},
        {"divergence identity convergence", divergence_identity},
        {"frame orthonormality", frame_orthonormality},
        {"helicoid minimality", helicoid_minimality},
        {"twin swap", twin_swap},
        {"involution", involution},
        {"conformality", conformality},
        {"ODE pair", ode_pair},
        {"Cheeger numerics", cheeger_numerics},
        {"flux inequality", flux_inequality},
        {"certificates", certificates},
        {"determinism", [cli] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
