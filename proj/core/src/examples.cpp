#include "gbcv/examples.hpp"

#include "gbcv/error.hpp"
#include "gbcv/quadrature.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gbcv {

BaseSurface bcv_base(double kappa) {
    if (!std::isfinite(kappa)) throw InputError("kappa must be finite");
    const Expr x = Expr::variable("x"), y = Expr::variable("y");
    const Expr delta = kappa == 0.0 ? Expr::constant(1.0) : 1.0 + (kappa / 4) * (x * x + y * y);
    const Domain domain = kappa < 0 ? Domain::disc(2.0 / std::sqrt(-kappa)) : Domain::plane();
    return BaseSurface(domain, ScalarField(delta));
}

GBCVSpace bcv_space(double kappa, double tau0, Signature signature) {
    if (!std::isfinite(tau0)) throw InputError("tau must be finite");
    BaseSurface base = bcv_base(kappa);
    const Expr delta = *base.delta().expression();
    const Expr calabi = tau0 == 0.0 ? Expr::constant(0.0) : tau0 / delta;
    GBCVSpace s = GBCVSpace::with_potential(std::move(base), ScalarField::constant(tau0), signature,
                                            ScalarField(calabi));
    s.tag_bcv({kappa, tau0});
    return s;
}

Expr helicoid(double mu1, double mu2) {
    if (mu1 == 0.0) return Expr::constant(mu2);
    const Expr theta = Expr::atan2(Expr::variable("y"), Expr::variable("x"));
    return mu2 == 0.0 ? mu1 * theta : mu1 * theta + mu2;
}

RadialProfile::RadialProfile(ProfileKind kind, double lambda, double tau, DenseSolution solution)
    : kind_(kind), lambda_(lambda), tau_(tau), sol_(std::move(solution)) {}

double RadialProfile::rhs(double t) const {
    const double n = tau_ * tau_ * t * t + 1.0, d = t * t - lambda_ * lambda_;
    if (!(d > 0.0)) throw DomainError(fmt::format("profile evaluated at t = {:.17g} <= lambda", t));
    return kind_ == ProfileKind::H ? std::sqrt(d / n) : std::sqrt(n / d);
}

double RadialProfile::rhs_derivative(double t) const {
    const double n = tau_ * tau_ * t * t + 1.0, d = t * t - lambda_ * lambda_;
    const double dn = 2 * tau_ * tau_ * t, dd = 2 * t;
    const double f = rhs(t);
    return kind_ == ProfileKind::H ? (dd * n - d * dn) / (2 * n * n * f) : (dn * d - n * dd) / (2 * d * d * f);
}

RadialProfile solve_profile(ProfileKind kind, double lambda, double tau, double T, const ProfileOptions& opts) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be a finite non-negative number");
    if (!std::isfinite(tau)) throw InputError("tau must be finite");
    if (!(opts.tol > 0.0)) throw InputError("profile tolerance must be positive");
    double eps = opts.epsilon < 0.0 ? 1e-3 * lambda : opts.epsilon;
    if (!(eps > 0.0)) throw InputError("profile start offset must be positive (set epsilon when lambda = 0)");
    const double t0 = lambda + eps;
    if (!(T > t0)) throw InputError(fmt::format("profile end {:.6g} must exceed the start {:.6g}", T, t0));

    double y0 = 0.0;
    if (kind == ProfileKind::Rho && lambda > 0.0) {
        const double s0 = std::acosh(t0 / lambda);
        y0 = quad_1d(
            [&](double s) {
                const double c = lambda * std::cosh(s);
                return std::sqrt(tau * tau * c * c + 1.0);
            },
            0.0, s0, 1e-15);
    }
    const double l2 = lambda * lambda, t2 = tau * tau;
    OdeRhs rhs = [kind, l2, t2](double t, std::span<const double>, std::span<double> dy) {
        const double n = t2 * t * t + 1.0, d = t * t - l2;
        dy[0] = kind == ProfileKind::H ? std::sqrt(d / n) : std::sqrt(n / d);
    };
    OdeOptions oo;
    oo.rtol = opts.tol;
    oo.atol = 1e-2 * opts.tol;
    std::vector<double> stops;
    for (double s : opts.stops)
        if (s > t0 && s < T) stops.push_back(s);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    return RadialProfile(kind, lambda, tau, solve_dopri5(rhs, t0, {y0}, T, oo, stops));
}

namespace {

struct AnnulusRadii {
    double inner, outer;
};

AnnulusRadii annulus_radii(const Domain& d, double lambda) {
    if (d.kind() != Domain::Kind::Annulus) throw InputError("radial examples are defined on annuli");
    const double r_in = d.params()[0], r_out = d.params()[1];
    if (!(r_in > lambda)) {
        throw InputError(fmt::format("annulus inner radius {:.6g} must exceed lambda = {:.6g}", r_in, lambda));
    }
    return {r_in, r_out};
}

RadialProfile profile_for(ProfileKind kind, double lambda, double tau, AnnulusRadii r, double tol) {
    ProfileOptions po;
    po.tol = tol;
    po.epsilon = lambda > 0.0 ? std::min(1e-3 * lambda, 0.5 * (r.inner - lambda)) : r.inner;
    return solve_profile(kind, lambda, tau, r.outer, po);
}

// Jet of F(r) at p given F, F', F''.
Jet radial_jet(Point2 p, double f, double f1, double f2, int order) {
    Jet j;
    j.value = f;
    if (order < 1) return j;
    const double r = std::hypot(p.x, p.y);
    const double cx = p.x / r, cy = p.y / r;
    j.dx = f1 * cx;
    j.dy = f1 * cy;
    if (order < 2) return j;
    j.dxx = f2 * cx * cx + f1 * (1.0 - cx * cx) / r;
    j.dxy = (f2 - f1 / r) * cx * cy;
    j.dyy = f2 * cy * cy + f1 * (1.0 - cy * cy) / r;
    return j;
}

}  // namespace

GraphSurface catenoid_surface(double lambda, double tau, const Domain& annulus, double tol) {
    const AnnulusRadii r = annulus_radii(annulus, lambda);
    const auto rho = std::make_shared<const RadialProfile>(profile_for(ProfileKind::Rho, lambda, tau, r, tol));
    ScalarField height(
        [rho, lambda](Point2 p, int order) {
            const double t = std::hypot(p.x, p.y);
            const double f1 = order >= 1 ? rho->rhs(t) : 0.0;
            const double f2 = order >= 2 ? rho->rhs_derivative(t) : 0.0;
            Jet j = radial_jet(p, rho->value(t), f1, f2, order);
            j.value *= lambda;
            j.dx *= lambda;
            j.dy *= lambda;
            j.dxx *= lambda;
            j.dxy *= lambda;
            j.dyy *= lambda;
            return j;
        },
        2, fmt::format("catenoid(lambda={}, tau={})", lambda, tau));
    return GraphSurface(bcv_space(0.0, tau, Signature::Riemannian), std::move(height), annulus);
}

GraphSurface helicoidal_cmc_surface(double lambda, double tau, const Domain& annulus, double tol) {
    const AnnulusRadii r = annulus_radii(annulus, lambda);
    const auto h = std::make_shared<const RadialProfile>(profile_for(ProfileKind::H, lambda, tau, r, tol));
    ScalarField height(
        [h, lambda, tau](Point2 p, int order) {
            const double t = std::hypot(p.x, p.y);
            const double f1 = order >= 1 ? h->rhs(t) : 0.0;
            const double f2 = order >= 2 ? h->rhs_derivative(t) : 0.0;
            Jet j = radial_jet(p, h->value(t), f1, f2, order);
            j.value *= tau;
            j.dx *= tau;
            j.dy *= tau;
            j.dxx *= tau;
            j.dxy *= tau;
            j.dyy *= tau;
            const double r2 = t * t;
            j.value += lambda * std::atan2(p.y, p.x);
            if (order >= 1) {
                j.dx -= lambda * p.y / r2;
                j.dy += lambda * p.x / r2;
            }
            if (order >= 2) {
                j.dxx += lambda * 2 * p.x * p.y / (r2 * r2);
                j.dxy += lambda * (p.y * p.y - p.x * p.x) / (r2 * r2);
                j.dyy -= lambda * 2 * p.x * p.y / (r2 * r2);
            }
            return j;
        },
        2, fmt::format("cmc-helicoid(lambda={}, tau={})", lambda, tau));
    return GraphSurface(bcv_space(0.0, 0.0, Signature::Lorentzian), std::move(height), annulus);
}

}  // namespace gbcv
