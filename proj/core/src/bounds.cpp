#include "gbcv/bounds.hpp"

#include "gbcv/error.hpp"
#include "gbcv/quadrature.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gbcv {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

QuadOptions relative(double tol) {
    if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    QuadOptions q;
    q.rel_tol = tol;
    q.abs_tol = 1e-6 * tol * tol;
    return q;
}

double inv_delta2(const BaseSurface& base, Point2 p) {
    const double d = base.delta_jet(p, 0).value;
    return 1.0 / (d * d);
}

void require_inside(const RegularDomain& d, const BaseSurface& base) {
    for (int k = 0; k < 720; ++k) {
        const double th = kTwoPi * k / 720;
        const double r = d.radius(th);
        if (!base.contains({r * std::cos(th), r * std::sin(th)})) {
            throw DomainError(fmt::format("domain {} leaves the base domain near theta = {:.4g}", d.describe(), th));
        }
    }
}

// Integral over the domain of f(p) r dr dtheta.
template <class F>
double polar_integral(const RegularDomain& d, F&& f, const QuadOptions& q) {
    return integrate(
               [&](double th) {
                   const double c = std::cos(th), s = std::sin(th);
                   return integrate([&](double r) { return f(Point2{r * c, r * s}) * r; }, 0.0, d.radius(th), q)
                       .value;
               },
               0.0, kTwoPi, q)
        .value;
}

}  // namespace

RegularDomain::RegularDomain(Expr r) : r_(std::move(r)), dr_(r_.derivative("t")) {
    for (int k = 0; k < 720; ++k) {
        const double v = r_.eval({kTwoPi * k / 720});
        if (!(v > 0.0)) throw InputError(fmt::format("domain boundary R(t) = {} is not positive", r_.str()));
        r_max_ = std::max(r_max_, v);
    }
}

RegularDomain RegularDomain::disc(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("disc radius must be positive");
    return RegularDomain(Expr::constant(radius, {"t"}));
}

RegularDomain RegularDomain::polar(Expr boundary) {
    if (boundary.variables().size() != 1 || boundary.variables()[0] != "t") {
        throw InputError("a domain boundary must be an expression in t alone");
    }
    return RegularDomain(std::move(boundary));
}

double RegularDomain::radius(double theta) const { return r_.eval({theta}); }
double RegularDomain::radius_derivative(double theta) const { return dr_.eval({theta}); }

std::string RegularDomain::describe() const {
    if (const auto c = constant_radius()) return fmt::format("disc(r={:.17g})", *c);
    return fmt::format("polar(R(t)={})", r_.str());
}

double geodesic_disc_radius(double kappa, double rho) {
    if (!(rho > 0.0)) throw InputError("geodesic radius must be positive");
    if (kappa == 0.0) return rho;
    if (kappa < 0.0) {
        const double k = std::sqrt(-kappa);
        return 2.0 / k * std::tanh(rho * k / 2);
    }
    const double k = std::sqrt(kappa);
    if (!(rho * k < std::numbers::pi)) throw InputError("geodesic radius reaches the antipodal point");
    return 2.0 / k * std::tan(rho * k / 2);
}

RegularDomain geodesic_disc(double kappa, double rho) { return RegularDomain::disc(geodesic_disc_radius(kappa, rho)); }

double riemannian_area(const RegularDomain& d, const BaseSurface& base, double tol) {
    require_inside(d, base);
    return polar_integral(d, [&](Point2 p) { return inv_delta2(base, p); }, relative(tol));
}

double riemannian_length(const RegularDomain& d, const BaseSurface& base, double tol) {
    require_inside(d, base);
    return integrate(
               [&](double th) {
                   const double r = d.radius(th), dr = d.radius_derivative(th);
                   const double delta = base.delta_jet({r * std::cos(th), r * std::sin(th)}, 0).value;
                   return std::hypot(r, dr) / delta;
               },
               0.0, kTwoPi, relative(tol))
        .value;
}

CheegerEstimate cheeger_upper_bound(const BaseSurface& base, std::span<const RegularDomain> family, double tol) {
    if (family.empty()) throw InputError("the Cheeger family is empty");
    CheegerEstimate est;
    est.upper_bound = std::numeric_limits<double>::infinity();
    for (const RegularDomain& d : family) {
        CheegerMember m;
        m.domain = d.describe();
        m.area = riemannian_area(d, base, tol);
        m.length = riemannian_length(d, base, tol);
        m.quotient = m.length / m.area;
        est.upper_bound = std::min(est.upper_bound, m.quotient);
        est.running_min.push_back(est.upper_bound);
        est.members.push_back(std::move(m));
    }
    return est;
}

double gaussian_curvature(const BaseSurface& base, Point2 p) {
    if (base.delta().max_order() < 2) {
        throw DomainError("Gaussian curvature needs second derivatives of delta");
    }
    const Jet d = base.delta_jet(p, 2);
    return d.value * (d.dxx + d.dyy) - (d.dx * d.dx + d.dy * d.dy);
}

FluxReport heinz_flux_check(const GraphSurface& surface, const RegularDomain& domain, double tol) {
    if (surface.sigma() < 0) throw InputError("the flux check needs a graph in a Riemannian ambient");
    const BaseSurface& base = surface.ambient().base();
    require_inside(domain, base);
    const QuadOptions q = relative(tol);
    FluxReport rep;
    rep.area = riemannian_area(domain, base, tol);
    rep.length = riemannian_length(domain, base, tol);

    rep.flux = integrate(
                   [&](double th) {
                       const double r = domain.radius(th), dr = domain.radius_derivative(th);
                       const double c = std::cos(th), s = std::sin(th);
                       const auto abo = surface.alpha_beta_omega({r * c, r * s});
                       return (abo[0] * (dr * s + r * c) + abo[1] * (r * s - dr * c)) / abo[2];
                   },
                   0.0, kTwoPi, q)
                   .value;
    QuadOptions qi = q;
    qi.abs_tol = std::max(q.abs_tol, 1e-3 * tol * std::max(1.0, std::abs(rep.flux)));
    rep.interior = polar_integral(
        domain, [&](Point2 p) { return 2 * surface.mean_curvature(p) * inv_delta2(base, p); }, qi);

    rep.inf_h_sampled = std::numeric_limits<double>::infinity();
    constexpr int kRadial = 16, kAngular = 64;
    for (int a = 0; a < kAngular; ++a) {
        const double th = kTwoPi * a / kAngular;
        const double rb = domain.radius(th);
        for (int k = 0; k <= kRadial; ++k) {
            const double r = rb * k / kRadial;
            rep.inf_h_sampled = std::min(rep.inf_h_sampled, surface.mean_curvature({r * std::cos(th), r * std::sin(th)}));
        }
    }
    rep.lower = 2 * rep.inf_h_sampled * rep.area;
    const double slack = tol * std::max(1.0, std::abs(rep.flux));
    rep.flux_below_length = rep.flux <= rep.length + slack;
    rep.chain_holds = rep.lower <= rep.flux + slack && rep.flux_below_length;
    rep.divergence_mismatch = std::abs(rep.flux - rep.interior);
    return rep;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Certified: return "CERTIFIED";
        case Verdict::ConsistentWithNonexistence: return "CONSISTENT_WITH_NONEXISTENCE";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

CertificateReport nonexistence_certificate(const GBCVSpace& space, std::span<const RegularDomain> family,
                                           double tol) {
    if (space.signature() != Signature::Lorentzian) {
        throw InputError("non-existence certificates concern Lorentzian spaces");
    }
    CertificateReport rep;
    rep.cheeger = cheeger_upper_bound(space.base(), family, tol);

    rep.inf_tau_sampled = std::numeric_limits<double>::infinity();
    for (const RegularDomain& d : family) {
        constexpr int kRadial = 16, kAngular = 64;
        for (int a = 0; a < kAngular; ++a) {
            const double th = kTwoPi * a / kAngular;
            const double rb = d.radius(th);
            for (int k = 0; k <= kRadial; ++k) {
                const double r = rb * k / kRadial;
                rep.inf_tau_sampled = std::min(rep.inf_tau_sampled, std::abs(space.tau()({r * std::cos(th), r * std::sin(th)})));
                ++rep.tau_samples;
            }
        }
    }

    const auto& bcv = space.bcv();
    if (bcv && bcv->kappa <= 0.0) {
        const double ch = std::sqrt(std::max(0.0, -bcv->kappa));
        rep.cheeger_exact = ch;
        const double t = std::abs(bcv->tau), half = 0.5 * ch;
        if (std::abs(t - half) <= 1e-12 * std::max(1.0, half)) {
            rep.boundary = true;
            rep.details = fmt::format("|tau| = {:.17g} equals Ch(M)/2 for the curvature {:.17g} base: the strict "
                                      "inequality fails and the threshold is sharp",
                                      t, bcv->kappa);
        } else if (t > half) {
            rep.verdict = Verdict::Certified;
            rep.details = fmt::format("|tau| = {:.17g} > Ch(M)/2 = {:.17g} (closed-form Cheeger constant of the "
                                      "curvature {:.17g} base)",
                                      t, half, bcv->kappa);
        } else {
            rep.details = fmt::format("|tau| = {:.17g} < Ch(M)/2 = {:.17g}: hypothesis not met", t, half);
        }
        return rep;
    }
    if (bcv) {
        rep.details = "positive base curvature: no closed-form Cheeger constant is used";
        return rep;
    }
    if (rep.inf_tau_sampled > 0.5 * rep.cheeger.upper_bound) {
        rep.verdict = Verdict::ConsistentWithNonexistence;
        rep.details = fmt::format("sampled inf |tau| = {:.17g} exceeds half the Cheeger upper bound {:.17g}; the "
                                  "infimum is sampled, so this is not a certificate",
                                  rep.inf_tau_sampled, rep.cheeger.upper_bound);
    } else {
        rep.details = fmt::format("sampled inf |tau| = {:.17g} does not exceed half the Cheeger upper bound {:.17g}",
                                  rep.inf_tau_sampled, rep.cheeger.upper_bound);
    }
    return rep;
}

}  // namespace gbcv
