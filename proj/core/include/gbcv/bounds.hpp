#pragma once

#include "gbcv/graph.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gbcv {

/// {r <= R(theta)} about the origin, with R a positive 2 pi-periodic
/// expression in `t`.
class RegularDomain {
public:
    static RegularDomain disc(double radius);
    /// Throws InputError when R is not positive at 720 sample angles.
    static RegularDomain polar(Expr boundary);

    double radius(double theta) const;
    double radius_derivative(double theta) const;
    const Expr& boundary() const noexcept { return r_; }
    std::optional<double> constant_radius() const { return r_.constant_value(); }
    /// Largest sampled R.
    double max_radius() const noexcept { return r_max_; }
    std::string describe() const;

private:
    explicit RegularDomain(Expr r);

    Expr r_;
    Expr dr_;
    double r_max_ = 0.0;
};

/// Euclidean radius of the geodesic disc of radius rho about the origin of
/// the curvature-kappa base 1 + kappa r^2 / 4.
double geodesic_disc_radius(double kappa, double rho);
RegularDomain geodesic_disc(double kappa, double rho);

/// Integral of delta^-2 over the domain (nested polar quadrature, relative tolerance tol).
double riemannian_area(const RegularDomain& d, const BaseSurface& base, double tol = 1e-10);
/// Integral of delta^-1 sqrt(R^2 + R'^2) d theta.
double riemannian_length(const RegularDomain& d, const BaseSurface& base, double tol = 1e-10);

struct CheegerMember {
    std::string domain;
    double area = 0.0;
    double length = 0.0;
    double quotient = 0.0;
};

/// Length/Area over a family; the minimum is an upper bound for Ch(M) only.
struct CheegerEstimate {
    std::vector<CheegerMember> members;
    std::vector<double> running_min;
    double upper_bound = 0.0;
};

CheegerEstimate cheeger_upper_bound(const BaseSurface& base, std::span<const RegularDomain> family,
                                    double tol = 1e-10);

/// K = delta (delta_xx + delta_yy) - |grad delta|^2 for the metric |dx|^2 / delta^2.
double gaussian_curvature(const BaseSurface& base, Point2 p);

struct FluxReport {
    /// Boundary integral of <G, eta> / sqrt(1 + |G|^2) with G = delta^2 (alpha, beta).
    double flux = 0.0;
    /// Integral of 2H over the domain, which equals the flux.
    double interior = 0.0;
    double area = 0.0;
    double length = 0.0;
    /// Minimum of H over a polar sample of the closed domain.
    double inf_h_sampled = 0.0;
    /// 2 inf H Area.
    double lower = 0.0;
    bool flux_below_length = false;
    bool chain_holds = false;
    double divergence_mismatch = 0.0;
};

/// Needs a Riemannian ambient, pointwise second derivatives of the height and
/// a graph defined on the closed domain.
FluxReport heinz_flux_check(const GraphSurface& surface, const RegularDomain& domain, double tol = 1e-10);

enum class Verdict {
    /// Closed-form Cheeger constant and exact inf |tau| satisfy the strict inequality.
    Certified,
    /// The sampled inf |tau| exceeds half the numerical Cheeger upper bound.
    ConsistentWithNonexistence,
    Inconclusive,
};
const char* to_string(Verdict v) noexcept;

struct CertificateReport {
    CheegerEstimate cheeger;
    double inf_tau_sampled = 0.0;
    std::size_t tau_samples = 0;
    /// Known value of Ch(M) for constant-curvature presets with kappa <= 0.
    std::optional<double> cheeger_exact;
    Verdict verdict = Verdict::Inconclusive;
    /// inf |tau| equals half the known Cheeger constant.
    bool boundary = false;
    std::string details;
};

/// Checks inf |tau| > Ch(M) / 2 for a Lorentzian space over the union of the family.
CertificateReport nonexistence_certificate(const GBCVSpace& space, std::span<const RegularDomain> family,
                                           double tol = 1e-10);

}  // namespace gbcv
