#pragma once

#include "gbcv/graph.hpp"
#include "gbcv/ode.hpp"

#include <span>
#include <vector>

namespace gbcv {

/// Base of curvature kappa: delta = 1 + kappa (x^2 + y^2) / 4 on the plane
/// (kappa >= 0) or on the disc of radius 2 / sqrt(-kappa).
BaseSurface bcv_base(double kappa);

/// E^3(kappa, tau0) or L^3(kappa, tau0) with the closed-form potential tau0 / delta.
GBCVSpace bcv_space(double kappa, double tau0, Signature signature);

/// mu1 * atan2(y, x) + mu2.
Expr helicoid(double mu1, double mu2);

enum class ProfileKind {
    /// dh/dt = sqrt((t^2 - lambda^2) / (tau^2 t^2 + 1))
    H,
    /// drho/dt = sqrt((tau^2 t^2 + 1) / (t^2 - lambda^2))
    Rho,
};

struct ProfileOptions {
    /// Start offset: the profile lives on [lambda + epsilon, T]. Negative
    /// selects 1e-3 lambda.
    double epsilon = -1.0;
    double tol = 1e-12;
    /// Radii that become solver nodes.
    std::vector<double> stops;
};

/// Solution of one of the catenoid ODEs with cubic Hermite dense output.
class RadialProfile {
public:
    RadialProfile(ProfileKind kind, double lambda, double tau, DenseSolution solution);

    ProfileKind kind() const noexcept { return kind_; }
    double lambda() const noexcept { return lambda_; }
    double tau() const noexcept { return tau_; }
    double t_begin() const { return sol_.t_begin(); }
    double t_end() const { return sol_.t_end(); }
    const DenseSolution& solution() const noexcept { return sol_; }

    double value(double t) const { return sol_.value(t); }
    /// Derivative of the interpolant.
    double derivative(double t) const { return sol_.derivative(t); }
    /// The ODE right-hand side and its t-derivative, evaluated exactly.
    double rhs(double t) const;
    double rhs_derivative(double t) const;

private:
    ProfileKind kind_;
    double lambda_, tau_;
    DenseSolution sol_;
};

/// Integrates from t = lambda + epsilon to T. h starts at 0; rho starts at
/// its integral from lambda, computed through t = lambda cosh(s). With
/// lambda = 0 the rho equation is singular at 0 and starts at rho(epsilon) = 0.
RadialProfile solve_profile(ProfileKind kind, double lambda, double tau, double T, const ProfileOptions& opts = {});

/// Half catenoid z = lambda rho(r), minimal in E^3(E^2, tau) = Nil^3 family.
/// `annulus` must be an annulus with inner radius > lambda.
GraphSurface catenoid_surface(double lambda, double tau, const Domain& annulus, double tol = 1e-12);

/// z = lambda atan2(y, x) + tau h(r), spacelike with mean curvature tau in L^3(E^2, 0).
GraphSurface helicoidal_cmc_surface(double lambda, double tau, const Domain& annulus, double tol = 1e-12);

}  // namespace gbcv
