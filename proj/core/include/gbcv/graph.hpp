#pragma once

#include "gbcv/space.hpp"

#include <array>
#include <optional>

namespace gbcv {

/// Margins at or below this are treated as degenerate (not spacelike).
inline constexpr double kSpacelikeFloor = 1e-12;

struct Spacelike {
    bool spacelike = true;
    /// 1 - delta^2 (alpha^2 + beta^2) for Lorentzian ambients, 1 for Riemannian.
    double margin = 1.0;
};

struct GraphPointData {
    Point2 p;
    double alpha = 0.0;
    double beta = 0.0;
    double omega = 1.0;
    double mean_curvature = 0.0;
    double angle = 1.0;
    double margin = 1.0;
    Mat2 induced{};
};

/// V = (alpha, beta) / omega and its first partials; 2H = delta^2 div V.
struct FluxJet {
    double alpha = 0.0, beta = 0.0, omega = 1.0;
    double vx = 0.0, vy = 0.0;
    double vx_x = 0.0, vx_y = 0.0, vy_x = 0.0, vy_y = 0.0;
    double delta = 1.0;
};

/// Per-node fields of a graph over a grid; nodes outside the graph domain,
/// or without derivative support, are masked out.
struct GraphGrids {
    Grid alpha, beta, omega, angle, margin, mean_curvature;
};

enum class MeanCurvatureRoute {
    /// Pointwise divergence with exact derivatives when available, else grid.
    Auto,
    Pointwise,
    /// Sample (alpha, beta) / omega and take central differences.
    Grid,
};

/// Graph z = u(x, y) over a subdomain of the base, with the upward normal.
/// Sign conventions follow the ambient signature: alpha = u_x + s y C,
/// beta = u_y - s x C, omega = sqrt(1 + s delta^2 (alpha^2 + beta^2)) with
/// s = +1 (Riemannian) or -1 (Lorentzian).
class GraphSurface {
public:
    /// `domain` is the graph domain; the plane means "the whole base domain".
    GraphSurface(GBCVSpace ambient, ScalarField height, Domain domain = Domain::plane());

    const GBCVSpace& ambient() const noexcept { return ambient_; }
    const ScalarField& height() const noexcept { return height_; }
    const Domain& domain() const noexcept { return domain_; }
    double sigma() const noexcept { return ambient_.sigma(); }
    bool contains(Point2 p) const;

    std::array<double, 2> alpha_beta(Point2 p) const;
    double omega(Point2 p) const;
    /// (alpha, beta, omega) in one evaluation; requires a spacelike point.
    std::array<double, 3> alpha_beta_omega(Point2 p) const;
    Spacelike is_spacelike(Point2 p) const;

    /// V and its derivatives from exact second derivatives of u.
    FluxJet flux(Point2 p) const;

    /// 2H = delta^2 (d/dx(alpha/omega) + d/dy(beta/omega)), from exact
    /// derivatives. Needs second derivatives of u and first derivatives of C.
    double mean_curvature(Point2 p) const;
    /// The same quantity as div_M(G / sqrt(1 + s |G|^2)) / 2 with
    /// G = delta^2 (alpha, beta), expanded independently.
    double mean_curvature_div_m(Point2 p) const;
    bool pointwise_mean_curvature_available() const noexcept;

    /// Components of the upward unit normal in the orthonormal frame.
    Vec3 unit_normal(Point2 p) const;
    /// 1/omega (Riemannian) or 1/omega~ (Lorentzian).
    double angle_function(Point2 p) const;
    Mat2 induced_metric(Point2 p) const;

    GraphPointData point_data(Point2 p, bool with_mean_curvature = true) const;

    GraphGrids evaluate(const GridSpec& spec, MeanCurvatureRoute route = MeanCurvatureRoute::Auto) const;
    Grid mean_curvature_grid(const GridSpec& spec, MeanCurvatureRoute route = MeanCurvatureRoute::Auto) const;

private:
    struct Local;
    Local local(Point2 p, int order) const;
    void require_spacelike(Point2 p, double margin) const;

    GBCVSpace ambient_;
    ScalarField height_;
    Domain domain_;
};

}  // namespace gbcv
