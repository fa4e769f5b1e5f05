#pragma once

#include "gbcv/graph.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace gbcv {

/// P dx + Q dy on a domain. `radial`, when set, returns P x + Q y at a
/// point and is used for integration along segments from the origin. When
/// both coefficients carry first derivatives, so does the potential's
/// gradient.
struct OneForm {
    ScalarField p;
    ScalarField q;
    Domain domain;
    std::function<double(Point2)> radial;
};

struct ClosednessReport {
    double max_residual = 0.0;
    double rms_residual = 0.0;
    std::size_t nodes = 0;
    /// Exact partials of P and Q were used instead of central differences.
    bool pointwise = false;
    Grid residual;
};

/// Residual dQ/dx - dP/dy at the nodes of `spec`: from exact partials when
/// P and Q supply them, else central differences at interior nodes.
ClosednessReport closedness_residual(const OneForm& form, const GridSpec& spec);

/// Grid-backed mean curvature of `surface` at the nodes of `spec` inside
/// `domain` (pointwise divergence when exact derivatives exist, central
/// differences otherwise).
ScalarField mean_curvature_field(const GraphSurface& surface, const GridSpec& spec, const Domain& domain);

/// The 1-form whose potential is the twin height:
/// P = -s beta/omega + s y C', Q = s alpha/omega - s x C', with s the source
/// signature sign and C' the potential of `target`.
OneForm twin_form(const GraphSurface& source, const GBCVSpace& target);

struct PotentialOptions {
    Point2 p0;
    double c0 = 0.0;
    /// Start of every integration segment; must see the whole domain.
    Point2 anchor;
    double quad_tol = 1e-12;
};

/// Potential g with dg = form and g(p0) = c0, integrating along straight
/// segments from the anchor. The gradient of the result is the form itself.
/// Throws DomainError when a segment leaves the form's domain.
ScalarField integrate_exact_form(const OneForm& form, const PotentialOptions& opts = {});

struct PathCheck {
    double max_difference = 0.0;
    std::size_t points = 0;
};

/// Compares `potential` against integrals of `form` along axis-aligned
/// L-paths from the anchor, at the points whose L-path stays in the domain.
PathCheck verify_path_independence(const OneForm& form, const ScalarField& potential, const PotentialOptions& opts,
                                   std::span<const Point2> points);

struct TwinOptions {
    /// Common domain of both graphs.
    Domain domain = Domain::disc(0.5);
    /// Output grid spacing.
    double h = 1.0 / 128;
    /// Closed-form mean curvature of the source graph, when known.
    std::optional<ScalarField> mean_curvature;
    /// Refinement of the grid that carries a computed mean curvature.
    int refine = 2;
    PotentialOptions potential;
    double closedness_tol = 1e-6;
    /// Allowed deviation of the twin's mean curvature from the source's
    /// bundle curvature.
    double swap_tol = 1e-4;
    bool enforce = true;
};

struct TwinReport {
    GridSpec grid;
    std::size_t nodes = 0;
    double closedness_max = 0.0;
    double closedness_rms = 0.0;
    double path_max_difference = 0.0;
    std::size_t path_points = 0;
    double twin_relation_max = 0.0;
    double omega_product_max = 0.0;
    double margin_max = 0.0;
    double min_margin = 1.0;
    /// Twin mean curvature against the source bundle curvature, pointwise
    /// when the twin has exact second derivatives, else central differences.
    double swap_max = 0.0;
    bool swap_pointwise = false;
    /// The same comparison through central differences at spacing h.
    double swap_fd_max = 0.0;
    double conformality_max = 0.0;
};

struct TwinPair {
    GraphSurface riemannian;
    GraphSurface lorentzian;
    /// Mean curvature of the Riemannian graph = bundle curvature of the Lorentzian ambient.
    ScalarField mean_curvature;
    /// Bundle curvature of the Riemannian ambient = mean curvature of the Lorentzian graph.
    ScalarField bundle_curvature;
    TwinReport report;
    /// Closedness residual map on the output grid.
    Grid closedness;
    /// Mean curvature of the constructed graph on the output grid.
    Grid constructed_mean_curvature;
};

/// Riemannian graph of mean curvature H in E^3(M, tau) -> spacelike graph of
/// mean curvature tau in L^3(M, H).
TwinPair twin(const GraphSurface& f, const TwinOptions& opts = {});

/// Spacelike graph in L^3(M, H) -> graph in E^3(M, tau). `opts.mean_curvature`
/// is the mean curvature of g, i.e. the bundle curvature tau of the result.
TwinPair twin_inverse(const GraphSurface& g, const TwinOptions& opts = {});

struct ConformalityReport {
    /// Largest |I*_ij - I_ij / omega^2| relative to the largest entry of I*.
    double max_relative_deviation = 0.0;
    double max_angle_product_deviation = 0.0;
    std::size_t points = 0;
};

ConformalityReport verify_conformality(const TwinPair& pair, std::span<const Point2> points);

/// Output grid for a bounded domain at spacing h.
GridSpec grid_for(const Domain& domain, double h);

}  // namespace gbcv
