#include "gbcv/graph.hpp"

#include "gbcv/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace gbcv {

struct GraphSurface::Local {
    double delta = 1.0, ddx = 0.0, ddy = 0.0;
    double c = 0.0;
    double alpha = 0.0, beta = 0.0;
    double ax = 0.0, ay = 0.0, bx = 0.0, by = 0.0;
    double s = 0.0;       // alpha^2 + beta^2
    double w2 = 1.0;      // 1 + sigma delta^2 s
};

GraphSurface::GraphSurface(GBCVSpace ambient, ScalarField height, Domain domain)
    : ambient_(std::move(ambient)), height_(std::move(height)), domain_(std::move(domain)) {}

bool GraphSurface::contains(Point2 p) const { return domain_.contains(p) && ambient_.base().contains(p); }

GraphSurface::Local GraphSurface::local(Point2 p, int order) const {
    if (!contains(p)) {
        throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the graph domain", p.x, p.y));
    }
    if (height_.max_order() < order) {
        throw DomainError(fmt::format("height function '{}' has no pointwise derivatives of order {}",
                                      height_.describe(), order));
    }
    const double sg = sigma();
    Local l;
    const Jet d = ambient_.base().delta_jet(p, order - 1);
    const Jet c = ambient_.calabi_jet(p, order - 1);
    Jet u;
    if (order == 1) {
        const auto g = height_.gradient(p);
        u.dx = g[0];
        u.dy = g[1];
    } else {
        u = height_.jet(p, order);
    }
    l.delta = d.value;
    l.ddx = d.dx;
    l.ddy = d.dy;
    l.c = c.value;
    l.alpha = u.dx + sg * p.y * c.value;
    l.beta = u.dy - sg * p.x * c.value;
    if (order >= 2) {
        l.ax = u.dxx + sg * p.y * c.dx;
        l.ay = u.dxy + sg * (c.value + p.y * c.dy);
        l.bx = u.dxy - sg * (c.value + p.x * c.dx);
        l.by = u.dyy - sg * p.x * c.dy;
    }
    l.s = l.alpha * l.alpha + l.beta * l.beta;
    l.w2 = 1.0 + sg * l.delta * l.delta * l.s;
    return l;
}

void GraphSurface::require_spacelike(Point2 p, double margin) const {
    if (sigma() < 0 && !(margin > kSpacelikeFloor)) {
        throw NumericalError(fmt::format("graph is not spacelike at ({:.17g}, {:.17g}): margin {:.3g}", p.x, p.y,
                                         margin));
    }
}

std::array<double, 2> GraphSurface::alpha_beta(Point2 p) const {
    const Local l = local(p, 1);
    return {l.alpha, l.beta};
}

Spacelike GraphSurface::is_spacelike(Point2 p) const {
    const Local l = local(p, 1);
    if (sigma() > 0) return {true, 1.0};
    return {l.w2 > kSpacelikeFloor, l.w2};
}

double GraphSurface::omega(Point2 p) const {
    const Local l = local(p, 1);
    require_spacelike(p, l.w2);
    return std::sqrt(l.w2);
}

std::array<double, 3> GraphSurface::alpha_beta_omega(Point2 p) const {
    const Local l = local(p, 1);
    require_spacelike(p, l.w2);
    return {l.alpha, l.beta, std::sqrt(l.w2)};
}

bool GraphSurface::pointwise_mean_curvature_available() const noexcept {
    return height_.max_order() >= 2 && ambient_.calabi_order() >= 1 && ambient_.base().delta().max_order() >= 1;
}

FluxJet GraphSurface::flux(Point2 p) const {
    const Local l = local(p, 2);
    require_spacelike(p, l.w2);
    const double sg = sigma();
    const double w = std::sqrt(l.w2);
    const double d2 = l.delta * l.delta;
    const double wx = sg * (l.delta * l.ddx * l.s + d2 * (l.alpha * l.ax + l.beta * l.bx)) / w;
    const double wy = sg * (l.delta * l.ddy * l.s + d2 * (l.alpha * l.ay + l.beta * l.by)) / w;
    FluxJet f;
    f.alpha = l.alpha;
    f.beta = l.beta;
    f.omega = w;
    f.delta = l.delta;
    f.vx = l.alpha / w;
    f.vy = l.beta / w;
    f.vx_x = (l.ax * w - l.alpha * wx) / l.w2;
    f.vx_y = (l.ay * w - l.alpha * wy) / l.w2;
    f.vy_x = (l.bx * w - l.beta * wx) / l.w2;
    f.vy_y = (l.by * w - l.beta * wy) / l.w2;
    return f;
}

double GraphSurface::mean_curvature(Point2 p) const {
    const FluxJet f = flux(p);
    return 0.5 * f.delta * f.delta * (f.vx_x + f.vy_y);
}

double GraphSurface::mean_curvature_div_m(Point2 p) const {
    const Local l = local(p, 2);
    require_spacelike(p, l.w2);
    const double sg = sigma();
    // G = delta^2 (alpha, beta); |G|^2_M = delta^2 (alpha^2 + beta^2).
    const double d = l.delta, d2 = d * d;
    const double gx = d2 * l.alpha, gy = d2 * l.beta;
    const double gx_x = 2 * d * l.ddx * l.alpha + d2 * l.ax;
    const double gy_y = 2 * d * l.ddy * l.beta + d2 * l.by;
    const double n2 = d2 * l.s;
    const double n2_x = 2 * d * l.ddx * l.s + 2 * d2 * (l.alpha * l.ax + l.beta * l.bx);
    const double n2_y = 2 * d * l.ddy * l.s + 2 * d2 * (l.alpha * l.ay + l.beta * l.by);
    const double w = std::sqrt(1 + sg * n2);
    const double w_x = 0.5 * sg * n2_x / w, w_y = 0.5 * sg * n2_y / w;
    const double x1 = gx / w, x2 = gy / w;
    const double x1_x = gx_x / w - gx * w_x / (w * w);
    const double x2_y = gy_y / w - gy * w_y / (w * w);
    // Divergence for the metric (dx^2 + dy^2) / delta^2.
    const double div_m = x1_x + x2_y - 2 * (x1 * l.ddx + x2 * l.ddy) / d;
    return 0.5 * div_m;
}

Vec3 GraphSurface::unit_normal(Point2 p) const {
    const Local l = local(p, 1);
    require_spacelike(p, l.w2);
    const double w = std::sqrt(l.w2), sg = sigma();
    return {-sg * l.alpha * l.delta / w, -sg * l.beta * l.delta / w, 1.0 / w};
}

double GraphSurface::angle_function(Point2 p) const {
    const Local l = local(p, 1);
    require_spacelike(p, l.w2);
    return 1.0 / std::sqrt(l.w2);
}

Mat2 GraphSurface::induced_metric(Point2 p) const {
    const Local l = local(p, 1);
    require_spacelike(p, l.w2);
    const double sg = sigma(), id = 1.0 / (l.delta * l.delta);
    return {{{id + sg * l.alpha * l.alpha, sg * l.alpha * l.beta}, {sg * l.alpha * l.beta, id + sg * l.beta * l.beta}}};
}

GraphPointData GraphSurface::point_data(Point2 p, bool with_mean_curvature) const {
    const Local l = local(p, 1);
    require_spacelike(p, l.w2);
    GraphPointData out;
    out.p = p;
    out.alpha = l.alpha;
    out.beta = l.beta;
    out.omega = std::sqrt(l.w2);
    out.angle = 1.0 / out.omega;
    out.margin = sigma() < 0 ? l.w2 : 1.0;
    out.induced = induced_metric(p);
    if (with_mean_curvature) out.mean_curvature = mean_curvature(p);
    return out;
}

GraphGrids GraphSurface::evaluate(const GridSpec& spec, MeanCurvatureRoute route) const {
    spec.validate();
    GraphGrids out{Grid(spec), Grid(spec), Grid(spec), Grid(spec), Grid(spec), Grid(spec)};
    const double sg = sigma();

    std::optional<Grid> ux, uy;
    if (height_.max_order() < 1) {
        const Grid& hg = *height_.grid();
        const auto& hs = hg.spec();
        const double tol = 1e-12 * std::max(1.0, spec.h);
        if (hs.nx != spec.nx || hs.ny != spec.ny || std::abs(hs.h - spec.h) > tol ||
            std::abs(hs.origin.x - spec.origin.x) > tol || std::abs(hs.origin.y - spec.origin.y) > tol) {
            throw InputError("a grid-backed height function can only be evaluated on its own grid");
        }
        ux = fd_partial(hg, Axis::X, 1);
        uy = fd_partial(hg, Axis::Y, 1);
    }

    Grid vx(spec), vy(spec);
    for (std::size_t j = 0; j < spec.ny; ++j) {
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            if (!contains(p)) continue;
            double a = 0.0, b = 0.0, dl = 0.0;
            if (ux) {
                if (!ux->in(i, j) || !uy->in(i, j)) continue;
                const double c = ambient_.calabi(p);
                a = ux->at(i, j) + sg * p.y * c;
                b = uy->at(i, j) - sg * p.x * c;
                dl = ambient_.base().delta_jet(p, 0).value;
            } else {
                const Local l = local(p, 1);
                a = l.alpha;
                b = l.beta;
                dl = l.delta;
            }
            const double w2 = 1.0 + sg * dl * dl * (a * a + b * b);
            out.margin.at(i, j) = sg < 0 ? w2 : 1.0;
            out.margin.set_in(i, j, true);
            if (sg < 0 && !(w2 > kSpacelikeFloor)) continue;
            const double w = std::sqrt(w2);
            auto put = [&](Grid& g, double v) {
                g.at(i, j) = v;
                g.set_in(i, j, true);
            };
            put(out.alpha, a);
            put(out.beta, b);
            put(out.omega, w);
            put(out.angle, 1.0 / w);
            put(vx, a / w);
            put(vy, b / w);
        }
    }
    if (out.alpha.count_in() == 0) throw DomainError("no grid node lies in the graph domain");

    const bool pointwise = route == MeanCurvatureRoute::Pointwise ||
                           (route == MeanCurvatureRoute::Auto && !ux && pointwise_mean_curvature_available());
    if (pointwise) {
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                if (!out.alpha.in(i, j)) continue;
                out.mean_curvature.at(i, j) = mean_curvature(spec.node(i, j));
                out.mean_curvature.set_in(i, j, true);
            }
    } else {
        const Grid dvx = fd_partial(vx, Axis::X, 1, Stencil::CentralOnly);
        const Grid dvy = fd_partial(vy, Axis::Y, 1, Stencil::CentralOnly);
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                if (!dvx.in(i, j) || !dvy.in(i, j)) continue;
                const double dl = ambient_.base().delta_jet(spec.node(i, j), 0).value;
                out.mean_curvature.at(i, j) = 0.5 * dl * dl * (dvx.at(i, j) + dvy.at(i, j));
                out.mean_curvature.set_in(i, j, true);
            }
    }
    return out;
}

Grid GraphSurface::mean_curvature_grid(const GridSpec& spec, MeanCurvatureRoute route) const {
    return evaluate(spec, route).mean_curvature;
}

}  // namespace gbcv
