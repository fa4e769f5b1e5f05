#include "gbcv/field.hpp"

#include "gbcv/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gbcv {

// ---------------------------------------------------------------------------
// GridSpec / Grid

void GridSpec::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("grid spacing must be positive");
    if (nx == 0 || ny == 0) throw InputError("grid must have at least one node in each direction");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) throw InputError("grid origin must be finite");
}

GridSpec GridSpec::covering(double xmin, double xmax, double ymin, double ymax, double h) {
    if (!(h > 0.0)) throw InputError("grid spacing must be positive");
    if (!(xmax >= xmin) || !(ymax >= ymin)) throw InputError("empty bounding box");
    // Lattice indices are rounded outward so the origin stays a node.
    const double i0 = std::floor(xmin / h + 1e-9);
    const double i1 = std::ceil(xmax / h - 1e-9);
    const double j0 = std::floor(ymin / h + 1e-9);
    const double j1 = std::ceil(ymax / h - 1e-9);
    GridSpec s;
    s.origin = {i0 * h, j0 * h};
    s.h = h;
    s.nx = static_cast<std::size_t>(i1 - i0) + 1;
    s.ny = static_cast<std::size_t>(j1 - j0) + 1;
    return s;
}

Grid::Grid(GridSpec spec, double fill, bool masked_in) : spec_(spec) {
    spec_.validate();
    values_.assign(spec_.size(), fill);
    mask_.assign(spec_.size(), masked_in ? 1 : 0);
}

std::size_t Grid::count_in() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

double Grid::interpolate(Point2 p) const {
    const double fx = (p.x - spec_.origin.x) / spec_.h;
    const double fy = (p.y - spec_.origin.y) / spec_.h;
    const double nxm = static_cast<double>(spec_.nx - 1);
    const double nym = static_cast<double>(spec_.ny - 1);
    constexpr double snap = 1e-9;
    if (fx < -snap || fy < -snap || fx > nxm + snap || fy > nym + snap) {
        throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the grid", p.x, p.y));
    }
    auto clampi = [](double f, double maxv) {
        double c = std::clamp(std::floor(f), 0.0, std::max(0.0, maxv - 1.0));
        return static_cast<std::size_t>(c);
    };
    // Exactly on a node: no neighbours needed.
    const double rx = std::round(fx), ry = std::round(fy);
    if (std::abs(fx - rx) < snap && std::abs(fy - ry) < snap) {
        auto i = static_cast<std::size_t>(std::clamp(rx, 0.0, nxm));
        auto j = static_cast<std::size_t>(std::clamp(ry, 0.0, nym));
        if (!in(i, j)) throw DomainError(fmt::format("node ({}, {}) is outside the grid mask", i, j));
        return at(i, j);
    }
    const std::size_t i = spec_.nx > 1 ? clampi(fx, nxm) : 0;
    const std::size_t j = spec_.ny > 1 ? clampi(fy, nym) : 0;
    const std::size_t i1 = std::min(i + 1, spec_.nx - 1);
    const std::size_t j1 = std::min(j + 1, spec_.ny - 1);
    if (!in(i, j) || !in(i1, j) || !in(i, j1) || !in(i1, j1)) {
        throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the grid mask", p.x, p.y));
    }
    const double tx = std::clamp(fx - static_cast<double>(i), 0.0, 1.0);
    const double ty = std::clamp(fy - static_cast<double>(j), 0.0, 1.0);
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i1, j) + (1 - tx) * ty * at(i, j1) +
           tx * ty * at(i1, j1);
}

double Grid::max_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (mask_[k]) m = std::max(m, std::abs(values_[k]));
    return m;
}

double Grid::rms() const {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (mask_[k]) {
            s += values_[k] * values_[k];
            ++n;
        }
    return n ? std::sqrt(s / static_cast<double>(n)) : 0.0;
}

// ---------------------------------------------------------------------------
// Domain

Domain Domain::plane() { return Domain{}; }

Domain Domain::disc(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("disc radius must be positive");
    Domain d;
    d.kind_ = Kind::Disc;
    d.params_ = {radius};
    return d;
}

Domain Domain::rectangle(double xmin, double xmax, double ymin, double ymax) {
    if (!(xmin < 0.0 && 0.0 < xmax && ymin < 0.0 && 0.0 < ymax)) {
        throw InputError("rectangle domains must contain the origin in their interior");
    }
    Domain d;
    d.kind_ = Kind::Rectangle;
    d.params_ = {xmin, xmax, ymin, ymax};
    return d;
}

Domain Domain::radial(Expr r_max) {
    if (r_max.variables() != std::vector<std::string>{"t"}) {
        throw InputError("radial bound must be an expression in the single variable t");
    }
    // Star-shapedness of {r < R(t)} needs R > 0 for every direction.
    constexpr int samples = 720;
    double rmax = 0.0;
    for (int k = 0; k < samples; ++k) {
        double t = 2.0 * std::numbers::pi * k / samples;
        double r = r_max.eval({t});
        if (!(r > 0.0)) throw InputError(fmt::format("radial bound is not positive at t = {:.6g}", t));
        rmax = std::max(rmax, r);
    }
    Domain d;
    d.kind_ = Kind::Radial;
    d.params_ = {rmax};
    d.radial_ = std::move(r_max);
    return d;
}

Domain Domain::annulus(double r_in, double r_out, double theta_min, double theta_max) {
    if (!(r_in >= 0.0 && r_out > r_in)) throw InputError("annulus needs 0 <= r_in < r_out");
    if (!(theta_min < theta_max)) throw InputError("annulus sector needs theta_min < theta_max");
    Domain d;
    d.kind_ = Kind::Annulus;
    d.params_ = {r_in, r_out, theta_min, theta_max};
    return d;
}

bool Domain::contains(Point2 p) const {
    switch (kind_) {
    case Kind::Plane: return std::isfinite(p.x) && std::isfinite(p.y);
    case Kind::Disc: return p.x * p.x + p.y * p.y < params_[0] * params_[0];
    case Kind::Rectangle: return p.x > params_[0] && p.x < params_[1] && p.y > params_[2] && p.y < params_[3];
    case Kind::Radial: {
        const double r = std::hypot(p.x, p.y);
        if (r == 0.0) return true;
        return r < radial_->eval({std::atan2(p.y, p.x)});
    }
    case Kind::Annulus: {
        const double r = std::hypot(p.x, p.y);
        if (!(r > params_[0] && r < params_[1])) return false;
        const double th = std::atan2(p.y, p.x);
        return th > params_[2] && th < params_[3];
    }
    }
    return false;
}

std::array<double, 4> Domain::bounds() const {
    switch (kind_) {
    case Kind::Plane: throw InputError("the full plane has no bounding box; give explicit grid extents");
    case Kind::Disc: return {-params_[0], params_[0], -params_[0], params_[0]};
    case Kind::Rectangle: return {params_[0], params_[1], params_[2], params_[3]};
    case Kind::Radial: return {-params_[0], params_[0], -params_[0], params_[0]};
    case Kind::Annulus: return {-params_[1], params_[1], -params_[1], params_[1]};
    }
    return {};
}

Domain Domain::dilated(double pad) const {
    switch (kind_) {
    case Kind::Plane: return *this;
    case Kind::Disc: return disc(params_[0] + pad);
    case Kind::Rectangle: return rectangle(params_[0] - pad, params_[1] + pad, params_[2] - pad, params_[3] + pad);
    case Kind::Radial: return radial(*radial_ + pad);
    case Kind::Annulus: {
        const double r_in = std::max(0.0, params_[0] - pad);
        const double dth = params_[0] > pad ? pad / (params_[0] - pad) : std::numbers::pi;
        const double t0 = std::max(-std::numbers::pi, params_[2] - dth);
        const double t1 = std::min(std::numbers::pi, params_[3] + dth);
        return annulus(r_in, params_[1] + pad, t0, t1);
    }
    }
    return *this;
}

bool Domain::contains_segment(Point2 a, Point2 b, std::size_t samples) const {
    for (std::size_t k = 0; k <= samples; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(samples);
        if (!contains({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)})) return false;
    }
    return true;
}

std::string Domain::describe() const {
    switch (kind_) {
    case Kind::Plane: return "plane";
    case Kind::Disc: return fmt::format("disc(r={:.17g})", params_[0]);
    case Kind::Rectangle:
        return fmt::format("rectangle([{:.17g}, {:.17g}] x [{:.17g}, {:.17g}])", params_[0], params_[1], params_[2],
                           params_[3]);
    case Kind::Radial: return "radial(r < " + radial_->str() + ")";
    case Kind::Annulus:
        return fmt::format("annulus(r in ({:.17g}, {:.17g}), theta in ({:.17g}, {:.17g}))", params_[0], params_[1],
                           params_[2], params_[3]);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// ScalarField

struct ScalarField::ExprData {
    Expr f, fx, fy, fxx, fxy, fyy;
};

ScalarField::ScalarField() : ScalarField(Expr()) {}

ScalarField::ScalarField(Expr e) : backing_(Backing::Expression) {
    if (e.variables() != std::vector<std::string>{"x", "y"}) {
        throw InputError("field expressions must be declared over the variables (x, y)");
    }
    auto fx = e.derivative("x");
    auto fy = e.derivative("y");
    auto data = std::make_shared<ExprData>(ExprData{e, fx, fy, fx.derivative("x"), fx.derivative("y"),
                                                    fy.derivative("y")});
    expr_ = std::move(data);
    description_ = e.str();
}

ScalarField::ScalarField(Grid g) : backing_(Backing::Grid) {
    if (g.count_in() == 0) throw DomainError("grid-backed field has an empty mask");
    grid_ = std::make_shared<const Grid>(std::move(g));
    description_ = fmt::format("grid({}x{}, h={:.6g})", grid_->nx(), grid_->ny(), grid_->h());
}

ScalarField::ScalarField(JetFunction fn, int max_order, std::string description, GradientFunction gradient)
    : backing_(Backing::Function), fn_(std::make_shared<const JetFunction>(std::move(fn))),
      fn_order_(max_order), description_(std::move(description)) {
    if (max_order < 0 || max_order > 2) throw InputError("function-backed fields support jet orders 0..2");
    if (gradient) grad_ = std::make_shared<const GradientFunction>(std::move(gradient));
}

ScalarField ScalarField::constant(double c) { return ScalarField(Expr::constant(c)); }

ScalarField ScalarField::parse(std::string_view source) { return ScalarField(gbcv::parse(source, {"x", "y"})); }

double ScalarField::operator()(Point2 p) const {
    switch (backing_) {
    case Backing::Expression: return expr_->f.eval({p.x, p.y});
    case Backing::Grid: return grid_->interpolate(p);
    case Backing::Function: return (*fn_)(p, 0).value;
    }
    return 0.0;
}

Jet ScalarField::jet(Point2 p, int order) const {
    if (order < 0 || order > 2) throw InputError("jet order must be 0, 1 or 2");
    Jet j;
    switch (backing_) {
    case Backing::Expression: {
        const double pt[2] = {p.x, p.y};
        j.value = expr_->f.eval(pt);
        if (order >= 1) {
            j.dx = expr_->fx.eval(pt);
            j.dy = expr_->fy.eval(pt);
        }
        if (order >= 2) {
            j.dxx = expr_->fxx.eval(pt);
            j.dxy = expr_->fxy.eval(pt);
            j.dyy = expr_->fyy.eval(pt);
        }
        return j;
    }
    case Backing::Grid:
        if (order > 0) {
            throw DomainError("grid-backed fields have no pointwise derivatives; use fd_partial");
        }
        j.value = grid_->interpolate(p);
        return j;
    case Backing::Function:
        if (order > fn_order_) {
            throw DomainError(fmt::format("field '{}' supplies derivatives only up to order {}", description_,
                                          fn_order_));
        }
        return (*fn_)(p, order);
    }
    return j;
}

std::array<double, 2> ScalarField::gradient(Point2 p) const {
    if (backing_ == Backing::Expression) return {expr_->fx.eval({p.x, p.y}), expr_->fy.eval({p.x, p.y})};
    if (grad_) return (*grad_)(p);
    const Jet j = jet(p, 1);
    return {j.dx, j.dy};
}

int ScalarField::max_order() const noexcept {
    switch (backing_) {
    case Backing::Expression: return 2;
    case Backing::Grid: return 0;
    case Backing::Function: return fn_order_;
    }
    return 0;
}

const Expr* ScalarField::expression() const noexcept { return expr_ ? &expr_->f : nullptr; }

std::optional<double> ScalarField::constant_value() const {
    if (expr_) return expr_->f.constant_value();
    return std::nullopt;
}

std::string ScalarField::describe() const { return description_; }

// ---------------------------------------------------------------------------
// Sampling and finite differences

Grid sample(const ScalarField& f, const GridSpec& spec, const Domain& domain) {
    Grid g(spec);
    for (std::size_t j = 0; j < spec.ny; ++j) {
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            if (!domain.contains(p)) continue;
            g.at(i, j) = f(p);
            g.set_in(i, j, true);
        }
    }
    if (g.count_in() == 0) throw DomainError("sampling produced an empty mask: no grid node lies in the domain");
    return g;
}

Grid fd_partial(const Grid& g, Axis axis, int order, Stencil stencil) {
    if (order != 1 && order != 2) throw InputError("finite-difference order must be 1 or 2");
    Grid out(g.spec());
    const double h = g.h();
    const std::size_t nx = g.nx(), ny = g.ny();
    const bool along_x = axis == Axis::X;
    const std::size_t n_along = along_x ? nx : ny;

    // Value at offset k along the axis from node (i, j), if masked in.
    auto probe = [&](std::size_t i, std::size_t j, long k, double& v) {
        const long pos = static_cast<long>(along_x ? i : j) + k;
        if (pos < 0 || pos >= static_cast<long>(n_along)) return false;
        const std::size_t ii = along_x ? static_cast<std::size_t>(pos) : i;
        const std::size_t jj = along_x ? j : static_cast<std::size_t>(pos);
        if (!g.in(ii, jj)) return false;
        v = g.at(ii, jj);
        return true;
    };

    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            if (!g.in(i, j)) continue;
            const double f0 = g.at(i, j);
            double fm = 0, fp = 0, a1 = 0, a2 = 0, a3 = 0;
            bool has_m = probe(i, j, -1, fm), has_p = probe(i, j, 1, fp);
            double d = 0.0;
            bool ok = false;
            if (has_m && has_p) {
                d = order == 1 ? (fp - fm) / (2 * h) : (fp - 2 * f0 + fm) / (h * h);
                ok = true;
            } else if (stencil == Stencil::AllowOneSided) {
                for (long s : {1L, -1L}) {
                    if (ok) break;
                    if (!probe(i, j, s, a1) || !probe(i, j, 2 * s, a2)) continue;
                    if (order == 1) {
                        d = s * (-3 * f0 + 4 * a1 - a2) / (2 * h);
                        ok = true;
                    } else if (probe(i, j, 3 * s, a3)) {
                        d = (2 * f0 - 5 * a1 + 4 * a2 - a3) / (h * h);
                        ok = true;
                    }
                }
            }
            if (ok) {
                out.at(i, j) = d;
                out.set_in(i, j, true);
            }
        }
    }
    if (out.count_in() == 0) throw NumericalError("grid mask is too thin for any finite-difference stencil");
    return out;
}

}  // namespace gbcv
