#include "gbcv/twin.hpp"

#include "gbcv/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gbcv {

GridSpec grid_for(const Domain& domain, double h) {
    if (!(h > 0.0)) throw InputError("grid spacing must be positive");
    const auto b = domain.bounds();
    return GridSpec::covering(b[0], b[1], b[2], b[3], h);
}

ClosednessReport closedness_residual(const OneForm& form, const GridSpec& spec) {
    spec.validate();
    if (form.p.max_order() >= 1 && form.q.max_order() >= 1) {
        ClosednessReport rep;
        rep.pointwise = true;
        rep.residual = Grid(spec);
        double sum = 0.0;
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                const Point2 p = spec.node(i, j);
                if (!form.domain.contains(p)) continue;
                const double r = form.q.jet(p, 1).dx - form.p.jet(p, 1).dy;
                rep.residual.at(i, j) = r;
                rep.residual.set_in(i, j, true);
                rep.max_residual = std::max(rep.max_residual, std::abs(r));
                sum += r * r;
                ++rep.nodes;
            }
        if (rep.nodes == 0) throw DomainError("closedness check: no grid node lies in the form's domain");
        rep.rms_residual = std::sqrt(sum / static_cast<double>(rep.nodes));
        return rep;
    }
    Grid gp(spec), gq(spec);
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            if (!form.domain.contains(p)) continue;
            gp.at(i, j) = form.p(p);
            gq.at(i, j) = form.q(p);
            gp.set_in(i, j, true);
            gq.set_in(i, j, true);
        }
    if (gp.count_in() == 0) throw DomainError("closedness check: no grid node lies in the form's domain");
    const Grid qx = fd_partial(gq, Axis::X, 1, Stencil::CentralOnly);
    const Grid py = fd_partial(gp, Axis::Y, 1, Stencil::CentralOnly);
    ClosednessReport rep;
    rep.residual = Grid(spec);
    double sum = 0.0;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            if (!qx.in(i, j) || !py.in(i, j)) continue;
            const double r = qx.at(i, j) - py.at(i, j);
            rep.residual.at(i, j) = r;
            rep.residual.set_in(i, j, true);
            rep.max_residual = std::max(rep.max_residual, std::abs(r));
            sum += r * r;
            ++rep.nodes;
        }
    if (rep.nodes == 0) throw NumericalError("closedness check: domain too thin for central differences");
    rep.rms_residual = std::sqrt(sum / static_cast<double>(rep.nodes));
    return rep;
}

ScalarField mean_curvature_field(const GraphSurface& surface, const GridSpec& spec, const Domain& domain) {
    Grid out(spec);
    if (surface.pointwise_mean_curvature_available()) {
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                const Point2 p = spec.node(i, j);
                if (!domain.contains(p) || !surface.contains(p)) continue;
                out.at(i, j) = surface.mean_curvature(p);
                out.set_in(i, j, true);
            }
    } else {
        const Grid h = surface.mean_curvature_grid(spec, MeanCurvatureRoute::Grid);
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                if (!h.in(i, j) || !domain.contains(spec.node(i, j))) continue;
                out.at(i, j) = h.at(i, j);
                out.set_in(i, j, true);
            }
    }
    if (out.count_in() == 0) throw DomainError("mean curvature field: no grid node lies in the domain");
    return ScalarField(std::move(out));
}

OneForm twin_form(const GraphSurface& source, const GBCVSpace& target) {
    const double s = source.sigma();
    if (target.sigma() != -s) throw InputError("the twin ambient must have the opposite signature");
    OneForm form;
    if (source.pointwise_mean_curvature_available() && target.calabi_order() >= 1) {
        // P = -s vy + s y C', Q = s vx - s x C' with V = (alpha, beta) / omega.
        auto pq = [source, target, s](Point2 p, int order) {
            std::array<Jet, 2> out;
            if (order < 1) {
                const auto abo = source.alpha_beta_omega(p);
                const double c = target.calabi(p);
                out[0].value = -s * abo[1] / abo[2] + s * p.y * c;
                out[1].value = s * abo[0] / abo[2] - s * p.x * c;
                return out;
            }
            const FluxJet v = source.flux(p);
            const Jet c = target.calabi_jet(p, 1);
            out[0] = {-s * v.vy + s * p.y * c.value, -s * v.vy_x + s * p.y * c.dx,
                      -s * v.vy_y + s * (c.value + p.y * c.dy)};
            out[1] = {s * v.vx - s * p.x * c.value, s * v.vx_x - s * (c.value + p.x * c.dx),
                      s * v.vx_y - s * p.x * c.dy};
            return out;
        };
        form.p = ScalarField([pq](Point2 p, int order) { return pq(p, order)[0]; }, 1, "twin form P");
        form.q = ScalarField([pq](Point2 p, int order) { return pq(p, order)[1]; }, 1, "twin form Q");
    } else {
        auto pq = [source, target, s](Point2 p) {
            const auto abo = source.alpha_beta_omega(p);
            const double c = target.calabi(p);
            return std::array<double, 2>{-s * abo[1] / abo[2] + s * p.y * c, s * abo[0] / abo[2] - s * p.x * c};
        };
        form.p = ScalarField([pq](Point2 p, int) { return Jet{pq(p)[0]}; }, 0, "twin form P");
        form.q = ScalarField([pq](Point2 p, int) { return Jet{pq(p)[1]}; }, 0, "twin form Q");
    }
    form.domain = source.domain();
    form.radial = [source, s](Point2 p) {
        const auto abo = source.alpha_beta_omega(p);
        return s * (abo[0] * p.y - abo[1] * p.x) / abo[2];
    };
    return form;
}

namespace {

double segment_integral(const OneForm& form, Point2 a, Point2 b, double tol) {
    if (!form.domain.contains_segment(a, b)) {
        throw DomainError(fmt::format("integration path ({:.6g}, {:.6g}) -> ({:.6g}, {:.6g}) leaves the domain", a.x,
                                      a.y, b.x, b.y));
    }
    const double dx = b.x - a.x, dy = b.y - a.y;
    if (dx == 0.0 && dy == 0.0) return 0.0;
    QuadOptions qo;
    qo.abs_tol = tol;
    if (a.x == 0.0 && a.y == 0.0 && form.radial) {
        return integrate([&](double t) { return form.radial({t * b.x, t * b.y}) / t; }, 0.0, 1.0, qo).value;
    }
    return integrate(
               [&](double t) {
                   const Point2 p{a.x + t * dx, a.y + t * dy};
                   return (dx != 0.0 ? form.p(p) * dx : 0.0) + (dy != 0.0 ? form.q(p) * dy : 0.0);
               },
               0.0, 1.0, qo)
        .value;
}

}  // namespace

ScalarField integrate_exact_form(const OneForm& form, const PotentialOptions& opts) {
    if (!(opts.quad_tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (!form.domain.contains(opts.p0)) throw DomainError("normalization point lies outside the form's domain");
    const double shift = opts.c0 - segment_integral(form, opts.anchor, opts.p0, opts.quad_tol);
    auto value = [form, opts, shift](Point2 p) {
        if (!form.domain.contains(p)) {
            throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the potential's domain", p.x, p.y));
        }
        return segment_integral(form, opts.anchor, p, opts.quad_tol) + shift;
    };
    auto gradient = [form](Point2 p) { return std::array<double, 2>{form.p(p), form.q(p)}; };
    const int order = form.p.max_order() >= 1 && form.q.max_order() >= 1 ? 2 : 1;
    return ScalarField(
        [value, gradient, form](Point2 p, int order) {
            Jet j;
            j.value = value(p);
            if (order >= 2) {
                const Jet a = form.p.jet(p, 1), b = form.q.jet(p, 1);
                j.dx = a.value;
                j.dy = b.value;
                j.dxx = a.dx;
                j.dxy = 0.5 * (a.dy + b.dx);
                j.dyy = b.dy;
            } else if (order == 1) {
                const auto g = gradient(p);
                j.dx = g[0];
                j.dy = g[1];
            }
            return j;
        },
        order, "potential", gradient);
}

PathCheck verify_path_independence(const OneForm& form, const ScalarField& potential, const PotentialOptions& opts,
                                   std::span<const Point2> points) {
    const double shift = opts.c0 - segment_integral(form, opts.anchor, opts.p0, opts.quad_tol);
    PathCheck out;
    const Point2 a = opts.anchor;
    for (const Point2& p : points) {
        if (!form.domain.contains(p)) continue;
        double l = 0.0;
        bool found = false;
        for (const Point2 corner : {Point2{p.x, a.y}, Point2{a.x, p.y}}) {
            if (form.domain.contains_segment(a, corner) && form.domain.contains_segment(corner, p)) {
                l = segment_integral(form, a, corner, opts.quad_tol) + segment_integral(form, corner, p, opts.quad_tol);
                found = true;
                break;
            }
        }
        if (!found) continue;
        out.max_difference = std::max(out.max_difference, std::abs(l + shift - potential(p)));
        ++out.points;
    }
    return out;
}

namespace {

TwinPair build_twin(const GraphSurface& src, const TwinOptions& o) {
    if (o.refine < 1) throw InputError("mean-curvature refinement must be at least 1");
    const GridSpec spec = grid_for(o.domain, o.h);
    const double s = src.sigma();
    const Signature target_sig = s > 0 ? Signature::Lorentzian : Signature::Riemannian;

    ScalarField mean;
    std::optional<Domain> target_cover;
    double target_h = 0.0;
    if (o.mean_curvature) {
        mean = *o.mean_curvature;
    } else {
        const double hf = o.h / o.refine;
        const Domain cover = o.domain.dilated(3 * hf);
        if (src.pointwise_mean_curvature_available() && cover.star_shaped()) {
            // The cache samples up to 3 hf past the domain; the height is continued there.
            const GraphSurface wide(src.ambient(), src.height(), src.ambient().base().domain());
            mean = ScalarField(
                [src, wide](Point2 p, int) {
                    return Jet{src.contains(p) ? src.mean_curvature(p) : wide.mean_curvature(p)};
                },
                0, "mean curvature");
            target_cover = cover;
            target_h = hf;
        } else {
            mean = mean_curvature_field(src, grid_for(cover, hf), cover);
        }
    }
    const GBCVSpace target = (target_cover ? src.ambient().with_tau_cached(mean, *target_cover, target_h)
                                           : src.ambient().with_tau(mean))
                                 .with_signature(target_sig);

    OneForm form = twin_form(src, target);
    form.domain = o.domain;
    const ClosednessReport closed = closedness_residual(form, spec);
    if (o.enforce && closed.max_residual > o.closedness_tol) {
        throw NumericalError(fmt::format(
            "twin form is not closed: residual {:.3g} exceeds tolerance {:.3g} (inconsistent mean curvature or "
            "grid too coarse)",
            closed.max_residual, o.closedness_tol));
    }
    const ScalarField g = integrate_exact_form(form, o.potential);
    const GraphSurface tgt(target, g, o.domain);

    TwinReport rep;
    rep.grid = spec;
    rep.closedness_max = closed.max_residual;
    rep.closedness_rms = closed.rms_residual;

    std::vector<Point2> probe;
    std::size_t count = 0;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i)
            if (o.domain.contains(spec.node(i, j))) ++count;
    const std::size_t stride = std::max<std::size_t>(1, count / 64);
    std::size_t seen = 0;

    const GraphSurface& riem = s > 0 ? src : tgt;
    const GraphSurface& lor = s > 0 ? tgt : src;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            if (!o.domain.contains(p)) continue;
            if (seen++ % stride == 0) probe.push_back(p);
            const auto a = src.alpha_beta_omega(p);
            const auto b = tgt.alpha_beta_omega(p);
            rep.twin_relation_max = std::max(
                {rep.twin_relation_max, std::abs(b[0] + s * a[1] / a[2]), std::abs(b[1] - s * a[0] / a[2])});
            rep.omega_product_max = std::max(rep.omega_product_max, std::abs(a[2] * b[2] - 1.0));
            const double w_r = s > 0 ? a[2] : b[2];
            const double margin = lor.is_spacelike(p).margin;
            rep.min_margin = std::min(rep.min_margin, margin);
            rep.margin_max = std::max(rep.margin_max, std::abs(margin - 1.0 / (w_r * w_r)));
            const Mat2 ir = riem.induced_metric(p), il = lor.induced_metric(p);
            double scale = 0.0, dev = 0.0;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    scale = std::max(scale, std::abs(il[r][c]));
                    dev = std::max(dev, std::abs(il[r][c] - ir[r][c] / (w_r * w_r)));
                }
            rep.conformality_max = std::max(rep.conformality_max, dev / scale);
            ++rep.nodes;
        }
    if (rep.nodes == 0) throw DomainError("twin: no output grid node lies in the domain");
    if (o.enforce && !(rep.min_margin > kSpacelikeFloor)) {
        throw NumericalError(fmt::format("twin graph is not spacelike (minimum margin {:.3g})", rep.min_margin));
    }

    const ScalarField& tau_src = src.ambient().tau();
    auto deviation = [&](const Grid& hg) {
        double m = 0.0;
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i)
                if (hg.in(i, j)) m = std::max(m, std::abs(hg.at(i, j) - tau_src(spec.node(i, j))));
        return m;
    };
    const Grid hfd = tgt.mean_curvature_grid(spec, MeanCurvatureRoute::Grid);
    rep.swap_fd_max = deviation(hfd);
    rep.swap_pointwise = tgt.pointwise_mean_curvature_available();
    Grid hc = rep.swap_pointwise ? tgt.mean_curvature_grid(spec, MeanCurvatureRoute::Pointwise) : hfd;
    rep.swap_max = rep.swap_pointwise ? deviation(hc) : rep.swap_fd_max;
    if (o.enforce && rep.swap_max > o.swap_tol) {
        throw NumericalError(fmt::format("twin mean curvature deviates from the source bundle curvature by {:.3g} "
                                         "(tolerance {:.3g})",
                                         rep.swap_max, o.swap_tol));
    }

    const PathCheck path = verify_path_independence(form, g, o.potential, probe);
    rep.path_max_difference = path.max_difference;
    rep.path_points = path.points;

    const GraphSurface src_on_domain(src.ambient(), src.height(), o.domain);
    const bool forward = s > 0;
    return TwinPair{forward ? src_on_domain : tgt,
                    forward ? tgt : src_on_domain,
                    forward ? mean : src.ambient().tau(),
                    forward ? src.ambient().tau() : mean,
                    rep,
                    closed.residual,
                    std::move(hc)};
}

}  // namespace

TwinPair twin(const GraphSurface& f, const TwinOptions& opts) {
    if (f.sigma() < 0) throw InputError("twin expects a graph in a Riemannian ambient; use twin_inverse");
    return build_twin(f, opts);
}

TwinPair twin_inverse(const GraphSurface& g, const TwinOptions& opts) {
    if (g.sigma() > 0) throw InputError("twin_inverse expects a spacelike graph in a Lorentzian ambient");
    return build_twin(g, opts);
}

ConformalityReport verify_conformality(const TwinPair& pair, std::span<const Point2> points) {
    ConformalityReport rep;
    for (const Point2& p : points) {
        const Mat2 ir = pair.riemannian.induced_metric(p), il = pair.lorentzian.induced_metric(p);
        const double w = pair.riemannian.omega(p), wt = pair.lorentzian.omega(p);
        double scale = 0.0, dev = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                scale = std::max(scale, std::abs(il[r][c]));
                dev = std::max(dev, std::abs(il[r][c] - ir[r][c] / (w * w)));
            }
        rep.max_relative_deviation = std::max(rep.max_relative_deviation, dev / scale);
        rep.max_angle_product_deviation = std::max(rep.max_angle_product_deviation, std::abs((1.0 / w) * (1.0 / wt) - 1.0));
        ++rep.points;
    }
    return rep;
}

}  // namespace gbcv
