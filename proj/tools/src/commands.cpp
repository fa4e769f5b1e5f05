#include "commands.hpp"

#include "output.hpp"

#include <gbcv/bounds.hpp>
#include <gbcv/error.hpp>
#include <gbcv/examples.hpp>
#include <gbcv/twin.hpp>

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>

namespace gbcv::cli {

namespace {

class Output {
public:
    Output(const Json& job, const Settings& s) : s_(s) {
        std::error_code ec;
        std::filesystem::create_directories(s.out, ec);
        if (ec) throw InputError(fmt::format("cannot create output directory '{}': {}", s.out.string(), ec.message()));
        if (s.svg && *s.svg != "heatmap" && *s.svg != "contour") {
            throw InputError(fmt::format("--svg must be 'heatmap' or 'contour', not '{}'", *s.svg));
        }
        const Json opts = job.value("options", Json::object());
        if (opts.contains("levels")) {
            if (!opts["levels"].is_array()) throw InputError("'options.levels' must be an array of numbers");
            for (const Json& v : opts["levels"]) {
                if (!v.is_number()) throw InputError("'options.levels' must be an array of numbers");
                levels_.push_back(v.get<double>());
            }
        }
    }

    void grid(const std::string& name, const Grid& g) {
        write_text(s_.out / (name + ".csv"), grid_csv(g));
        write_text(s_.out / (name + ".json"), grid_json(g));
        files_.push_back(name + ".csv");
        files_.push_back(name + ".json");
        if (s_.svg) {
            const bool contour = *s_.svg == "contour";
            const std::vector<double> levels = contour && levels_.empty() ? default_levels(g) : levels_;
            write_text(s_.out / (name + ".svg"), render_svg(g, contour ? SvgStyle::Contour : SvgStyle::Heatmap, levels));
            files_.push_back(name + ".svg");
        }
    }

    void summary(Json j) {
        j["schema"] = 1;
        j["files"] = files_;
        write_text(s_.out / "summary.json", j.dump(2) + "\n");
    }

private:
    const Settings& s_;
    std::vector<double> levels_;
    std::vector<std::string> files_;
};

Json options_of(const Json& job) {
    const Json o = job.value("options", Json::object());
    if (!o.is_object()) throw InputError("'options' must be an object");
    return o;
}

std::optional<GBCVSpace> space_of(const Json& job, const Settings& s) {
    if (!job.contains("space")) return std::nullopt;
    return parse_space(job["space"], s.tol);
}

const Json& require(const Json& job, const char* key) {
    if (!job.contains(key)) throw InputError(fmt::format("the job needs '{}'", key));
    return job[key];
}

Domain bounded_or(const Domain& d, const Domain& fallback) { return d.bounded() ? d : fallback; }

GridSpec job_grid(const Json& job, const Settings& s, const Domain& fallback) {
    if (job.contains("grid")) return parse_grid(job["grid"]);
    const Domain region = job.contains("region") ? parse_domain(job["region"]) : fallback;
    return default_grid(region, s.h);
}

Point2 point_of(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError(fmt::format("'{}' must be [x, y]", what));
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> random_points(const Domain& d, std::size_t n, std::uint64_t seed) {
    const auto b = d.bounds();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(b[0], b[1]), uy(b[2], b[3]);
    std::vector<Point2> out;
    for (std::size_t tries = 0; out.size() < n && tries < 1000 * n; ++tries) {
        const Point2 p{ux(rng), uy(rng)};
        if (d.contains(p)) out.push_back(p);
    }
    return out;
}

Json stats(const Grid& g) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t k = 0; k < g.values().size(); ++k)
        if (g.mask()[k]) {
            lo = std::min(lo, g.values()[k]);
            hi = std::max(hi, g.values()[k]);
        }
    return {{"min", lo}, {"max", hi}, {"max_abs", g.max_abs()}, {"nodes", g.count_in()}};
}

// Half the radius of a hyperbolic BCV base keeps tau / delta moderate.
Domain default_region(const GBCVSpace& space) {
    if (space.bcv() && space.bcv()->kappa < 0) return Domain::disc(1 / std::sqrt(-space.bcv()->kappa));
    return bounded_or(space.base().domain(), Domain::disc(1.0));
}

Domain region_of(const Json& job, const GBCVSpace& space) {
    return job.contains("region") ? parse_domain(job["region"]) : default_region(space);
}

void restrict_to(Grid& g, const Domain& region) {
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            if (!region.contains(g.node(i, j))) g.set_in(i, j, false);
}

DivergenceReport divergence_on(const GBCVSpace& space, const GridSpec& spec, const Domain& region) {
    DivergenceReport rep = verify_divergence_identity(space, spec);
    restrict_to(rep.residual, region);
    rep.max_residual = 0.0;
    rep.nodes = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < rep.residual.values().size(); ++k) {
        if (!rep.residual.mask()[k]) continue;
        const double r = rep.residual.values()[k];
        rep.max_residual = std::max(rep.max_residual, std::abs(r));
        sum += r * r;
        ++rep.nodes;
    }
    if (rep.nodes == 0) throw InputError("the region holds no interior grid nodes");
    rep.l2_residual = std::sqrt(sum * spec.h * spec.h);
    return rep;
}

double quad_tol(const GBCVSpace& space) { return space.has_closed_form_potential() ? 0.0 : space.quad_tol(); }

Json space_json(const GBCVSpace& space) {
    Json j{{"description", space.describe()}, {"signature", to_string(space.signature())}};
    if (space.bcv()) j["bcv"] = {{"kappa", space.bcv()->kappa}, {"tau", space.bcv()->tau}};
    return j;
}

}  // namespace

int cmd_potential(const Json& job, const Settings& s) {
    const GBCVSpace space = parse_space(require(job, "space"), s.tol);
    Output out(job, s);
    const Domain& base = space.base().domain();
    const Domain region = region_of(job, space);
    const GridSpec spec = job_grid(job, s, region);
    Grid c = sample(space.calabi_field(), spec, base);
    restrict_to(c, region);
    const DivergenceReport div = divergence_on(space, spec, region);
    out.grid("potential", c);
    out.grid("divergence_residual", div.residual);

    Json summary{{"command", "potential"},
                 {"space", space_json(space)},
                 {"grid", {{"h", spec.h}, {"nx", spec.nx}, {"ny", spec.ny}}},
                 {"tolerances", {{"quad_tol", space.quad_tol()}}},
                 {"potential", stats(c)},
                 {"residuals",
                  {{"divergence_max", div.max_residual}, {"divergence_l2", div.l2_residual}, {"nodes", div.nodes}}}};
    if (space.bcv()) {
        // Quadrature against the closed form tau / delta.
        double dev = 0.0;
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                if (!c.in(i, j)) continue;
                const Point2 p = spec.node(i, j);
                dev = std::max(dev, std::abs(calabi_potential(space.base(), space.tau(), p, space.quad_tol()) - c.at(i, j)));
            }
        summary["residuals"]["closed_form_deviation"] = dev;
    }
    out.summary(std::move(summary));
    return 0;
}

int cmd_mean_curvature(const Json& job, const Settings& s) {
    const auto space = space_of(job, s);
    const GraphSurface surface = parse_surface(require(job, "surface"), space);
    Output out(job, s);
    const Domain fallback =
        bounded_or(surface.domain(), bounded_or(surface.ambient().base().domain(), Domain::disc(1.0)));
    const GridSpec spec = job_grid(job, s, fallback);
    const bool pointwise = surface.pointwise_mean_curvature_available();
    const GraphGrids g = surface.evaluate(spec);
    out.grid("mean_curvature", g.mean_curvature);
    out.grid("alpha", g.alpha);
    out.grid("beta", g.beta);
    out.grid("omega", g.omega);
    out.grid("angle", g.angle);
    out.grid("margin", g.margin);

    double min_margin = INFINITY;
    std::size_t timelike = 0;
    for (std::size_t k = 0; k < g.margin.values().size(); ++k)
        if (g.margin.mask()[k]) {
            min_margin = std::min(min_margin, g.margin.values()[k]);
            if (!(g.margin.values()[k] > kSpacelikeFloor)) ++timelike;
        }
    out.summary({{"command", "mean-curvature"},
                 {"space", space_json(surface.ambient())},
                 {"surface", surface.height().describe()},
                 {"grid", {{"h", spec.h}, {"nx", spec.nx}, {"ny", spec.ny}}},
                 {"route", pointwise ? "pointwise" : "central differences"},
                 {"tolerances", {{"quad_tol", quad_tol(surface.ambient())}, {"spacelike_floor", kSpacelikeFloor}}},
                 {"mean_curvature", stats(g.mean_curvature)},
                 {"residuals", {{"min_margin", min_margin}, {"non_spacelike_nodes", timelike}}}});
    return 0;
}

namespace {

TwinOptions twin_options(const Json& job, const GraphSurface& src, const Settings& s) {
    const Json o = options_of(job);
    TwinOptions t;
    t.domain = o.contains("domain") ? parse_domain(o["domain"]) : bounded_or(src.domain(), Domain::disc(0.5));
    if (!t.domain.bounded()) throw InputError("the twin domain must be bounded");
    const auto b = t.domain.bounds();
    t.h = s.h ? *s.h : get_number(o, "h", std::max(b[1] - b[0], b[3] - b[2]) / 64);
    if (o.contains("mean_curvature")) t.mean_curvature = parse_field(o["mean_curvature"], "mean_curvature");
    t.refine = static_cast<int>(get_number(o, "refine", 2));
    if (o.contains("anchor")) t.potential.anchor = point_of(o["anchor"], "anchor");
    t.potential.p0 = o.contains("p0") ? point_of(o["p0"], "p0") : t.potential.anchor;
    t.potential.c0 = get_number(o, "c0", 0.0);
    t.potential.quad_tol = s.tol ? *s.tol : get_number(o, "quad_tol", t.potential.quad_tol);
    t.closedness_tol = get_number(o, "closedness_tol", t.closedness_tol);
    t.swap_tol = get_number(o, "swap_tol", t.swap_tol);
    if (o.contains("enforce")) t.enforce = o["enforce"].get<bool>();
    return t;
}

Json report_json(const TwinReport& r) {
    return {{"nodes", r.nodes},
            {"closedness_max", r.closedness_max},
            {"closedness_rms", r.closedness_rms},
            {"path_max_difference", r.path_max_difference},
            {"path_points", r.path_points},
            {"twin_relation_max", r.twin_relation_max},
            {"omega_product_max", r.omega_product_max},
            {"margin_max", r.margin_max},
            {"min_margin", r.min_margin},
            {"swap_max", r.swap_max},
            {"swap_pointwise", r.swap_pointwise},
            {"swap_fd_max", r.swap_fd_max},
            {"conformality_max", r.conformality_max}};
}

Json twin_tolerances(const TwinOptions& t) {
    return {{"closedness_tol", t.closedness_tol},
            {"swap_tol", t.swap_tol},
            {"quad_tol", t.potential.quad_tol},
            {"h", t.h},
            {"refine", t.refine},
            {"enforce", t.enforce}};
}

}  // namespace

int cmd_twin(const Json& job, const Settings& s, bool inverse) {
    const auto space = space_of(job, s);
    const GraphSurface src = parse_surface(require(job, "surface"), space);
    const TwinOptions t = twin_options(job, src, s);
    Output out(job, s);
    const TwinPair pair = inverse ? twin_inverse(src, t) : twin(src, t);
    const GridSpec& spec = pair.report.grid;

    out.grid("riemannian_height", sample(pair.riemannian.height(), spec, t.domain));
    out.grid("lorentzian_height", sample(pair.lorentzian.height(), spec, t.domain));
    out.grid("mean_curvature", sample(pair.mean_curvature, spec, t.domain));
    out.grid("bundle_curvature", sample(pair.bundle_curvature, spec, t.domain));
    out.grid("closedness_residual", pair.closedness);
    out.grid("constructed_mean_curvature", pair.constructed_mean_curvature);
    Grid margin(spec);
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            if (!t.domain.contains(p)) continue;
            margin.at(i, j) = pair.lorentzian.is_spacelike(p).margin;
            margin.set_in(i, j, true);
        }
    out.grid("margin", margin);

    out.summary({{"command", inverse ? "twin-inverse" : "twin"},
                 {"source_space", space_json(src.ambient())},
                 {"riemannian_space", space_json(pair.riemannian.ambient())},
                 {"lorentzian_space", space_json(pair.lorentzian.ambient())},
                 {"surface", src.height().describe()},
                 {"domain", t.domain.describe()},
                 {"grid", {{"h", spec.h}, {"nx", spec.nx}, {"ny", spec.ny}}},
                 {"tolerances", twin_tolerances(t)},
                 {"residuals", report_json(pair.report)}});
    return 0;
}

int cmd_example(const std::string& name, const Json& params, const Json& job, const Settings& s) {
    Output out(job, s);
    Json summary{{"command", "example"}, {"example", name}, {"parameters", params}};
    auto num = [&](const char* key, double fallback) { return get_number(params, key, fallback); };

    if (name == "bcv") {
        const GBCVSpace space = parse_space(
            {{"preset", "bcv"}, {"kappa", num("kappa", 0.0)}, {"tau", num("tau", 0.5)},
             {"signature", params.value("signature", std::string("riemannian"))}},
            s.tol);
        const Domain& base = space.base().domain();
        const Domain region = region_of(job, space);
        const GridSpec spec = job_grid(job, s, region);
        Grid c = sample(space.calabi_field(), spec, base);
        restrict_to(c, region);
        const double tol = s.tol ? *s.tol : 1e-10;
        double dev = 0.0, kdev = 0.0;
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                if (!c.in(i, j)) continue;
                const Point2 p = spec.node(i, j);
                dev = std::max(dev, std::abs(calabi_potential(space.base(), space.tau(), p, tol) - c.at(i, j)));
                kdev = std::max(kdev, std::abs(gaussian_curvature(space.base(), p) - space.bcv()->kappa));
            }
        out.grid("potential", c);
        summary["space"] = space_json(space);
        summary["tolerances"] = {{"quad_tol", tol}};
        summary["residuals"] = {{"quadrature_vs_closed_form", dev}, {"gaussian_curvature_deviation", kdev}};
        out.summary(std::move(summary));
        return 0;
    }

    Json surface = params;
    surface["preset"] = name;
    std::optional<GBCVSpace> space;
    double expected = 0.0;
    if (name == "helicoid") {
        space = job.contains("space")
                    ? parse_space(job["space"], s.tol)
                    : parse_space({{"preset", "bcv"}, {"kappa", num("kappa", 0.0)}, {"tau", num("tau", 0.0)},
                                   {"signature", params.value("signature", std::string("riemannian"))}},
                                  s.tol);
        if (!surface.contains("domain")) surface["domain"] = {{"kind", "annulus"}, {"params", {0.1, 0.9}}};
    } else if (name == "catenoid" || name == "cmc-helicoid") {
        if (name == "cmc-helicoid") expected = num("tau", 0.5);
    } else {
        throw InputError(fmt::format("unknown example '{}' (helicoid, catenoid, cmc-helicoid, bcv)", name));
    }
    const GraphSurface g = parse_surface(surface, space);
    const GridSpec spec = job_grid(job, s, g.domain());
    const GraphGrids grids = g.evaluate(spec);
    out.grid("height", sample(g.height(), spec, g.domain()));
    out.grid("mean_curvature", grids.mean_curvature);
    out.grid("margin", grids.margin);
    double dev = 0.0;
    for (std::size_t k = 0; k < grids.mean_curvature.values().size(); ++k)
        if (grids.mean_curvature.mask()[k]) dev = std::max(dev, std::abs(grids.mean_curvature.values()[k] - expected));
    summary["space"] = space_json(g.ambient());
    summary["surface"] = g.height().describe();
    summary["domain"] = g.domain().describe();
    summary["grid"] = {{"h", spec.h}, {"nx", spec.nx}, {"ny", spec.ny}};
    summary["expected_mean_curvature"] = expected;
    summary["tolerances"] = {{"quad_tol", quad_tol(g.ambient())}};
    summary["residuals"] = {{"mean_curvature_deviation", dev}, {"min_margin", stats(grids.margin)["min"]}};
    out.summary(std::move(summary));
    return 0;
}

namespace {

std::vector<RegularDomain> family_of(const Json& job, const GBCVSpace& space) {
    if (!job.contains("family")) {
        if (!space.bcv()) throw InputError("bounds needs a 'family' unless the space is a bcv preset");
        const double kappa = space.bcv()->kappa;
        std::vector<RegularDomain> out;
        for (int k = 1; k <= 8; ++k) {
            if (kappa < 0) out.push_back(geodesic_disc(kappa, k));
            else if (kappa == 0) out.push_back(RegularDomain::disc(std::ldexp(1.0, k - 1)));
            else out.push_back(geodesic_disc(kappa, k * std::numbers::pi / std::sqrt(kappa) / 9));
        }
        return out;
    }
    const Json& f = job["family"];
    const std::string kind = f.value("kind", std::string("discs"));
    std::vector<RegularDomain> out;
    if (kind == "polar") {
        for (const Json& b : f.at("boundaries")) out.push_back(RegularDomain::polar(parse(b.get<std::string>(), {"t"})));
    } else if (kind == "discs" || kind == "geodesic") {
        if (kind == "geodesic" && !space.bcv()) throw InputError("geodesic families need a bcv preset space");
        for (const Json& r : f.at("radii")) {
            const double v = r.get<double>();
            out.push_back(kind == "discs" ? RegularDomain::disc(v) : geodesic_disc(space.bcv()->kappa, v));
        }
    } else {
        throw InputError(fmt::format("unknown family kind '{}' (discs, geodesic, polar)", kind));
    }
    if (out.empty()) throw InputError("the family is empty");
    return out;
}

}  // namespace

int cmd_bounds(const Json& job, const Settings& s) {
    const GBCVSpace space = parse_space(require(job, "space"), s.tol);
    const double tol = s.tol ? *s.tol : 1e-10;
    Output out(job, s);
    const auto family = family_of(job, space);
    const CertificateReport cert =
        nonexistence_certificate(space.with_signature(Signature::Lorentzian), family, tol);

    Json members = Json::array();
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto& m = cert.cheeger.members[k];
        members.push_back({{"domain", m.domain},
                           {"area", m.area},
                           {"length", m.length},
                           {"quotient", m.quotient},
                           {"running_min", cert.cheeger.running_min[k]}});
    }
    Json summary{{"command", "bounds"},
                 {"space", space_json(space)},
                 {"certificate_space", "Lorentzian space over the same base and bundle curvature"},
                 {"family", members},
                 {"inf_tau_sampled", cert.inf_tau_sampled},
                 {"tau_samples", cert.tau_samples},
                 {"cheeger_upper", cert.cheeger.upper_bound},
                 {"cheeger_exact", cert.cheeger_exact ? Json(*cert.cheeger_exact) : Json(nullptr)},
                 {"verdict", to_string(cert.verdict)},
                 {"boundary", cert.boundary},
                 {"details", cert.details},
                 {"tolerances", {{"quad_tol", tol}}}};

    if (job.contains("surface")) {
        const GraphSurface surface = parse_surface(job["surface"], space.with_signature(Signature::Riemannian));
        Json flux = Json::array();
        double worst = 0.0;
        bool all = true;
        for (const RegularDomain& d : family) {
            FluxReport r;
            try {
                r = heinz_flux_check(surface, d, tol);
            } catch (const DomainError& e) {
                flux.push_back({{"domain", d.describe()}, {"skipped", e.what()}});
                continue;
            }
            worst = std::max(worst, r.divergence_mismatch / std::max(1.0, std::abs(r.flux)));
            all = all && r.chain_holds;
            flux.push_back({{"domain", d.describe()},
                            {"lower", r.lower},
                            {"inf_h_sampled", r.inf_h_sampled},
                            {"flux", r.flux},
                            {"interior", r.interior},
                            {"area", r.area},
                            {"length", r.length},
                            {"flux_below_length", r.flux_below_length},
                            {"chain_holds", r.chain_holds}});
        }
        summary["flux"] = flux;
        std::size_t checked = 0;
        for (const Json& f : flux) checked += f.contains("chain_holds") ? 1 : 0;
        summary["residuals"] = {{"flux_relative_mismatch", worst}, {"chain_holds", all}, {"flux_members_checked", checked}};
    }
    out.summary(std::move(summary));
    return 0;
}

int cmd_verify(const Json& job, const Settings& s) {
    const GBCVSpace space = parse_space(require(job, "space"), s.tol);
    Output out(job, s);
    Json checks = Json::array();
    bool ok = true;
    auto check = [&](const std::string& name, double value, double tol, bool pass, Json extra = Json::object()) {
        extra["name"] = name;
        extra["value"] = value;
        extra["tolerance"] = tol;
        extra["pass"] = pass;
        checks.push_back(std::move(extra));
        ok = ok && pass;
    };
    const Domain& base = space.base().domain();
    const Domain region = region_of(job, space);

    // Divergence identity at h and h/2.
    {
        const GridSpec coarse = job_grid(job, s, region);
        GridSpec fine = coarse;
        fine.h = coarse.h / 2;
        fine.nx = 2 * coarse.nx - 1;
        fine.ny = 2 * coarse.ny - 1;
        const DivergenceReport a = divergence_on(space, coarse, region);
        const DivergenceReport b = divergence_on(space, fine, region);
        out.grid("divergence_residual", b.residual);
        const bool exact = a.max_residual <= 1e-10 && b.max_residual <= 1e-10;
        const double order = exact ? 0.0 : std::log2(a.l2_residual / b.l2_residual);
        check("divergence_identity_order", order, 1.9, exact || order >= 1.9,
              {{"exact", exact}, {"max_residual_h", a.max_residual}, {"max_residual_h2", b.max_residual},
               {"h", coarse.h}});
    }
    // Frame orthonormality.
    {
        const auto pts = random_points(region, 50, 1);
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> uz(-1.0, 1.0);
        double dev = 0.0;
        for (const Point2& p : pts) {
            if (!base.contains(p)) continue;
            const Point3 q{p.x, p.y, uz(rng)};
            const Mat3 g = space.metric_at(q);
            const auto e = space.frame_at(q);
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) {
                    const double want = i != k ? 0.0 : (i == 2 ? space.sigma() : 1.0);
                    dev = std::max(dev, std::abs(inner(g, e[i], e[k]) - want));
                }
        }
        check("frame_orthonormality", dev, 1e-9, dev <= 1e-9);
    }
    if (job.contains("surface")) {
        const GraphSurface surface = parse_surface(job["surface"], space);
        const Domain sregion = bounded_or(surface.domain(), region);
        if (surface.pointwise_mean_curvature_available()) {
            double dev = 0.0;
            for (const Point2& p : random_points(sregion, 50, 3)) {
                if (!surface.contains(p) || !surface.is_spacelike(p).spacelike) continue;
                const double h = surface.mean_curvature(p);
                dev = std::max(dev, std::abs(h - surface.mean_curvature_div_m(p)) / std::max(1.0, std::abs(h)));
            }
            check("mean_curvature_cross_check", dev, 1e-8, dev <= 1e-8);
        }
        TwinOptions t = twin_options(job, surface, s);
        t.enforce = false;
        const bool forward = surface.sigma() > 0;
        const TwinPair pair = forward ? twin(surface, t) : twin_inverse(surface, t);
        const TwinReport& r = pair.report;
        check("twin_closedness", r.closedness_max, t.closedness_tol, r.closedness_max <= t.closedness_tol);
        check("twin_swap", r.swap_max, t.swap_tol, r.swap_max <= t.swap_tol, {{"pointwise", r.swap_pointwise}});
        check("twin_spacelike", r.min_margin, kSpacelikeFloor, r.min_margin > kSpacelikeFloor);
        check("twin_margin_identity", r.margin_max, 1e-6, r.margin_max <= 1e-6);
        check("twin_conformality", r.conformality_max, 1e-6, r.conformality_max <= 1e-6);
        check("twin_angle_product", r.omega_product_max, 1e-6, r.omega_product_max <= 1e-6);
        check("twin_path_independence", r.path_max_difference, 1e-8, r.path_max_difference <= 1e-8);

        TwinOptions back = t;
        back.mean_curvature = surface.ambient().tau();
        back.potential.c0 = surface.height()(t.potential.p0);
        const GraphSurface& image = forward ? pair.lorentzian : pair.riemannian;
        const TwinPair round = forward ? twin_inverse(image, back) : twin(image, back);
        const GraphSurface& again = forward ? round.riemannian : round.lorentzian;
        double dev = 0.0;
        const GridSpec& spec = r.grid;
        for (std::size_t j = 0; j < spec.ny; ++j)
            for (std::size_t i = 0; i < spec.nx; ++i) {
                const Point2 p = spec.node(i, j);
                if (t.domain.contains(p)) dev = std::max(dev, std::abs(again.height()(p) - surface.height()(p)));
            }
        check("involution", dev, 1e-7, dev <= 1e-7);
    }
    out.summary({{"command", "verify"}, {"space", space_json(space)}, {"checks", checks}, {"pass", ok}});
    return ok ? 0 : 3;
}

}  // namespace gbcv::cli
