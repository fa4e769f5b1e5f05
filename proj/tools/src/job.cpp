#include "job.hpp"

#include <gbcv/error.hpp>
#include <gbcv/examples.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace gbcv::cli {

Json load_job(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw InputError(fmt::format("cannot read job file '{}'", path.string()));
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        Json j = Json::parse(ss.str());
        if (!j.is_object()) throw InputError("job file must contain a JSON object");
        return j;
    } catch (const Json::parse_error& e) {
        throw InputError(fmt::format("job file '{}': {}", path.string(), e.what()));
    }
}

double get_number(const Json& j, const char* key, std::optional<double> fallback) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw InputError(fmt::format("missing number '{}'", key));
    }
    const Json& v = j.at(key);
    if (!v.is_number()) throw InputError(fmt::format("'{}' must be a number", key));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(fmt::format("'{}' must be finite", key));
    return d;
}

ScalarField parse_field(const Json& j, const char* what) {
    if (j.is_number()) return ScalarField::constant(j.get<double>());
    if (j.is_string()) return ScalarField::parse(j.get<std::string>());
    throw InputError(fmt::format("'{}' must be an expression string or a number", what));
}

namespace {

std::vector<double> numbers(const Json& params, std::size_t min, std::size_t max, const std::string& kind) {
    if (!params.is_array() || params.size() < min || params.size() > max) {
        throw InputError(fmt::format("domain '{}' expects {} to {} parameters", kind, min, max));
    }
    std::vector<double> out;
    for (const Json& v : params) {
        if (!v.is_number()) throw InputError(fmt::format("domain '{}' parameters must be numbers", kind));
        out.push_back(v.get<double>());
    }
    return out;
}

Signature signature_of(const Json& j) {
    if (!j.contains("signature")) return Signature::Riemannian;
    if (!j["signature"].is_string()) throw InputError("'signature' must be a string");
    return parse_signature(j["signature"].get<std::string>());
}

}  // namespace

Domain parse_domain(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw InputError("a domain needs a string 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    const Json params = j.value("params", Json::array());
    if (kind == "plane") return Domain::plane();
    if (kind == "disc") return Domain::disc(numbers(params, 1, 1, kind)[0]);
    if (kind == "rectangle") {
        const auto p = numbers(params, 4, 4, kind);
        return Domain::rectangle(p[0], p[1], p[2], p[3]);
    }
    if (kind == "annulus") {
        const auto p = numbers(params, 2, 4, kind);
        if (p.size() == 3) throw InputError("annulus takes 2 or 4 parameters");
        return p.size() == 2 ? Domain::annulus(p[0], p[1]) : Domain::annulus(p[0], p[1], p[2], p[3]);
    }
    if (kind == "radial") {
        if (!params.is_array() || params.size() != 1 || !params[0].is_string()) {
            throw InputError("domain 'radial' expects one expression in t");
        }
        return Domain::radial(parse(params[0].get<std::string>(), {"t"}));
    }
    throw InputError(fmt::format("unknown domain kind '{}'", kind));
}

GBCVSpace parse_space(const Json& j, std::optional<double> tol) {
    if (!j.is_object()) throw InputError("'space' must be an object");
    const Signature sig = signature_of(j);
    if (j.contains("preset")) {
        if (j["preset"] != "bcv") throw InputError("the only space preset is 'bcv'");
        return bcv_space(get_number(j, "kappa", 0.0), get_number(j, "tau", 0.0), sig);
    }
    const Domain domain = j.contains("domain") ? parse_domain(j["domain"]) : Domain::plane();
    const ScalarField delta = j.contains("delta") ? parse_field(j["delta"], "delta") : ScalarField::constant(1.0);
    const ScalarField tau = j.contains("tau") ? parse_field(j["tau"], "tau") : ScalarField::constant(0.0);
    SpaceOptions opts;
    opts.quad_tol = tol ? *tol : get_number(j, "quad_tol", opts.quad_tol);
    return GBCVSpace(BaseSurface(domain, delta), tau, sig, opts);
}

GraphSurface parse_surface(const Json& j, const std::optional<GBCVSpace>& space) {
    if (!j.is_object()) throw InputError("'surface' must be an object");
    const Domain domain = j.contains("domain") ? parse_domain(j["domain"]) : Domain::plane();
    auto need_space = [&]() -> const GBCVSpace& {
        if (!space) throw InputError("this surface needs a 'space'");
        return *space;
    };
    if (j.contains("height")) return GraphSurface(need_space(), parse_field(j["height"], "height"), domain);
    if (!j.contains("preset") || !j["preset"].is_string()) throw InputError("a surface needs 'height' or 'preset'");
    const std::string preset = j["preset"].get<std::string>();
    if (preset == "helicoid") {
        return GraphSurface(need_space(), ScalarField(helicoid(get_number(j, "mu1", 1.0), get_number(j, "mu2", 0.0))),
                            domain);
    }
    if (preset == "catenoid" || preset == "cmc-helicoid") {
        const double lambda = get_number(j, "lambda", 1.0), tau = get_number(j, "tau", 0.5);
        const Domain ann = j.contains("domain") ? domain : Domain::annulus(1.2 * lambda + 0.2, 3.0 * lambda + 1.0);
        return preset == "catenoid" ? catenoid_surface(lambda, tau, ann) : helicoidal_cmc_surface(lambda, tau, ann);
    }
    throw InputError(fmt::format("unknown surface preset '{}'", preset));
}

GridSpec parse_grid(const Json& j) {
    if (!j.is_object() || !j.contains("origin") || !j["origin"].is_array() || j["origin"].size() != 2) {
        throw InputError("'grid' needs origin [x, y], h, nx, ny");
    }
    GridSpec s;
    s.origin = {j["origin"][0].get<double>(), j["origin"][1].get<double>()};
    s.h = get_number(j, "h");
    const double nx = get_number(j, "nx"), ny = get_number(j, "ny");
    if (nx < 1 || ny < 1 || nx != std::floor(nx) || ny != std::floor(ny)) {
        throw InputError("grid nx and ny must be positive integers");
    }
    s.nx = static_cast<std::size_t>(nx);
    s.ny = static_cast<std::size_t>(ny);
    try {
        s.validate();
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    return s;
}

GridSpec default_grid(const Domain& region, std::optional<double> h) {
    if (!region.bounded()) throw InputError("cannot grid an unbounded region; give 'grid' or a bounded 'region'");
    const auto b = region.bounds();
    const double step = h ? *h : std::max(b[1] - b[0], b[3] - b[2]) / 64;
    if (!(step > 0.0)) throw InputError("grid spacing must be positive");
    return GridSpec::covering(b[0], b[1], b[2], b[3], step);
}

}  // namespace gbcv::cli
