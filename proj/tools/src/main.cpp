#include "commands.hpp"

#include <gbcv/error.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>

namespace {

using gbcv::cli::Json;
using gbcv::cli::Settings;

struct Common {
    std::string job;
    std::string out = ".";
    std::optional<double> h, tol;
    std::optional<std::string> svg;
};

void add_common(CLI::App* sub, Common& c, bool job_required) {
    sub->set_help_flag("--help", "Print this help message and exit");
    auto* job = sub->add_option("--job", c.job, "JSON job descriptor")->check(CLI::ExistingFile);
    if (job_required) job->required();
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--h", c.h, "Grid spacing (ignored when the job gives a grid)")->check(CLI::PositiveNumber);
    sub->add_option("--tol", c.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--svg", c.svg, "Also write SVG plots: heatmap or contour")
        ->expected(0, 1)
        ->default_str("heatmap");
}

Settings settings_of(const Common& c) {
    Settings s;
    s.out = c.out;
    s.h = c.h;
    s.tol = c.tol;
    if (c.svg) s.svg = c.svg->empty() ? "heatmap" : *c.svg;
    return s;
}

Json job_of(const Common& c) { return c.job.empty() ? Json::object() : gbcv::cli::load_job(c.job); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twin graphs in Riemannian and Lorentzian Killing submersions"};
    app.require_subcommand(1);
    Common c;

    auto* potential = app.add_subcommand("potential", "Sample the Calabi potential and its divergence residual");
    auto* mean = app.add_subcommand("mean-curvature", "Mean curvature and angle data of a graph");
    auto* twin = app.add_subcommand("twin", "Riemannian graph to its Lorentzian twin");
    auto* inverse = app.add_subcommand("twin-inverse", "Lorentzian graph back to its Riemannian twin");
    auto* example = app.add_subcommand("example", "Closed-form examples: helicoid, catenoid, cmc-helicoid, bcv");
    auto* bounds = app.add_subcommand("bounds", "Cheeger bound, flux chain and non-existence certificate");
    auto* verify = app.add_subcommand("verify", "Run the identity suite on a descriptor");
    for (auto* sub : {potential, mean, twin, inverse, bounds, verify}) add_common(sub, c, true);
    add_common(example, c, false);

    std::string name;
    std::optional<double> lambda, tau, mu1, mu2, kappa;
    std::optional<std::string> signature;
    example->add_option("name", name, "Example name")->required();
    example->add_option("--lambda", lambda);
    example->add_option("--tau", tau);
    example->add_option("--mu1", mu1);
    example->add_option("--mu2", mu2);
    example->add_option("--kappa", kappa);
    example->add_option("--signature", signature);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Settings s = settings_of(c);
        const Json job = job_of(c);
        if (potential->parsed()) return gbcv::cli::cmd_potential(job, s);
        if (mean->parsed()) return gbcv::cli::cmd_mean_curvature(job, s);
        if (twin->parsed()) return gbcv::cli::cmd_twin(job, s, false);
        if (inverse->parsed()) return gbcv::cli::cmd_twin(job, s, true);
        if (bounds->parsed()) return gbcv::cli::cmd_bounds(job, s);
        if (verify->parsed()) return gbcv::cli::cmd_verify(job, s);
        Json params = job.value("parameters", Json::object());
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) params[key] = *v;
        };
        put("lambda", lambda);
        put("tau", tau);
        put("mu1", mu1);
        put("mu2", mu2);
        put("kappa", kappa);
        if (signature) params["signature"] = *signature;
        return gbcv::cli::cmd_example(name, params, job, s);
    } catch (const gbcv::InputError& e) {
        fmt::print(stderr, "input error: {}\n", e.what());
        return 2;
    } catch (const Json::exception& e) {
        fmt::print(stderr, "input error: {}\n", e.what());
        return 2;
    } catch (const gbcv::NumericalError& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return 3;
    } catch (const gbcv::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
}
