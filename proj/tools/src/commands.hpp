#pragma once

#include "job.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace gbcv::cli {

struct Settings {
    std::filesystem::path out = ".";
    /// Spacing of generated grids; an explicit "grid" in the job wins.
    std::optional<double> h;
    /// Quadrature tolerance used throughout.
    std::optional<double> tol;
    /// "heatmap" or "contour".
    std::optional<std::string> svg;
};

// Each command writes <name>.csv / <name>.json grids and summary.json into
// settings.out and returns the process exit code.
int cmd_potential(const Json& job, const Settings& s);
int cmd_mean_curvature(const Json& job, const Settings& s);
int cmd_twin(const Json& job, const Settings& s, bool inverse);
/// `name` is helicoid, catenoid, cmc-helicoid or bcv; `params` holds its
/// parameters (lambda, tau, mu1, mu2, kappa, signature, domain).
int cmd_example(const std::string& name, const Json& params, const Json& job, const Settings& s);
int cmd_bounds(const Json& job, const Settings& s);
/// Identity suite; exit code 3 when a check fails.
int cmd_verify(const Json& job, const Settings& s);

}  // namespace gbcv::cli
