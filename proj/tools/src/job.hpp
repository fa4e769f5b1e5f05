#pragma once

#include <gbcv/graph.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace gbcv::cli {

using Json = nlohmann::json;

/// Parses a job file; malformed JSON is an InputError.
Json load_job(const std::filesystem::path& path);

/// {"kind": plane | disc | rectangle | radial | annulus, "params": [...]}.
/// Radial domains take one expression string in t.
Domain parse_domain(const Json& j);

/// {"delta", "tau", "signature", "domain", "quad_tol"} or
/// {"preset": "bcv", "kappa", "tau", "signature"}. `tol` overrides quad_tol.
GBCVSpace parse_space(const Json& j, std::optional<double> tol);

/// {"height": expr, "domain"} or {"preset": helicoid | catenoid | cmc-helicoid, ...}.
/// The radial presets carry their own ambient space; the others need `space`.
GraphSurface parse_surface(const Json& j, const std::optional<GBCVSpace>& space);

/// {"origin": [x, y], "h", "nx", "ny"}.
GridSpec parse_grid(const Json& j);

/// Lattice covering a bounded region at spacing h (default: largest side / 64).
GridSpec default_grid(const Domain& region, std::optional<double> h);

/// Expression string or number as a field in x, y.
ScalarField parse_field(const Json& j, const char* what);

double get_number(const Json& j, const char* key, std::optional<double> fallback = std::nullopt);

}  // namespace gbcv::cli
