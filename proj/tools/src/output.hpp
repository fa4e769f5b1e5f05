#pragma once

#include <gbcv/field.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace gbcv::cli {

/// `x,y,value,mask` rows with 17 significant digits.
std::string grid_csv(const Grid& g);
/// {origin, h, nx, ny, values, mask}.
std::string grid_json(const Grid& g);

using Polyline = std::vector<Point2>;

/// Marching squares over cells whose four corners are masked in. Saddle
/// cells are resolved with the cell-centre average.
std::vector<Polyline> contour_lines(const Grid& g, double level);

enum class SvgStyle { Heatmap, Contour };

/// Standalone SVG. Heatmaps use a 256-step blue-white-red ramp between the
/// masked min and max; contours draw one polyline set per level. Throws
/// InputError for an empty mask.
std::string render_svg(const Grid& g, SvgStyle style, const std::vector<double>& levels = {});

/// Evenly spaced interior levels between the masked min and max.
std::vector<double> default_levels(const Grid& g, int count = 10);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gbcv::cli
