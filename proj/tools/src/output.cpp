#include "output.hpp"

#include <gbcv/error.hpp>

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace gbcv::cli {

std::string grid_csv(const Grid& g) {
    std::string out = "x,y,value,mask\n";
    out.reserve(out.size() + g.spec().size() * 64);
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const Point2 p = g.node(i, j);
            fmt::format_to(std::back_inserter(out), "{:.17g},{:.17g},{:.17g},{}\n", p.x, p.y, g.at(i, j),
                           g.in(i, j) ? 1 : 0);
        }
    return out;
}

std::string grid_json(const Grid& g) {
    nlohmann::json j;
    j["origin"] = {g.spec().origin.x, g.spec().origin.y};
    j["h"] = g.h();
    j["nx"] = g.nx();
    j["ny"] = g.ny();
    j["values"] = g.values();
    std::vector<int> mask(g.mask().begin(), g.mask().end());
    j["mask"] = mask;
    return j.dump() + "\n";
}

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
};

Range masked_range(const Grid& g) {
    Range r;
    for (std::size_t k = 0; k < g.values().size(); ++k) {
        if (!g.mask()[k]) continue;
        r.lo = std::min(r.lo, g.values()[k]);
        r.hi = std::max(r.hi, g.values()[k]);
    }
    if (r.lo > r.hi) throw InputError("cannot plot a grid with an empty mask");
    return r;
}

std::string ramp(int k) {
    static constexpr std::array<std::array<double, 3>, 3> anchors = {
        {{59, 76, 192}, {247, 247, 247}, {180, 4, 38}}};
    const double t = k / 255.0;
    const int seg = t < 0.5 ? 0 : 1;
    const double u = t < 0.5 ? 2 * t : 2 * t - 1;
    int c[3];
    for (int i = 0; i < 3; ++i) {
        c[i] = static_cast<int>(std::lround(anchors[seg][i] + u * (anchors[seg + 1][i] - anchors[seg][i])));
    }
    return fmt::format("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]);
}

}  // namespace

std::vector<Polyline> contour_lines(const Grid& g, double level) {
    const long nx = static_cast<long>(g.nx());
    auto hedge = [nx](long i, long j) { return 2 * (i + nx * j); };
    auto vedge = [nx](long i, long j) { return 2 * (i + nx * j) + 1; };
    std::map<long, Point2> points;
    std::vector<std::array<long, 2>> segments;

    auto crossing = [&](long id, Point2 a, Point2 b, double va, double vb) {
        if (!points.count(id)) {
            const double t = (level - va) / (vb - va);
            points[id] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        }
        return id;
    };

    for (long j = 0; j + 1 < static_cast<long>(g.ny()); ++j)
        for (long i = 0; i + 1 < nx; ++i) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            if (!g.in(ui, uj) || !g.in(ui + 1, uj) || !g.in(ui + 1, uj + 1) || !g.in(ui, uj + 1)) continue;
            const double v[4] = {g.at(ui, uj), g.at(ui + 1, uj), g.at(ui + 1, uj + 1), g.at(ui, uj + 1)};
            const Point2 p[4] = {g.node(ui, uj), g.node(ui + 1, uj), g.node(ui + 1, uj + 1), g.node(ui, uj + 1)};
            int code = 0;
            for (int k = 0; k < 4; ++k)
                if (v[k] >= level) code |= 1 << k;
            if (code == 0 || code == 15) continue;
            // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c2-c3), 3 left (c3-c0).
            const long ids[4] = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
            auto edge = [&](int e) {
                const int a = e, b = (e + 1) % 4;
                return crossing(ids[e], p[a], p[b], v[a], v[b]);
            };
            auto add = [&](int e0, int e1) { segments.push_back({edge(e0), edge(e1)}); };
            if (code == 5 || code == 10) {
                const bool centre = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                if ((code == 5) == centre) {
                    add(0, 1);
                    add(2, 3);
                } else {
                    add(3, 0);
                    add(1, 2);
                }
                continue;
            }
            int found[2], n = 0;
            for (int e = 0; e < 4; ++e) {
                const bool a = v[e] >= level, b = v[(e + 1) % 4] >= level;
                if (a != b) found[n++] = e;
            }
            add(found[0], found[1]);
        }

    std::map<long, std::vector<std::size_t>> at;
    for (std::size_t s = 0; s < segments.size(); ++s)
        for (long e : segments[s]) at[e].push_back(s);
    std::vector<bool> used(segments.size(), false);
    auto next_at = [&](long e) -> long {
        for (std::size_t s : at[e])
            if (!used[s]) return static_cast<long>(s);
        return -1;
    };
    std::vector<Polyline> lines;
    auto walk = [&](long start, long s) {
        Polyline line{points[start]};
        long cur = start;
        while (s >= 0) {
            used[static_cast<std::size_t>(s)] = true;
            const auto& seg = segments[static_cast<std::size_t>(s)];
            const long other = seg[0] == cur ? seg[1] : seg[0];
            line.push_back(points[other]);
            cur = other;
            s = next_at(cur);
        }
        lines.push_back(std::move(line));
    };
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t s = 0; s < segments.size(); ++s) {
            if (used[s]) continue;
            for (long e : segments[s]) {
                if (pass == 0 && at[e].size() != 1) continue;
                walk(e, static_cast<long>(s));
                break;
            }
        }
    return lines;
}

std::vector<double> default_levels(const Grid& g, int count) {
    const Range r = masked_range(g);
    std::vector<double> out;
    if (r.hi == r.lo) return out;
    for (int k = 1; k <= count; ++k) out.push_back(r.lo + (r.hi - r.lo) * k / (count + 1));
    return out;
}

std::string render_svg(const Grid& g, SvgStyle style, const std::vector<double>& levels) {
    const Range r = masked_range(g);
    const auto& s = g.spec();
    const double x0 = s.origin.x - 0.5 * s.h, y0 = s.origin.y - 0.5 * s.h;
    const double w = s.h * static_cast<double>(s.nx), hgt = s.h * static_cast<double>(s.ny);
    const double px = 800.0, py = std::max(1.0, std::round(px * hgt / w));

    std::string out;
    auto put = [&out](fmt::string_view f, const auto&... args) {
        fmt::vformat_to(std::back_inserter(out), f, fmt::make_format_args(args...));
    };
    put("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    put("<!-- Field plot. The y axis points up: the group transform scale(1,-1) flips screen y so the picture keeps "
        "the mathematical orientation. -->\n");
    put("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{:.10g} {:.10g} {:.10g} "
        "{:.10g}\">\n",
        px, py, x0, -(y0 + hgt), w, hgt);
    put("<g transform=\"scale(1,-1)\">\n");
    if (style == SvgStyle::Heatmap) {
        put("<!-- 256-step ramp #3b4cc0 (min {:.17g}) to #f7f7f7 to #b40426 (max {:.17g}) -->\n", r.lo, r.hi);
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) {
                if (!g.in(i, j)) continue;
                const int k = r.hi > r.lo ? static_cast<int>(std::lround(255 * (g.at(i, j) - r.lo) / (r.hi - r.lo)))
                                          : 128;
                const Point2 p = g.node(i, j);
                put("<rect x=\"{:.10g}\" y=\"{:.10g}\" width=\"{:.10g}\" height=\"{:.10g}\" fill=\"{}\" "
                    "shape-rendering=\"crispEdges\"/>\n",
                    p.x - 0.5 * s.h, p.y - 0.5 * s.h, s.h, s.h, ramp(k));
            }
    } else {
        put("<rect x=\"{:.10g}\" y=\"{:.10g}\" width=\"{:.10g}\" height=\"{:.10g}\" fill=\"#ffffff\"/>\n", x0, y0, w,
            hgt);
        for (double level : levels) {
            const int k = r.hi > r.lo ? static_cast<int>(std::lround(255 * std::clamp((level - r.lo) / (r.hi - r.lo), 0.0, 1.0)))
                                      : 128;
            put("<g fill=\"none\" stroke=\"{}\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\">\n"
                "<title>level {:.17g}</title>\n",
                ramp(k), level);
            for (const Polyline& line : contour_lines(g, level)) {
                put("<polyline points=\"");
                for (std::size_t n = 0; n < line.size(); ++n) put("{}{:.10g},{:.10g}", n ? " " : "", line[n].x, line[n].y);
                put("\"/>\n");
            }
            put("</g>\n");
        }
    }
    put("</g>\n</svg>\n");
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError(fmt::format("cannot open '{}' for writing", path.string()));
    f << text;
    if (!f) throw InputError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace gbcv::cli
