#include "commands.hpp"
#include "output.hpp"

#include <gbcv/error.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

using namespace gbcv;
using namespace gbcv::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gbcv_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run(const std::string& args) {
    const int status = std::system((std::string(GBCV_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("CSV output") {
    GridSpec s;
    s.origin = {0.1, -0.2};
    s.h = 0.5;
    s.nx = 2;
    s.ny = 1;
    Grid g(s);
    g.at(0, 0) = 1.0 / 3;
    g.set_in(0, 0, true);
    const std::string csv = grid_csv(g);
    CHECK(csv.rfind("x,y,value,mask\n", 0) == 0);
    CHECK(csv.find("0.10000000000000001,-0.20000000000000001,0.33333333333333331,1\n") != std::string::npos);
    CHECK(csv.find(",0\n") != std::string::npos);
    const Json j = Json::parse(grid_json(g));
    CHECK(j["nx"] == 2);
    CHECK(j["mask"][1] == 0);
    CHECK(j["values"][0].get<double>() == 1.0 / 3);
}

TEST_CASE("contours of x^2 + y^2 approximate the unit circle") {
    const double h = 1.0 / 16;
    const GridSpec s = GridSpec::covering(-1.5, 1.5, -1.5, 1.5, h);
    const Grid g = sample(ScalarField::parse("x^2 + y^2"), s);
    const auto lines = contour_lines(g, 1.0);
    REQUIRE(lines.size() == 1);
    const Polyline& c = lines[0];
    CHECK(c.front().x == c.back().x);
    CHECK(c.front().y == c.back().y);
    double dev = 0;
    for (Point2 p : c) dev = std::max(dev, std::abs(std::hypot(p.x, p.y) - 1));
    CHECK(dev <= h);
    CHECK(c.size() > 60);
    const auto open = contour_lines(sample(ScalarField::parse("x"), s, Domain::disc(1)), 0.25);
    REQUIRE(open.size() == 1);
    CHECK(open[0].front().x == doctest::Approx(0.25));
}

TEST_CASE("SVG rendering") {
    const GridSpec s = GridSpec::covering(-1, 1, -1, 1, 0.5);
    const Grid flat = sample(ScalarField::constant(2.0), s);
    const std::string svg = render_svg(flat, SvgStyle::Heatmap, {});
    CHECK(svg.find("scale(1,-1)") != std::string::npos);
    std::size_t rects = 0;
    std::set<std::string> fills;
    for (std::size_t at = svg.find("<rect"); at != std::string::npos; at = svg.find("<rect", at + 1)) ++rects;
    for (std::size_t at = svg.find("fill=\"#"); at != std::string::npos; at = svg.find("fill=\"#", at + 1))
        fills.insert(svg.substr(at + 6, 7));
    CHECK(rects == 25);
    CHECK(fills == std::set<std::string>{"#f7f6f6"});
    const std::string contour = render_svg(sample(ScalarField::parse("x*x + y*y"), s), SvgStyle::Contour, {0.5});
    CHECK(contour.find("<polyline") != std::string::npos);
    CHECK(render_svg(flat, SvgStyle::Heatmap, {}) == svg);
    Grid empty(s);
    CHECK_THROWS_AS(render_svg(empty, SvgStyle::Heatmap, {}), InputError);
}

TEST_CASE("job parsing") {
    CHECK(parse_domain(Json::parse(R"({"kind": "disc", "params": [2]})")).contains({1.5, 0}));
    CHECK_THROWS_AS(parse_domain(Json::parse(R"({"kind": "blob"})")), InputError);
    CHECK_THROWS_AS(parse_domain(Json::parse(R"({"kind": "annulus", "params": [1, 2, 3]})")), InputError);
    const GBCVSpace s = parse_space(Json::parse(R"({"preset": "bcv", "kappa": -1, "tau": 0.5, "signature": "lorentzian"})"),
                                    std::nullopt);
    CHECK(s.sigma() == -1);
    CHECK(s.calabi({1, 0}) == doctest::Approx(0.5 / 0.75));
    CHECK_THROWS_AS(parse_space(Json::parse(R"({"delta": "1 +", "tau": 0})"), std::nullopt), ParseError);
    CHECK_THROWS_AS(parse_surface(Json::parse(R"({"height": "x"})"), std::nullopt), InputError);
    CHECK_THROWS_AS(parse_grid(Json::parse(R"({"origin": [0, 0], "h": 0.1, "nx": 0, "ny": 3})")), InputError);
}

TEST_CASE("twin command on the linear pair") {
    Settings st;
    st.out = scratch("twin");
    const Json job = Json::parse(R"({
        "space": {"delta": "1", "tau": "0"},
        "surface": {"height": "0.6*x - 0.8*y", "domain": {"kind": "disc", "params": [0.5]}},
        "options": {"mean_curvature": 0}})");
    CHECK(cmd_twin(job, st, false) == 0);
    const Json g = Json::parse(read(st.out / "lorentzian_height.json"));
    const double h = g["h"], x0 = g["origin"][0], y0 = g["origin"][1];
    const std::size_t nx = g["nx"];
    double err = 0;
    for (std::size_t k = 0; k < g["values"].size(); ++k) {
        if (g["mask"][k] == 0) continue;
        const double x = x0 + h * static_cast<double>(k % nx), y = y0 + h * static_cast<double>(k / nx);
        err = std::max(err, std::abs(g["values"][k].get<double>() - (0.8 * x + 0.6 * y) / std::sqrt(2.0)));
    }
    CHECK(err < 1e-9);
    const Json summary = Json::parse(read(st.out / "summary.json"));
    CHECK(summary["schema"] == 1);
    CHECK(summary["residuals"]["omega_product_max"].get<double>() < 1e-12);
    CHECK(summary["tolerances"]["closedness_tol"] == 1e-6);
}

TEST_CASE("mean-curvature and potential commands") {
    Settings st;
    st.out = scratch("mean");
    const Json job = Json::parse(R"({
        "space": {"preset": "bcv", "kappa": 0, "tau": 0.5},
        "surface": {"preset": "helicoid", "mu1": 1, "mu2": 0, "domain": {"kind": "annulus", "params": [0.1, 0.9]}}})");
    CHECK(cmd_mean_curvature(job, st) == 0);
    const Json summary = Json::parse(read(st.out / "summary.json"));
    CHECK(summary["mean_curvature"]["max_abs"].get<double>() <= 1e-6);

    st.out = scratch("potential");
    CHECK(cmd_potential(Json::parse(R"({"space": {"delta": "1", "tau": "0"}})"), st) == 0);
    const Json c = Json::parse(read(st.out / "potential.json"));
    for (const Json& v : c["values"]) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("bounds command") {
    Settings st;
    st.out = scratch("bounds");
    CHECK(cmd_bounds(Json::parse(R"({"space": {"preset": "bcv", "kappa": -1, "tau": 1}})"), st) == 0);
    CHECK(Json::parse(read(st.out / "summary.json"))["verdict"] == "CERTIFIED");
}

TEST_CASE("executable exit codes") {
    const fs::path dir = scratch("exit");
    std::ofstream(dir / "bad.json") << R"({"space": {"delta": "1", "tau": "x +* y"}})";
    std::ofstream(dir / "ok.json") << R"({"space": {"preset": "bcv", "kappa": 0, "tau": 1}})";
    std::ofstream(dir / "empty.json") << R"({"space": {"preset": "bcv", "kappa": 0, "tau": 1},
        "grid": {"origin": [5, 5], "h": 0.1, "nx": 3, "ny": 3}, "region": {"kind": "disc", "params": [1]}})";
    const std::string out = " --out " + (dir / "o").string();
    CHECK(run("potential --job " + (dir / "ok.json").string() + out) == 0);
    CHECK(run("potential --job " + (dir / "bad.json").string() + out) == 2);
    CHECK(run("potential --job " + (dir / "empty.json").string() + out + " --svg") == 2);
    CHECK(run("potential --job " + (dir / "missing.json").string() + out) == 2);
    CHECK(run("nonsense") == 2);
    CHECK(run("example nothing" + out) == 2);
}
