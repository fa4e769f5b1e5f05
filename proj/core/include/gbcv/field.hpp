#pragma once

#include "gbcv/expr.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gbcv {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Value and partial derivatives up to second order at a point. Entries
/// above the requested order are left at zero.
struct Jet {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;
};

enum class Axis { X, Y };

/// Uniform node lattice: node (i, j) sits at origin + h * (i, j).
struct GridSpec {
    Point2 origin;
    double h = 1.0;
    std::size_t nx = 0;
    std::size_t ny = 0;

    Point2 node(std::size_t i, std::size_t j) const {
        return {origin.x + h * static_cast<double>(i), origin.y + h * static_cast<double>(j)};
    }
    std::size_t size() const { return nx * ny; }
    void validate() const;

    /// Lattice aligned with the coordinate origin covering [xmin, xmax] x [ymin, ymax].
    static GridSpec covering(double xmin, double xmax, double ymin, double ymax, double h);
};

/// Node values plus a membership mask. Storage is row-major in j:
/// index = i + nx * j.
class Grid {
public:
    Grid() = default;
    explicit Grid(GridSpec spec, double fill = 0.0, bool masked_in = false);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t nx() const noexcept { return spec_.nx; }
    std::size_t ny() const noexcept { return spec_.ny; }
    double h() const noexcept { return spec_.h; }
    Point2 node(std::size_t i, std::size_t j) const { return spec_.node(i, j); }

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i + spec_.nx * j; }
    double& at(std::size_t i, std::size_t j) { return values_[index(i, j)]; }
    double at(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }
    bool in(std::size_t i, std::size_t j) const { return mask_[index(i, j)] != 0; }
    void set_in(std::size_t i, std::size_t j, bool v) { mask_[index(i, j)] = v ? 1 : 0; }

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }
    std::size_t count_in() const;

    /// Bilinear interpolation. Valid only inside a cell whose four corners
    /// are masked in (or exactly on a masked-in node); throws DomainError
    /// otherwise.
    double interpolate(Point2 p) const;

    /// Max and root-mean-square of |value| over masked-in nodes.
    double max_abs() const;
    double rms() const;

private:
    GridSpec spec_;
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
};

/// Planar region. Every kind except Annulus is star-shaped about the origin.
class Domain {
public:
    enum class Kind { Plane, Disc, Rectangle, Radial, Annulus };

    static Domain plane();
    static Domain disc(double radius);
    static Domain rectangle(double xmin, double xmax, double ymin, double ymax);
    /// {r < r_max(t)} in polar coordinates; r_max is an expression in `t`.
    static Domain radial(Expr r_max);
    /// {r_in < r < r_out, theta_min < theta < theta_max} with theta measured
    /// by atan2 in (-pi, pi]. The full annulus uses theta range (-pi, pi].
    static Domain annulus(double r_in, double r_out, double theta_min = -3.141592653589793,
                          double theta_max = 3.141592653589793);

    Kind kind() const noexcept { return kind_; }
    bool contains(Point2 p) const;
    bool star_shaped() const noexcept { return kind_ != Kind::Annulus; }
    bool bounded() const noexcept { return kind_ != Kind::Plane; }
    /// Axis-aligned bounding box (xmin, xmax, ymin, ymax); throws for the plane.
    std::array<double, 4> bounds() const;
    /// Outward offset by `pad` (approximate for radial kinds).
    Domain dilated(double pad) const;
    /// Whether the straight segment a -> b stays inside (checked by sampling).
    bool contains_segment(Point2 a, Point2 b, std::size_t samples = 64) const;
    std::string describe() const;

    const std::vector<double>& params() const noexcept { return params_; }
    const std::optional<Expr>& radial_bound() const noexcept { return radial_; }

private:
    Kind kind_ = Kind::Plane;
    std::vector<double> params_;
    std::optional<Expr> radial_;
};

/// Real function on a planar region: expression-backed (exact symbolic
/// derivatives), grid-backed (bilinear values; derivatives through
/// fd_partial), or function-backed (a callable supplying jets up to a
/// declared order). Cheap to copy; immutable.
class ScalarField {
public:
    enum class Backing { Expression, Grid, Function };
    using JetFunction = std::function<Jet(Point2, int order)>;
    using GradientFunction = std::function<std::array<double, 2>(Point2)>;

    ScalarField();
    explicit ScalarField(Expr e);
    explicit ScalarField(Grid g);
    /// `gradient`, when given, must agree with jet(p, 1) and is used when
    /// the value itself is not needed.
    ScalarField(JetFunction fn, int max_order, std::string description = "function",
                GradientFunction gradient = {});

    static ScalarField constant(double c);
    static ScalarField parse(std::string_view source);

    Backing backing() const noexcept { return backing_; }
    double operator()(Point2 p) const;
    double operator()(double x, double y) const { return (*this)({x, y}); }

    /// Jet up to `order`; throws DomainError when the backing cannot supply it.
    Jet jet(Point2 p, int order) const;
    /// (d/dx, d/dy); requires max_order() >= 1.
    std::array<double, 2> gradient(Point2 p) const;

    /// Highest derivative order available pointwise (grid-backed fields: 0).
    int max_order() const noexcept;
    /// Expression-backed fields differentiate exactly; grid-backed ones
    /// rely on second-order finite differences.
    bool exact_derivatives() const noexcept { return backing_ != Backing::Grid; }

    const Expr* expression() const noexcept;
    const Grid* grid() const noexcept { return grid_.get(); }
    std::optional<double> constant_value() const;
    std::string describe() const;

private:
    struct ExprData;
    Backing backing_;
    std::shared_ptr<const ExprData> expr_;
    std::shared_ptr<const Grid> grid_;
    std::shared_ptr<const JetFunction> fn_;
    std::shared_ptr<const GradientFunction> grad_;
    int fn_order_ = 0;
    std::string description_;
};

/// Samples `f` at the nodes of `spec` that lie in `domain`; other nodes are
/// masked out. Throws DomainError when no node is inside.
Grid sample(const ScalarField& f, const GridSpec& spec, const Domain& domain = Domain::plane());

enum class Stencil {
    /// Central differences where both neighbours are in the mask, one-sided
    /// second-order stencils otherwise.
    AllowOneSided,
    /// Central differences only; the output mask shrinks accordingly.
    CentralOnly,
};

/// Finite-difference partial derivative of order 1 or 2. Nodes without
/// stencil support are masked out of the result; throws NumericalError if
/// none remain.
Grid fd_partial(const Grid& g, Axis axis, int order, Stencil stencil = Stencil::AllowOneSided);

}  // namespace gbcv
