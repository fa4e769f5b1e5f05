#pragma once

#include "gbcv/field.hpp"
#include "gbcv/quadrature.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>

namespace gbcv {

enum class Signature { Riemannian, Lorentzian };

/// +1 for Riemannian, -1 for Lorentzian: the sign of the fibre direction.
constexpr double sign_of(Signature s) noexcept { return s == Signature::Riemannian ? 1.0 : -1.0; }
const char* to_string(Signature s) noexcept;
Signature parse_signature(std::string_view text);

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Planar domain with a positive conformal factor delta; the base metric is
/// (dx^2 + dy^2) / delta^2.
class BaseSurface {
public:
    /// Checks delta > 0 on a sample of the domain (throws InputError otherwise).
    BaseSurface(Domain domain, ScalarField delta);

    const Domain& domain() const noexcept { return domain_; }
    const ScalarField& delta() const noexcept { return delta_; }
    bool contains(Point2 p) const { return domain_.contains(p); }

    /// delta and its derivatives; throws DomainError outside the domain or
    /// where delta <= 0.
    Jet delta_jet(Point2 p, int order) const;

private:
    Domain domain_;
    ScalarField delta_;
};

struct BCVParams {
    double kappa = 0.0;
    double tau = 0.0;
};

/// Calabi potential 2 * int_0^1 t tau(tp) / delta(tp)^2 dt by adaptive
/// quadrature. Requires p in the (star-shaped) base domain.
double calabi_potential(const BaseSurface& base, const ScalarField& tau, Point2 p, double tol = 1e-10);

/// Same integral together with its x/y partials up to `order`, obtained by
/// differentiating under the integral sign (needs jets of tau and delta).
Jet calabi_potential_jet(const BaseSurface& base, const ScalarField& tau, Point2 p, int order, double tol = 1e-10);

class PolarCalabiCache;

struct SpaceOptions {
    double quad_tol = 1e-10;
};

/// E^3(M, tau) or L^3(M, tau) over a base surface. Immutable; copies share
/// the potential cache.
class GBCVSpace {
public:
    using Options = SpaceOptions;

    /// The potential is computed from tau. Expression or jet-capable tau is
    /// integrated on demand; grid-backed tau gets an eagerly built polar cache
    /// over the grid's mask.
    GBCVSpace(BaseSurface base, ScalarField tau, Signature signature, Options opts);
    GBCVSpace(BaseSurface base, ScalarField tau, Signature signature)
        : GBCVSpace(std::move(base), std::move(tau), signature, Options{}) {}

    /// Uses a caller-supplied closed form for the potential.
    static GBCVSpace with_potential(BaseSurface base, ScalarField tau, Signature signature, ScalarField calabi,
                                    Options opts = SpaceOptions{});

    const BaseSurface& base() const noexcept { return *base_; }
    const ScalarField& tau() const noexcept { return tau_; }
    Signature signature() const noexcept { return signature_; }
    double sigma() const noexcept { return sign_of(signature_); }
    double quad_tol() const noexcept { return opts_.quad_tol; }
    const std::optional<BCVParams>& bcv() const noexcept { return bcv_; }
    GBCVSpace& tag_bcv(BCVParams p) {
        bcv_ = p;
        return *this;
    }

    /// Same base and signature, different bundle curvature.
    GBCVSpace with_tau(ScalarField tau) const;
    /// Same, with the potential tabulated once from pointwise values of tau
    /// over `cover` at radial spacing h (first derivatives only).
    GBCVSpace with_tau_cached(ScalarField tau, const Domain& cover, double h) const;
    GBCVSpace with_signature(Signature s) const;

    double calabi(Point2 p) const;
    Jet calabi_jet(Point2 p, int order) const;
    /// Highest derivative order calabi_jet can supply.
    int calabi_order() const noexcept;
    ScalarField calabi_field() const;
    bool has_closed_form_potential() const noexcept { return closed_.has_value(); }

    /// Coefficients of the ambient metric at (x, y, z) in coordinates.
    Mat3 metric_at(Point3 p) const;
    /// Orthonormal frame {E1, E2, E3} (or {L1, L2, L3}) in coordinate components.
    std::array<Vec3, 3> frame_at(Point3 p) const;

    std::string describe() const;

private:
    std::shared_ptr<const BaseSurface> base_;
    ScalarField tau_;
    Signature signature_;
    Options opts_;
    std::optional<ScalarField> closed_;
    std::shared_ptr<const PolarCalabiCache> cache_;
    std::optional<BCVParams> bcv_;
};

double inner(const Mat3& g, const Vec3& a, const Vec3& b);

struct DivergenceReport {
    double max_residual = 0.0;
    double l2_residual = 0.0;
    std::size_t nodes = 0;
    Grid residual;
};

/// FD residual of d/dx(x C) + d/dy(y C) - 2 tau / delta^2 over the interior
/// nodes of `spec` inside the base domain.
DivergenceReport verify_divergence_identity(const GBCVSpace& space, const GridSpec& spec);

/// Cumulative ray integrals of tau / delta^2, interpolated with cubic
/// Hermite in r and periodic cubic Lagrange in theta.
class PolarCalabiCache {
public:
    /// Bilinear tau over the grid mask; ray segments split at cell edges.
    PolarCalabiCache(const BaseSurface& base, const Grid& tau);
    /// Pointwise tau over a star-shaped bounded region.
    PolarCalabiCache(const BaseSurface& base, const std::function<double(Point2)>& tau, const Domain& cover,
                     double h);

    double value(Point2 p) const;
    Jet jet(Point2 p, int order) const;
    std::size_t rays() const noexcept { return n_theta_; }
    std::size_t radial_nodes() const noexcept { return n_r_; }

private:
    Jet interpolate(Point2 p, int order) const;
    void layout(double r_max, double h);

    std::size_t n_theta_ = 0, n_r_ = 0;
    double dr_ = 0.0, dtheta_ = 0.0;
    // Row-major by ray: index = k + n_r * j.
    std::vector<double> c_, dc_;
    std::vector<std::size_t> valid_;  // number of valid radial nodes per ray
    Jet origin_;
};

}  // namespace gbcv
