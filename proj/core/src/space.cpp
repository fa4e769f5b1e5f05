#include "gbcv/space.hpp"

#include "gbcv/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gbcv {

const char* to_string(Signature s) noexcept { return s == Signature::Riemannian ? "riemannian" : "lorentzian"; }

Signature parse_signature(std::string_view text) {
    if (text == "riemannian" || text == "E") return Signature::Riemannian;
    if (text == "lorentzian" || text == "L") return Signature::Lorentzian;
    throw InputError(fmt::format("unknown signature '{}' (expected riemannian or lorentzian)", text));
}

// ---------------------------------------------------------------------------
// BaseSurface

BaseSurface::BaseSurface(Domain domain, ScalarField delta) : domain_(std::move(domain)), delta_(std::move(delta)) {
    if (!domain_.star_shaped()) throw InputError("the base domain must be star-shaped about the origin");
    std::array<double, 4> box{-10.0, 10.0, -10.0, 10.0};
    if (domain_.bounded()) box = domain_.bounds();
    constexpr int n = 41;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Point2 p{box[0] + (box[1] - box[0]) * i / (n - 1), box[2] + (box[3] - box[2]) * j / (n - 1)};
            if (!domain_.contains(p)) continue;
            double d = 0.0;
            try {
                d = delta_(p);
            } catch (const DomainError& e) {
                throw InputError(fmt::format("conformal factor cannot be evaluated at ({:.6g}, {:.6g}): {}", p.x,
                                             p.y, e.what()));
            }
            if (!(d > 0.0)) {
                throw InputError(fmt::format("conformal factor is not positive at ({:.6g}, {:.6g}): delta = {:.6g}",
                                             p.x, p.y, d));
            }
        }
    }
}

Jet BaseSurface::delta_jet(Point2 p, int order) const {
    if (!domain_.contains(p)) {
        throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the base domain {}", p.x, p.y,
                                      domain_.describe()));
    }
    Jet j = delta_.jet(p, order);
    if (!(j.value > 0.0)) {
        throw DomainError(fmt::format("conformal factor is not positive at ({:.17g}, {:.17g})", p.x, p.y));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Calabi potential by quadrature

namespace {

// Jet of q = tau / delta^2.
Jet quotient_jet(const Jet& t, const Jet& d, int order) {
    Jet q;
    const double d2 = d.value * d.value, d3 = d2 * d.value, d4 = d2 * d2;
    q.value = t.value / d2;
    if (order >= 1) {
        q.dx = t.dx / d2 - 2 * t.value * d.dx / d3;
        q.dy = t.dy / d2 - 2 * t.value * d.dy / d3;
    }
    if (order >= 2) {
        q.dxx = t.dxx / d2 - 4 * t.dx * d.dx / d3 - 2 * t.value * d.dxx / d3 + 6 * t.value * d.dx * d.dx / d4;
        q.dyy = t.dyy / d2 - 4 * t.dy * d.dy / d3 - 2 * t.value * d.dyy / d3 + 6 * t.value * d.dy * d.dy / d4;
        q.dxy = t.dxy / d2 - 2 * t.dx * d.dy / d3 - 2 * t.dy * d.dx / d3 - 2 * t.value * d.dxy / d3 +
                6 * t.value * d.dx * d.dy / d4;
    }
    return q;
}

template <std::size_t N>
Jet calabi_quadrature(const BaseSurface& base, const ScalarField& tau, Point2 p, int order, double tol) {
    auto integrand = [&](double t) {
        const Point2 tp{t * p.x, t * p.y};
        const Jet q = quotient_jet(tau.jet(tp, order), base.delta_jet(tp, order), order);
        std::array<double, N> v{};
        v[0] = 2 * t * q.value;
        if constexpr (N >= 3) {
            v[1] = 2 * t * t * q.dx;
            v[2] = 2 * t * t * q.dy;
        }
        if constexpr (N >= 6) {
            const double t3 = 2 * t * t * t;
            v[3] = t3 * q.dxx;
            v[4] = t3 * q.dxy;
            v[5] = t3 * q.dyy;
        }
        return v;
    };
    QuadOptions opts;
    opts.abs_tol = tol;
    const auto r = integrate_n<N>(integrand, 0.0, 1.0, opts);
    Jet c;
    c.value = r.value[0];
    if constexpr (N >= 3) {
        c.dx = r.value[1];
        c.dy = r.value[2];
    }
    if constexpr (N >= 6) {
        c.dxx = r.value[3];
        c.dxy = r.value[4];
        c.dyy = r.value[5];
    }
    return c;
}

void require_in_base(const BaseSurface& base, Point2 p) {
    if (!base.contains(p)) {
        throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the base domain {}", p.x, p.y,
                                      base.domain().describe()));
    }
}

}  // namespace

double calabi_potential(const BaseSurface& base, const ScalarField& tau, Point2 p, double tol) {
    return calabi_potential_jet(base, tau, p, 0, tol).value;
}

Jet calabi_potential_jet(const BaseSurface& base, const ScalarField& tau, Point2 p, int order, double tol) {
    if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (order < 0 || order > 2) throw InputError("jet order must be 0, 1 or 2");
    require_in_base(base, p);
    switch (order) {
    case 0: return calabi_quadrature<1>(base, tau, p, 0, tol);
    case 1: return calabi_quadrature<3>(base, tau, p, 1, tol);
    default: return calabi_quadrature<6>(base, tau, p, 2, tol);
    }
}

// ---------------------------------------------------------------------------
// Polar cache for grid-backed tau

namespace {

bool cell_ok(const Grid& g, long ci, long cj) {
    if (ci < 0 || cj < 0 || ci + 1 >= static_cast<long>(g.nx()) || cj + 1 >= static_cast<long>(g.ny())) return false;
    const auto i = static_cast<std::size_t>(ci), j = static_cast<std::size_t>(cj);
    return g.in(i, j) && g.in(i + 1, j) && g.in(i, j + 1) && g.in(i + 1, j + 1);
}

double bilinear_in_cell(const Grid& g, long ci, long cj, Point2 p) {
    const auto i = static_cast<std::size_t>(ci), j = static_cast<std::size_t>(cj);
    const Point2 o = g.node(i, j);
    const double tx = (p.x - o.x) / g.h(), ty = (p.y - o.y) / g.h();
    return (1 - tx) * (1 - ty) * g.at(i, j) + tx * (1 - ty) * g.at(i + 1, j) + (1 - tx) * ty * g.at(i, j + 1) +
           tx * ty * g.at(i + 1, j + 1);
}

std::pair<long, long> cell_of(const Grid& g, Point2 p) {
    const auto& s = g.spec();
    return {static_cast<long>(std::floor((p.x - s.origin.x) / s.h)),
            static_cast<long>(std::floor((p.y - s.origin.y) / s.h))};
}

// Cubic Lagrange weights on nodes -1, 0, 1, 2 and their u-derivatives.
void lagrange4(double u, double w[4], double dw[4]) {
    const double a = u + 1, b = u, c = u - 1, d = u - 2;
    w[0] = -b * c * d / 6;
    w[1] = a * c * d / 2;
    w[2] = -a * b * d / 2;
    w[3] = a * b * c / 6;
    dw[0] = -(c * d + b * d + b * c) / 6;
    dw[1] = (c * d + a * d + a * c) / 2;
    dw[2] = -(b * d + a * d + a * b) / 2;
    dw[3] = (b * c + a * c + a * b) / 6;
}

}  // namespace

void PolarCalabiCache::layout(double r_max, double h) {
    dr_ = h;
    n_r_ = static_cast<std::size_t>(std::ceil(r_max / dr_)) + 2;
    n_theta_ = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(2 * std::numbers::pi * r_max / h)));
    n_theta_ = (n_theta_ + 3) / 4 * 4;
    dtheta_ = 2 * std::numbers::pi / static_cast<double>(n_theta_);
    c_.assign(n_r_ * n_theta_, 0.0);
    dc_.assign(n_r_ * n_theta_, 0.0);
    valid_.assign(n_theta_, 0);
}

PolarCalabiCache::PolarCalabiCache(const BaseSurface& base, const std::function<double(Point2)>& tau,
                                   const Domain& cover, double h) {
    if (!(h > 0.0)) throw InputError("cache spacing must be positive");
    if (!cover.bounded() || !cover.star_shaped()) {
        throw InputError("the potential cache needs a bounded star-shaped region");
    }
    if (!cover.contains({0.0, 0.0})) throw DomainError("the potential cache region must contain the origin");
    const auto b = cover.bounds();
    const double r_max = std::max(std::hypot(b[0], b[2]),
                                  std::max(std::hypot(b[0], b[3]), std::max(std::hypot(b[1], b[2]), std::hypot(b[1], b[3]))));
    layout(r_max, h);
    auto q = [&](Point2 p) {
        const double d = base.delta_jet(p, 0).value;
        return tau(p) / (d * d);
    };
    const double q0 = q({0.0, 0.0});
    const double gx = std::sqrt(3.0 / 5.0);
    const double eps = 1e-5 * h;
    for (std::size_t j = 0; j < n_theta_; ++j) {
        const double th = dtheta_ * static_cast<double>(j);
        const double ex = std::cos(th), ey = std::sin(th);
        const double dq = (q({eps * ex, eps * ey}) - q({-eps * ex, -eps * ey})) / (2 * eps);
        c_[j * n_r_] = q0;
        dc_[j * n_r_] = 2.0 / 3.0 * dq;
        if (j == 0) origin_.dx = dc_[0];
        if (j == n_theta_ / 4) origin_.dy = dc_[j * n_r_];
        double integral = 0.0;
        std::size_t k = 1;
        for (; k < n_r_; ++k) {
            const double r = dr_ * static_cast<double>(k);
            if (!cover.contains({r * ex, r * ey})) break;
            const double sm = r - 0.5 * dr_, half = 0.5 * dr_;
            auto f = [&](double s) { return s * q({s * ex, s * ey}); };
            integral += half * (5.0 / 9 * f(sm - gx * half) + 8.0 / 9 * f(sm) + 5.0 / 9 * f(sm + gx * half));
            const double c = 2 * integral / (r * r);
            c_[j * n_r_ + k] = c;
            dc_[j * n_r_ + k] = 2 * (q({r * ex, r * ey}) - c) / r;
        }
        valid_[j] = k;
    }
    origin_.value = q0;
}

PolarCalabiCache::PolarCalabiCache(const BaseSurface& base, const Grid& tau) {
    const double h = tau.h();
    double r_max = 0.0;
    for (std::size_t j = 0; j < tau.ny(); ++j)
        for (std::size_t i = 0; i < tau.nx(); ++i)
            if (tau.in(i, j)) {
                const Point2 p = tau.node(i, j);
                r_max = std::max(r_max, std::hypot(p.x, p.y));
            }
    layout(r_max, h);

    auto q_in_cell = [&](long ci, long cj, Point2 p) {
        const double d = base.delta_jet(p, 0).value;
        return bilinear_in_cell(tau, ci, cj, p) / (d * d);
    };
    const auto [oi, oj] = cell_of(tau, {0.0, 0.0});
    if (!cell_ok(tau, oi, oj)) throw DomainError("the bundle-curvature grid must cover the origin");
    const double q0 = q_in_cell(oi, oj, {0.0, 0.0});

    const auto& spec = tau.spec();
    const double gx = std::sqrt(3.0 / 5.0);
    std::vector<double> breaks;
    for (std::size_t j = 0; j < n_theta_; ++j) {
        const double th = dtheta_ * static_cast<double>(j);
        const double ex = std::cos(th), ey = std::sin(th);
        const double s_end = dr_ * static_cast<double>(n_r_ - 1);
        breaks.clear();
        for (std::size_t k = 0; k < n_r_; ++k) breaks.push_back(dr_ * static_cast<double>(k));
        for (auto [e, o, n] : {std::tuple{ex, spec.origin.x, spec.nx}, std::tuple{ey, spec.origin.y, spec.ny}}) {
            if (std::abs(e) < 1e-15) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = (o + h * static_cast<double>(i)) / e;
                if (s > 0.0 && s < s_end) breaks.push_back(s);
            }
        }
        std::sort(breaks.begin(), breaks.end());

        // Directional derivative of q at the origin along this ray.
        {
            const double eps = 1e-7 * h;
            const Point2 pe{eps * ex, eps * ey};
            const auto [ci, cj] = cell_of(tau, pe);
            const double dq = cell_ok(tau, ci, cj) ? (q_in_cell(ci, cj, pe) - q0) / eps : 0.0;
            c_[j * n_r_] = q0;
            dc_[j * n_r_] = 2.0 / 3.0 * dq;
            if (j == 0) origin_.dx = dc_[0];
            if (j == n_theta_ / 4) origin_.dy = dc_[j * n_r_];
        }

        double integral = 0.0;
        std::size_t next_k = 1;
        bool alive = true;
        for (std::size_t b = 0; b + 1 < breaks.size() && alive; ++b) {
            const double s0 = breaks[b], s1 = breaks[b + 1];
            if (s1 - s0 < 1e-14 * std::max(1.0, s1)) continue;
            const double sm = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
            const auto [ci, cj] = cell_of(tau, {sm * ex, sm * ey});
            if (!cell_ok(tau, ci, cj)) {
                alive = false;
                break;
            }
            auto f = [&](double s) { return s * q_in_cell(ci, cj, {s * ex, s * ey}); };
            integral += half * (5.0 / 9 * f(sm - gx * half) + 8.0 / 9 * f(sm) + 5.0 / 9 * f(sm + gx * half));
            while (next_k < n_r_ && dr_ * static_cast<double>(next_k) <= s1 * (1 + 1e-13)) {
                const double r = dr_ * static_cast<double>(next_k);
                const double c = 2 * integral / (r * r);
                const double q = q_in_cell(ci, cj, {r * ex, r * ey});
                c_[j * n_r_ + next_k] = c;
                dc_[j * n_r_ + next_k] = 2 * (q - c) / r;
                ++next_k;
            }
        }
        valid_[j] = next_k;
    }
    origin_.value = q0;
}

Jet PolarCalabiCache::interpolate(Point2 p, int order) const {
    const double r = std::hypot(p.x, p.y);
    if (r < 1e-12) return origin_;
    double th = std::atan2(p.y, p.x);
    if (th < 0) th += 2 * std::numbers::pi;
    const double ft = th / dtheta_;
    const long j0 = static_cast<long>(std::floor(ft));
    const double u = ft - static_cast<double>(j0);
    std::size_t k = static_cast<std::size_t>(std::floor(r / dr_));
    double s = r / dr_ - static_cast<double>(k);

    std::size_t rays[4];
    std::size_t min_valid = n_r_;
    for (long m = 0; m < 4; ++m) {
        const long jj = ((j0 - 1 + m) % static_cast<long>(n_theta_) + static_cast<long>(n_theta_)) %
                        static_cast<long>(n_theta_);
        rays[m] = static_cast<std::size_t>(jj);
        min_valid = std::min(min_valid, valid_[rays[m]]);
    }
    if (k + 1 >= min_valid && k + 1 == min_valid && s < 1e-9 && k > 0) {
        k -= 1;
        s = 1.0;
    }
    if (k + 1 >= min_valid) {
        throw DomainError(fmt::format("point ({:.17g}, {:.17g}) is outside the potential cache", p.x, p.y));
    }
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    const double d00 = 6 * s * (s - 1) / dr_, d10 = (1 - s) * (1 - 3 * s), d11 = s * (3 * s - 2);
    double w[4], dw[4];
    lagrange4(u, w, dw);
    double c = 0.0, cr = 0.0, ct = 0.0;
    for (int m = 0; m < 4; ++m) {
        const std::size_t base = rays[m] * n_r_ + k;
        const double y0 = c_[base], y1 = c_[base + 1], f0 = dc_[base], f1 = dc_[base + 1];
        const double v = h00 * y0 + h10 * dr_ * f0 + h01 * y1 + h11 * dr_ * f1;
        c += w[m] * v;
        ct += dw[m] * v;
        if (order >= 1) cr += w[m] * (d00 * (y0 - y1) + d10 * f0 + d11 * f1);
    }
    ct /= dtheta_;
    Jet out;
    out.value = c;
    if (order >= 1) {
        const double cs = std::cos(th), sn = std::sin(th);
        out.dx = cs * cr - sn * ct / r;
        out.dy = sn * cr + cs * ct / r;
    }
    return out;
}

double PolarCalabiCache::value(Point2 p) const { return interpolate(p, 0).value; }

Jet PolarCalabiCache::jet(Point2 p, int order) const {
    if (order > 1) throw DomainError("the cached potential supplies derivatives up to order 1 only");
    return interpolate(p, order);
}

// ---------------------------------------------------------------------------
// GBCVSpace

GBCVSpace::GBCVSpace(BaseSurface base, ScalarField tau, Signature signature, Options opts)
    : base_(std::make_shared<const BaseSurface>(std::move(base))), tau_(std::move(tau)), signature_(signature),
      opts_(opts) {
    if (!(opts_.quad_tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (tau_.backing() == ScalarField::Backing::Grid) {
        cache_ = std::make_shared<const PolarCalabiCache>(*base_, *tau_.grid());
    }
}

GBCVSpace GBCVSpace::with_potential(BaseSurface base, ScalarField tau, Signature signature, ScalarField calabi,
                                    Options opts) {
    GBCVSpace s(std::move(base), ScalarField::constant(0.0), signature, opts);
    s.tau_ = std::move(tau);
    s.closed_ = std::move(calabi);
    return s;
}

GBCVSpace GBCVSpace::with_tau(ScalarField tau) const {
    GBCVSpace s = *this;
    s.tau_ = std::move(tau);
    s.closed_.reset();
    s.cache_.reset();
    s.bcv_.reset();
    if (s.tau_.backing() == ScalarField::Backing::Grid) {
        s.cache_ = std::make_shared<const PolarCalabiCache>(*s.base_, *s.tau_.grid());
    }
    return s;
}

GBCVSpace GBCVSpace::with_tau_cached(ScalarField tau, const Domain& cover, double h) const {
    GBCVSpace s = *this;
    s.tau_ = std::move(tau);
    s.closed_.reset();
    s.bcv_.reset();
    const ScalarField f = s.tau_;
    s.cache_ = std::make_shared<const PolarCalabiCache>(*s.base_, [&f](Point2 p) { return f(p); }, cover, h);
    return s;
}

GBCVSpace GBCVSpace::with_signature(Signature sig) const {
    GBCVSpace s = *this;
    s.signature_ = sig;
    return s;
}

double GBCVSpace::calabi(Point2 p) const {
    require_in_base(*base_, p);
    if (closed_) return (*closed_)(p);
    if (cache_) return cache_->value(p);
    return calabi_potential(*base_, tau_, p, opts_.quad_tol);
}

Jet GBCVSpace::calabi_jet(Point2 p, int order) const {
    require_in_base(*base_, p);
    if (closed_) return closed_->jet(p, order);
    if (cache_) return cache_->jet(p, order);
    return calabi_potential_jet(*base_, tau_, p, order, opts_.quad_tol);
}

int GBCVSpace::calabi_order() const noexcept {
    if (closed_) return closed_->max_order();
    if (cache_) return 1;
    return std::min(tau_.max_order(), base_->delta().max_order());
}

ScalarField GBCVSpace::calabi_field() const {
    GBCVSpace self = *this;
    return ScalarField([self](Point2 p, int order) { return self.calabi_jet(p, order); }, calabi_order(),
                       "calabi potential");
}

Mat3 GBCVSpace::metric_at(Point3 p) const {
    const Point2 q{p.x, p.y};
    const double d = base_->delta_jet(q, 0).value;
    const double c = calabi(q);
    const double s = sigma();
    const Vec3 w{s * c * p.y, -s * c * p.x, 1.0};
    Mat3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = s * w[i] * w[j];
    g[0][0] += 1.0 / (d * d);
    g[1][1] += 1.0 / (d * d);
    return g;
}

std::array<Vec3, 3> GBCVSpace::frame_at(Point3 p) const {
    const Point2 q{p.x, p.y};
    const double d = base_->delta_jet(q, 0).value;
    const double c = calabi(q);
    const double s = sigma();
    return {Vec3{d, 0.0, -s * d * p.y * c}, Vec3{0.0, d, s * d * p.x * c}, Vec3{0.0, 0.0, 1.0}};
}

std::string GBCVSpace::describe() const {
    if (bcv_) {
        return fmt::format("{}^3(kappa={:.17g}, tau={:.17g})", signature_ == Signature::Riemannian ? "E" : "L",
                           bcv_->kappa, bcv_->tau);
    }
    return fmt::format("{}^3(delta={}, tau={}, domain={})", signature_ == Signature::Riemannian ? "E" : "L",
                       base_->delta().describe(), tau_.describe(), base_->domain().describe());
}

double inner(const Mat3& g, const Vec3& a, const Vec3& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a[i] * g[i][j] * b[j];
    return s;
}

DivergenceReport verify_divergence_identity(const GBCVSpace& space, const GridSpec& spec) {
    spec.validate();
    Grid c = sample(space.calabi_field(), spec, space.base().domain());
    Grid xc = c, yc = c;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            const Point2 p = spec.node(i, j);
            xc.at(i, j) *= p.x;
            yc.at(i, j) *= p.y;
        }
    const Grid dx = fd_partial(xc, Axis::X, 1, Stencil::CentralOnly);
    const Grid dy = fd_partial(yc, Axis::Y, 1, Stencil::CentralOnly);
    DivergenceReport rep;
    rep.residual = Grid(spec);
    double sum = 0.0;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) {
            if (!dx.in(i, j) || !dy.in(i, j)) continue;
            const Point2 p = spec.node(i, j);
            const double d = space.base().delta_jet(p, 0).value;
            const double r = dx.at(i, j) + dy.at(i, j) - 2 * space.tau()(p) / (d * d);
            rep.residual.at(i, j) = r;
            rep.residual.set_in(i, j, true);
            rep.max_residual = std::max(rep.max_residual, std::abs(r));
            sum += r * r;
            ++rep.nodes;
        }
    if (rep.nodes == 0) throw NumericalError("divergence check: no interior grid nodes");
    rep.l2_residual = std::sqrt(sum * spec.h * spec.h);
    return rep;
}

}  // namespace gbcv
