#include "gbcv/ode.hpp"

#include "gbcv/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbcv {

namespace {

// Dormand–Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::size_t DenseSolution::locate(double t) const {
    const double span = t_.back() - t_.front();
    const double slack = 1e-13 * std::max(1.0, std::abs(span));
    if (!(t >= t_.front() - slack && t <= t_.back() + slack)) {
        throw DomainError(fmt::format("t = {:.17g} is outside the solution interval [{:.17g}, {:.17g}]", t,
                                      t_.front(), t_.back()));
    }
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    return std::min(k, t_.size() - 2);
}

double DenseSolution::value(double t, std::size_t i) const {
    if (t_.size() == 1) return y_[i];
    const std::size_t k = locate(t);
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    const double y0 = y_[k * dim_ + i], y1 = y_[(k + 1) * dim_ + i];
    const double f0 = f_[k * dim_ + i], f1 = f_[(k + 1) * dim_ + i];
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1;
}

double DenseSolution::derivative(double t, std::size_t i) const {
    if (t_.size() == 1) return f_[i];
    const std::size_t k = locate(t);
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    const double y0 = y_[k * dim_ + i], y1 = y_[(k + 1) * dim_ + i];
    const double f0 = f_[k * dim_ + i], f1 = f_[(k + 1) * dim_ + i];
    const double d00 = 6 * s * (s - 1);
    const double d10 = (1 - s) * (1 - 3 * s);
    const double d11 = s * (3 * s - 2);
    return d00 * (y0 - y1) / h + d10 * f0 + d11 * f1;
}

DenseSolution solve_dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0, double t1, const OdeOptions& opts,
                           std::span<const double> stops) {
    if (!(t1 > t0)) throw InputError("ODE integration interval must satisfy t1 > t0");
    if (y0.empty()) throw InputError("ODE state must be non-empty");
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw InputError("ODE tolerances must be positive");

    std::vector<double> targets;
    for (double s : stops)
        if (s > t0 && s < t1) targets.push_back(s);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    targets.push_back(t1);

    const std::size_t n = y0.size();
    DenseSolution sol;
    sol.dim_ = n;

    std::vector<double> y = std::move(y0), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    auto call = [&](double t, const std::vector<double>& state, std::vector<double>& out) {
        rhs(t, state, out);
        for (double v : out)
            if (!std::isfinite(v)) throw NumericalError(fmt::format("ODE right-hand side is not finite at t = {:.17g}", t));
    };
    call(t0, y, k1);
    sol.t_.push_back(t0);
    sol.y_.insert(sol.y_.end(), y.begin(), y.end());
    sol.f_.insert(sol.f_.end(), k1.begin(), k1.end());

    auto norm = [&](const std::vector<double>& v, const std::vector<double>& ref) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opts.atol + opts.rtol * std::abs(ref[i]);
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(n));
    };

    double h = opts.initial_step;
    if (!(h > 0.0)) {
        const double d0 = norm(y, y), d1 = norm(k1, y);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, 0.1 * (t1 - t0));
    }

    double t = t0;
    std::size_t next = 0, steps = 0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    while (next < targets.size()) {
        if (++steps > opts.max_steps) {
            throw NumericalError(fmt::format("ODE step budget of {} exhausted at t = {:.17g}", opts.max_steps, t));
        }
        const double target = targets[next];
        bool lands = false;
        double step = h;
        if (t + step >= target || target - (t + step) < 1e-3 * step) {
            step = target - t;
            lands = true;
        }
        if (step < 16 * eps * std::max(1.0, std::abs(t))) {
            throw NumericalError(fmt::format("ODE step size underflow at t = {:.17g}", t));
        }
        auto stage = [&](std::vector<double>& out, double c, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (auto& [a, k] : terms) acc += a * (*k)[i];
                tmp[i] = y[i] + step * acc;
            }
            call(t + c * step, tmp, out);
        };
        stage(k2, c2, {{a21, &k1}});
        stage(k3, c3, {{a31, &k1}, {a32, &k2}});
        stage(k4, c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        stage(k5, c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        stage(k6, 1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        const double tnew = lands ? target : t + step;
        call(tnew, ynew, k7);
        std::vector<double> err(n), ref(n);
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            ref[i] = std::max(std::abs(y[i]), std::abs(ynew[i]));
        }
        const double en = norm(err, ref);
        const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (en <= 1.0) {
            t = tnew;
            y = ynew;
            k1 = k7;
            sol.t_.push_back(t);
            sol.y_.insert(sol.y_.end(), y.begin(), y.end());
            sol.f_.insert(sol.f_.end(), k1.begin(), k1.end());
            if (lands) ++next;
            h = lands ? std::max(h, step * factor) : step * factor;
        } else {
            ++sol.rejected_;
            h = step * std::max(factor, 0.1);
        }
    }
    return sol;
}

}  // namespace gbcv
