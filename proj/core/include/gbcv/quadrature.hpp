#pragma once

#include "gbcv/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace gbcv {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    std::size_t max_evals = 2'000'000;
};

template <std::size_t N>
struct QuadResultN {
    std::array<double, N> value{};
    double error = 0.0;
    std::size_t evals = 0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5, 7 above.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double a, b;
    std::array<double, N> value;
    double error;
    double magnitude;  // integral of |f|, used for the round-off floor
};

template <std::size_t N, class F>
Panel<N> kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, N> kron{}, gauss{}, mag{};
    auto accumulate = [&](const std::array<double, N>& v, double wk, double wg) {
        for (std::size_t i = 0; i < N; ++i) {
            kron[i] += wk * v[i];
            gauss[i] += wg * v[i];
            mag[i] += wk * std::abs(v[i]);
        }
    };
    accumulate(f(c), kKronrodWeights[7], kGaussWeights[3]);
    for (std::size_t k = 0; k < 7; ++k) {
        const double dx = half * kKronrodNodes[k];
        const double wg = (k % 2 == 1) ? kGaussWeights[k / 2] : 0.0;
        accumulate(f(c - dx), kKronrodWeights[k], wg);
        accumulate(f(c + dx), kKronrodWeights[k], wg);
    }
    Panel<N> p{a, b, {}, 0.0, 0.0};
    const double w = std::abs(half);
    for (std::size_t i = 0; i < N; ++i) {
        p.value[i] = kron[i] * half;
        p.error = std::max(p.error, std::abs((kron[i] - gauss[i]) * half));
        p.magnitude = std::max(p.magnitude, mag[i] * w);
    }
    return p;
}

}  // namespace detail

/// Adaptive Gauss–Kronrod integration of a vector-valued integrand
/// (`f(t)` returns std::array<double, N>). Panels with the largest error
/// estimate are bisected until the summed estimate meets
/// max(abs_tol, rel_tol * |I|) in every component. Panels already at the
/// round-off floor are frozen. Throws QuadratureError when the evaluation
/// budget is exhausted.
template <std::size_t N, class F>
QuadResultN<N> integrate_n(F&& f, double a, double b, const QuadOptions& opts = {}) {
    QuadResultN<N> out;
    if (a == b) return out;
    if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("integration limits must be finite");

    using Panel = detail::Panel<N>;
    auto by_error = [](const Panel& l, const Panel& r) { return l.error < r.error; };
    std::vector<Panel> heap;
    std::vector<Panel> frozen;
    heap.push_back(detail::kronrod15<N>(f, a, b));
    out.evals = 15;

    auto totals = [&](std::array<double, N>& sum) {
        sum.fill(0.0);
        double err = 0.0;
        for (const auto* set : {&heap, &frozen})
            for (const auto& p : *set) {
                for (std::size_t i = 0; i < N; ++i) sum[i] += p.value[i];
                err += p.error;
            }
        return err;
    };

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double min_width = 64.0 * eps * std::max(std::abs(a), std::abs(b));
    std::array<double, N> sum{};
    double err = totals(sum);
    for (;;) {
        double scale = 0.0;
        for (double v : sum) scale = std::max(scale, std::abs(v));
        const double target = std::max(opts.abs_tol, opts.rel_tol * scale);
        if (err <= target || heap.empty()) break;
        if (out.evals + 30 > opts.max_evals) {
            throw QuadratureError("quadrature did not converge within " + std::to_string(opts.max_evals) +
                                      " integrand evaluations (estimated error " + std::to_string(err) + ")",
                                  opts.max_evals);
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.error <= 50.0 * eps * worst.magnitude || std::abs(worst.b - worst.a) <= min_width) {
            frozen.push_back(worst);
            if (heap.empty()) break;
            continue;
        }
        err -= worst.error;
        for (std::size_t i = 0; i < N; ++i) sum[i] -= worst.value[i];
        for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            heap.push_back(detail::kronrod15<N>(f, lo, hi));
            const Panel& child = heap.back();
            err += child.error;
            for (std::size_t i = 0; i < N; ++i) sum[i] += child.value[i];
            std::push_heap(heap.begin(), heap.end(), by_error);
        }
        out.evals += 30;
    }
    err = totals(sum);
    out.value = sum;
    out.error = err;
    return out;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
    auto wrapped = [&f](double t) { return std::array<double, 1>{f(t)}; };
    auto r = integrate_n<1>(wrapped, a, b, opts);
    return {r.value[0], r.error, r.evals};
}

/// Adaptive integral of f over [a, b] with estimated absolute error <= tol.
template <class F>
double quad_1d(F&& f, double a, double b, double tol = 1e-10) {
    if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    QuadOptions opts;
    opts.abs_tol = tol;
    return integrate(std::forward<F>(f), a, b, opts).value;
}

}  // namespace gbcv
