#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gbcv {

struct OdeOptions {
    double rtol = 1e-11;
    double atol = 1e-13;
    /// Initial step; 0 selects one automatically.
    double initial_step = 0.0;
    std::size_t max_steps = 1'000'000;
};

/// Accepted steps of an explicit integration, with cubic Hermite dense
/// output between consecutive nodes.
class DenseSolution {
public:
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return t_.size(); }
    double t_begin() const { return t_.front(); }
    double t_end() const { return t_.back(); }
    const std::vector<double>& nodes() const noexcept { return t_; }

    /// State and derivative stored at node k.
    std::span<const double> state(std::size_t k) const { return {y_.data() + k * dim_, dim_}; }
    std::span<const double> slope(std::size_t k) const { return {f_.data() + k * dim_, dim_}; }

    /// Hermite interpolant of component i and its t-derivative. Throws
    /// DomainError outside [t_begin, t_end].
    double value(double t, std::size_t i = 0) const;
    double derivative(double t, std::size_t i = 0) const;

    std::size_t rejected_steps() const noexcept { return rejected_; }

private:
    std::size_t locate(double t) const;

    std::size_t dim_ = 0;
    std::vector<double> t_, y_, f_;
    std::size_t rejected_ = 0;

    friend DenseSolution solve_dopri5(const std::function<void(double, std::span<const double>, std::span<double>)>&,
                                      double, std::vector<double>, double, const OdeOptions&,
                                      std::span<const double>);
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Dormand–Prince 5(4) with error-per-step control, integrating forward. `stops` lists
/// interior times the integrator must land on exactly (they become nodes).
/// Throws NumericalError on step-size underflow or an exhausted step budget.
DenseSolution solve_dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0, double t1,
                           const OdeOptions& opts = {}, std::span<const double> stops = {});

}  // namespace gbcv
