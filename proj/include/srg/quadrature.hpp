#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "srg/geometry.hpp"
#include "srg/rng.hpp"

namespace srg {

//============================================================================
// Numerical integration over a window (and over the product window x window).
//
// Default rule: tensor midpoint grid, 64 nodes per axis for total dimension
// <= 2, 32 for dimension 3-4 and 16 for dimension 5-6.  A Monte Carlo mode
// with a reported standard error is available for rough integrands; it draws
// from a dedicated stream so results stay reproducible.
//============================================================================

struct QuadratureSpec {
    enum class Mode { tensor, monte_carlo };

    Mode mode = Mode::tensor;
    /// Nodes per axis for the tensor rule; 0 selects the default for the
    /// total dimension of the integral.
    int points_per_axis = 0;
    /// Sample count for the Monte Carlo mode.
    long mc_points = 100000;
    /// Seed for the Monte Carlo node stream (kept separate from model
    /// sampling so integral estimates never perturb simulation draws).
    std::uint64_t mc_seed = 0xC0FFEEULL;

    int axis_points(int total_dim) const {
        if (points_per_axis > 0) return points_per_axis;
        if (total_dim <= 2) return 64;
        if (total_dim <= 4) return 32;
        return 16;
    }

    void validate() const {
        if (points_per_axis < 0)
            throw ValidationError("quadrature: points_per_axis must be >= 0");
        if (mc_points <= 1)
            throw ValidationError("quadrature: mc_points must be > 1");
    }
};

struct IntegralResult {
    double value = 0.0;
    /// Zero for the deterministic tensor rule; Monte Carlo standard error
    /// of the mean otherwise.
    double std_error = 0.0;
};

namespace detail {

inline void check_finite(double v) {
    if (!std::isfinite(v))
        throw NumericalError("quadrature: integrand returned a non-finite value");
}

template <class F>
IntegralResult integrate_tensor(F&& f, const Window& w, int per_axis) {
    const int d = w.dim;
    long total = 1;
    for (int k = 0; k < d; ++k) total *= per_axis;
    double h[kMaxDim] = {0, 0, 0};
    for (int k = 0; k < d; ++k) h[k] = w.side(k) / per_axis;
    double cell = 1.0;
    for (int k = 0; k < d; ++k) cell *= h[k];

    double sum = 0.0, comp = 0.0; // Kahan compensation
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        Vec x{0, 0, 0};
        for (int k = 0; k < d; ++k) {
            const long i = rest % per_axis;
            rest /= per_axis;
            x[k] = w.lower[k] + (static_cast<double>(i) + 0.5) * h[k];
        }
        const double v = f(x);
        check_finite(v);
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return {sum * cell, 0.0};
}

} // namespace detail

/// Integral of f over the window.
template <class F>
IntegralResult integrate(F&& f, const Window& w, const QuadratureSpec& spec = {}) {
    spec.validate();
    w.validate();
    if (spec.mode == QuadratureSpec::Mode::tensor)
        return detail::integrate_tensor(f, w, spec.axis_points(w.dim));

    RngStream rng(spec.mc_seed, 0x317EULL);
    const long n = spec.mc_points;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double v = f(w.sample(rng));
        detail::check_finite(v);
        sum += v;
        sumsq += v * v;
    }
    const double vol = w.volume();
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean) * n / std::max<long>(1, n - 1);
    return {vol * mean, vol * std::sqrt(var / n)};
}

/// Integral of f(x, y) over window x window.
template <class F>
IntegralResult integrate_pair(F&& f, const Window& w, const QuadratureSpec& spec = {}) {
    spec.validate();
    w.validate();
    const int d = w.dim;
    if (spec.mode == QuadratureSpec::Mode::monte_carlo) {
        RngStream rng(spec.mc_seed, 0x317FULL);
        const long n = spec.mc_points;
        double sum = 0.0, sumsq = 0.0;
        for (long i = 0; i < n; ++i) {
            const Vec x = w.sample(rng);
            const Vec y = w.sample(rng);
            const double v = f(x, y);
            detail::check_finite(v);
            sum += v;
            sumsq += v * v;
        }
        const double vol = w.volume() * w.volume();
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean) * n / std::max<long>(1, n - 1);
        return {vol * mean, vol * std::sqrt(var / n)};
    }

    const int per_axis = spec.axis_points(2 * d);
    double h[kMaxDim] = {0, 0, 0};
    for (int k = 0; k < d; ++k) h[k] = w.side(k) / per_axis;
    long per_point = 1;
    for (int k = 0; k < d; ++k) per_point *= per_axis;
    double cell = 1.0;
    for (int k = 0; k < d; ++k) cell *= h[k];

    // Precompute the single-window node list, then sweep the product grid.
    std::vector<Vec> nodes;
    nodes.reserve(per_point);
    for (long idx = 0; idx < per_point; ++idx) {
        long rest = idx;
        Vec x{0, 0, 0};
        for (int k = 0; k < d; ++k) {
            const long i = rest % per_axis;
            rest /= per_axis;
            x[k] = w.lower[k] + (static_cast<double>(i) + 0.5) * h[k];
        }
        nodes.push_back(x);
    }
    double sum = 0.0, comp = 0.0;
    for (const Vec& x : nodes)
        for (const Vec& y : nodes) {
            const double v = f(x, y);
            detail::check_finite(v);
            const double t0 = v - comp;
            const double t1 = sum + t0;
            comp = (t1 - sum) - t0;
            sum = t1;
        }
    return {sum * cell * cell, 0.0};
}

} // namespace srg
