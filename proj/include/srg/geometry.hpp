#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "srg/rng.hpp"

namespace srg {

//============================================================================
// Basic spatial types: error categories, points, observation windows and the
// truncated vertex metric used throughout the toolkit.
//============================================================================

/// Bad inputs (parameters, configs, malformed files).  CLI exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown (non-finite values, failed solves).  CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDim = 3;

/// Point in R^d, d <= 3; coordinates beyond the active dimension stay 0.
using Vec = std::array<double, kMaxDim>;

inline Vec make_vec(double x, double y = 0.0, double z = 0.0) { return Vec{x, y, z}; }

inline double squared_distance(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline double euclidean(const Vec& a, const Vec& b, int dim) {
    return std::sqrt(squared_distance(a, b, dim));
}

/// Vertex ground metric: Euclidean distance truncated at the cap `cv`.
/// Truncation preserves all metric axioms and bounds the metric by cv.
inline double dist_v(const Vec& a, const Vec& b, int dim, double cv) {
    if (!(cv > 0.0)) throw ValidationError("dist_v: vertex cap cv must be > 0");
    return std::min(euclidean(a, b, dim), cv);
}

/// Axis-aligned box observation window.
struct Window {
    int dim = 2;
    Vec lower{0.0, 0.0, 0.0};
    Vec upper{1.0, 1.0, 1.0};

    Window() = default;
    Window(int d, const Vec& lo, const Vec& hi) : dim(d), lower(lo), upper(hi) {
        validate();
    }

    static Window unit(int d) {
        Vec lo{0, 0, 0}, hi{0, 0, 0};
        for (int k = 0; k < d; ++k) hi[k] = 1.0;
        return Window(d, lo, hi);
    }

    static Window cube(int d, double lo, double hi) {
        Vec l{0, 0, 0}, u{0, 0, 0};
        for (int k = 0; k < d; ++k) { l[k] = lo; u[k] = hi; }
        return Window(d, l, u);
    }

    void validate() const {
        if (dim < 1 || dim > kMaxDim)
            throw ValidationError("window: dimension must be 1, 2 or 3");
        for (int k = 0; k < dim; ++k)
            if (!(lower[k] < upper[k]) || !std::isfinite(lower[k]) || !std::isfinite(upper[k]))
                throw ValidationError("window: require finite lower < upper on every axis");
    }

    double side(int k) const { return upper[k] - lower[k]; }

    double volume() const {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) v *= side(k);
        return v;
    }

    bool contains(const Vec& p) const {
        for (int k = 0; k < dim; ++k)
            if (p[k] < lower[k] || p[k] > upper[k]) return false;
        return true;
    }

    /// Uniform draw from the window.
    Vec sample(RngStream& rng) const {
        Vec p{0, 0, 0};
        for (int k = 0; k < dim; ++k) p[k] = rng.uniform(lower[k], upper[k]);
        return p;
    }

    /// Largest distance from any point of the window to the window centre
    /// (half diagonal), used for metric caps and cell radii.
    double half_diagonal() const {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += 0.25 * side(k) * side(k);
        return std::sqrt(s);
    }
};

/// Finite point pattern in a window.
struct PointPattern {
    int dim = 2;
    std::vector<Vec> points;

    PointPattern() = default;
    explicit PointPattern(int d) : dim(d) {}

    std::size_t size() const { return points.size(); }
};

/// Parameters of the graph ground metric: caps for the vertex and edge parts
/// and the variant (1 or 2) of the unmatched-vertex penalty.
struct MetricParams {
    double cv = 1.0;
    double ce = 1.0;
    int variant = 1;
    /// When true, two present edges are compared through the mean of the
    /// endpoint vertex distances (capped at ce) instead of the indicator.
    bool endpoint_edge_metric = false;

    void validate() const {
        if (!(cv > 0.0)) throw ValidationError("metric: cv must be > 0");
        if (!(ce > 0.0)) throw ValidationError("metric: ce must be > 0");
        if (variant != 1 && variant != 2)
            throw ValidationError("metric: variant must be 1 or 2");
    }

    /// Upper bound on the graph metric: C_V + C_E/2 (variant 1) or
    /// C_V + C_E (variant 2).
    double cap() const { return cv + 0.5 * variant * ce; }

    /// Size-difference-one penalty scale: C_V + C_E (variant 1) or
    /// C_V + 2 C_E (variant 2, maximal degree term included).
    double penalty_cap() const { return cv + variant * ce; }
};

} // namespace srg
