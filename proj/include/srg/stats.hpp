#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "srg/geometry.hpp"

namespace srg {

//============================================================================
// Small statistics utilities shared by the verification experiments: sample
// moments, two-sample Kolmogorov-Smirnov comparison and least-squares lines
// for log-log rate fits.
//============================================================================

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    std::size_t n = 0;
};

inline MeanSe mean_and_se(const std::vector<double>& xs) {
    if (xs.size() < 2) throw ValidationError("mean_and_se: need at least 2 values");
    MeanSe out;
    out.n = xs.size();
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (xs.size() - 1.0) / xs.size());
    return out;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| (tie-safe).
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ValidationError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// Asymptotic two-sample KS p-value (Kolmogorov distribution with the
/// standard small-sample correction); conservative under ties.
inline double ks_p_value(double d, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * m / (n + m);
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    // Below lam ~ 0.2 the distribution function is 1 to within 1e-12 and the
    // alternating series needs more terms than it is worth; short-circuit.
    if (lam < 0.2) return 1.0;
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * p));
}

/// Two-sample KS rejection threshold at level alpha:
/// c(alpha) sqrt((n+m)/(nm)) with c(alpha) = sqrt(-log(alpha/2)/2).
inline double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ValidationError("ks_critical_value: alpha must lie in (0, 1)");
    const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares line through (x_i, y_i).
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("linear_fit: need two same-length samples of size >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size();
    my /= y.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

} // namespace srg
