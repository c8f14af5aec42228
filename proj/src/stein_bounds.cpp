#include "srg/stein_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace srg {

//----------------------------------------------------------------------------
// Smoothness factors.
//----------------------------------------------------------------------------

double stein_factor_vertex(double lambda_total, const MetricParams& mp) {
    mp.validate();
    if (!(lambda_total > 0.0) || !std::isfinite(lambda_total))
        throw ValidationError("stein_factor_vertex: lambda_total must be finite and > 0");
    const double ci = mp.cap();
    const double cti = mp.penalty_cap();
    const double logp = std::max(0.0, std::log(lambda_total));
    const double second =
        (1.0 / lambda_total) * (1.0 + (1.0 - std::exp(-lambda_total)) * logp) * cti;
    return std::min(ci, second);
}

double stein_factor_edge(double lambda_total, double ce) {
    if (!(lambda_total > 0.0) || !std::isfinite(lambda_total))
        throw ValidationError("stein_factor_edge: lambda_total must be finite and > 0");
    if (!(ce > 0.0)) throw ValidationError("stein_factor_edge: ce must be > 0");
    if (lambda_total < 1.0) return 0.25 * ce; // closed form below is valid for L >= 1
    const double L = lambda_total;
    const double second = (2.0 - std::exp(-L)) / L - (1.5 - std::exp(-L)) / (L * L);
    return std::min(0.25, second) * ce;
}

//----------------------------------------------------------------------------
// Coupling-time bound.
//----------------------------------------------------------------------------

namespace {

/// Integrand of the integral part of the bound with the prefactor
/// w = (nstar-1)! (eps/c)^{nstar-1} folded in to keep magnitudes tame:
/// returns w * sum_{i >= nstar} s^{i-1}/i!  via the term recurrence
/// u_{nstar} = (eps s/c)^{nstar-1} / nstar,  u_{i+1} = u_i * s / (i + 1).
double prefactored_tail(double s, double eps, double c, long nstar) {
    if (s <= 0.0) return 0.0;
    const double ratio = eps * s / c;
    // First term u_{nstar} = (eps s/c)^{nstar-1} / nstar = w * s^{nstar-1}/nstar!.
    double term = std::pow(ratio, static_cast<double>(nstar - 1)) / static_cast<double>(nstar);
    double sum = term;
    for (long i = nstar; term > sum * 1e-18 && i < nstar + 10000; ++i) {
        term *= s / static_cast<double>(i + 1);
        sum += term;
    }
    return sum;
}

/// Adaptive Simpson integration of the prefactored integrand on (0, c).
double integral_part(double eps, double c, long nstar, double tol) {
    auto f = [&](double s) { return prefactored_tail(s, eps, c, nstar); };
    auto simpson = [](double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    };
    struct Frame { double a, b, fa, fm, fb, s; int depth; };
    const double a0 = 0.0, b0 = c;
    const double fa0 = 0.0; // integrand -> 0 as s -> 0 for nstar >= 1
    const double fm0 = f(0.5 * (a0 + b0));
    const double fb0 = f(b0);
    std::vector<Frame> stack{{a0, b0, fa0, fm0, fb0, simpson(a0, b0, fa0, fm0, fb0), 0}};
    double total = 0.0;
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        const double m = 0.5 * (fr.a + fr.b);
        const double lm = 0.5 * (fr.a + m), rm = 0.5 * (m + fr.b);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(fr.a, m, fr.fa, flm, fr.fm);
        const double right = simpson(m, fr.b, fr.fm, frm, fr.fb);
        if (fr.depth >= 48 || std::abs(left + right - fr.s) < 15.0 * tol) {
            total += left + right + (left + right - fr.s) / 15.0;
        } else {
            stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left, fr.depth + 1});
            stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right, fr.depth + 1});
        }
    }
    return total;
}

} // namespace

double coupling_bound_bstar(double eps, double c, long nstar, BstarInfiniteForm form) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ValidationError("coupling_bound_bstar: eps must be finite and >= 0");
    if (!(c >= 0.0) || !std::isfinite(c))
        throw ValidationError("coupling_bound_bstar: c must be finite and >= 0");
    if (nstar != kInfiniteCut && nstar < 1)
        throw ValidationError("coupling_bound_bstar: nstar must be >= 1 or infinite");

    if (nstar == kInfiniteCut) {
        if (eps == 0.0) return 1.0;
        if (eps < 1.0 && form == BstarInfiniteForm::remark_log)
            return (1.0 + eps) / eps * std::log1p(eps / (1.0 - eps)); // log(1/(1-eps))
        return (1.0 + eps) / eps * std::expm1(eps);
    }

    if (eps == 0.0) {
        if (nstar >= 2) return 1.0; // limit of the finite-cut formula
        // nstar == 1: only the bracket term remains, with (eps/c)^0 = 1.
    }

    // Second sum: (1+eps)/eps * sum_{i=1}^{nstar-1} eps^i / i  (limit 1 at 0).
    double second = 0.0;
    if (nstar >= 2) {
        if (eps == 0.0) {
            second = 1.0;
        } else {
            double acc = 0.0, p = 1.0;
            for (long i = 1; i <= nstar - 1; ++i) {
                p *= eps;
                acc += p / static_cast<double>(i);
            }
            second = (1.0 + eps) / eps * acc;
        }
    }

    // First term. c == 0 collapses to the limit eps^{nstar-1}/nstar.
    double first;
    if (c == 0.0) {
        first = std::pow(eps, static_cast<double>(nstar - 1)) / static_cast<double>(nstar);
    } else {
        // Tail sum part: w * S(c)/c with the prefactor folded in: terms
        // T_i = (nstar-1)! (eps/c)^{nstar-1} c^i/i!, T_{nstar} = eps^{nstar-1} c/nstar.
        double t = std::pow(eps, static_cast<double>(nstar - 1)) * c / static_cast<double>(nstar);
        double tail = t;
        for (long i = nstar; t > tail * 1e-18 && i < nstar + 10000; ++i) {
            t *= c / static_cast<double>(i + 1);
            tail += t;
        }
        const double sum_part = tail / c;
        const double tol = std::max(sum_part, 1e-30) * 1e-13;
        const double int_part = integral_part(eps, c, nstar, tol);
        first = sum_part + int_part;
    }
    return first + second;
}

double pip_epsilon(const GibbsModel& m, const Window& w, const QuadratureSpec& quad,
                   int z_per_axis) {
    if (m.kind == GibbsModel::Kind::poisson) return 0.0;
    if (z_per_axis < 1) throw ValidationError("pip_epsilon: z grid must be >= 1 per axis");
    // Probe z on a cell-centre grid; the integrand is continuous in z for
    // the supported models, so the grid supremum is a stable estimate.
    DiscretisationGrid zgrid(w, z_per_axis);
    double best = 0.0;
    for (long i = 0; i < zgrid.n_cells(); ++i) {
        const Vec z = zgrid.centre(i);
        const double v = integrate(
            [&](const Vec& x) { return m.beta(x) * (1.0 - m.phi(x, z)); }, w, quad).value;
        best = std::max(best, v);
    }
    return best;
}

double pip_c_bound(const GibbsModel& m, const Window& w, const QuadratureSpec& quad) {
    return beta_total(m, w, quad);
}

long optimal_series_cut(double eps, double c) {
    if (!(eps >= 0.0) || !(c >= 0.0))
        throw ValidationError("optimal_series_cut: eps and c must be >= 0");
    if (eps == 0.0) return kInfiniteCut;
    const double ratio = c / eps;
    if (ratio > 1e6) return 1000000; // bound is flat this far out
    return std::max<long>(1, static_cast<long>(std::ceil(ratio)));
}

//----------------------------------------------------------------------------
// Coupled single-site dynamics.
//----------------------------------------------------------------------------

double glauber_expected_coupling_time(int n, int m) {
    if (n < 1) throw ValidationError("glauber: register size must be >= 1");
    if (m < 0 || m > n)
        throw ValidationError("glauber: initial disagreement count must lie in [0, n]");
    double h = 0.0;
    for (int i = 1; i <= m; ++i) h += 1.0 / i;
    return n * h;
}

//----------------------------------------------------------------------------
// Soft geometric graph bound.
//----------------------------------------------------------------------------

SoftRggBound soft_rgg_bound(const GibbsModel& m1, const EdgeModel& k1,
                            const GibbsModel& m2, const EdgeModel& k2,
                            const Window& w, const MetricParams& mp,
                            const QuadratureSpec& quad) {
    mp.validate();
    if (m1.kind != GibbsModel::Kind::poisson || m2.kind != GibbsModel::Kind::poisson)
        throw ValidationError("soft_rgg_bound: both vertex models must be Poisson");

    SoftRggBound out;
    out.lambda1_total = beta_total(m1, w, quad);
    out.lambda2_total = beta_total(m2, w, quad);

    const double dl1 = integrate(
        [&](const Vec& x) { return std::abs(m1.beta(x) - m2.beta(x)); }, w, quad).value;
    const double cross = integrate_pair(
        [&](const Vec& x, const Vec& y) {
            return std::abs(k1(x, y) - k2(x, y)) * m1.beta(x) * m2.beta(y);
        },
        w, quad).value;

    out.sup_norm = 2.0 * dl1 + cross;
    out.vertex_term = stein_factor_vertex(out.lambda2_total, mp) * dl1;
    out.edge_term = stein_factor_edge(out.lambda2_total, mp.ce) * cross;
    out.wasserstein = out.vertex_term + out.edge_term;
    return out;
}

//----------------------------------------------------------------------------
// Boolean-style percolation graph bound.
//----------------------------------------------------------------------------

double BooleanModelParams::thinning_p() const {
    return std::pow(rstar / pareto_scale, -pareto_a);
}
double BooleanModelParams::contraction_q() const {
    return std::pow(rstar, -contraction_b);
}
double BooleanModelParams::lambda() const {
    return mu * thinning_p() / contraction_q();
}
double BooleanModelParams::target_t() const {
    return std::pow(contraction_q(), 1.0 / dim) * rstar;
}

void BooleanModelParams::validate() const {
    window.validate();
    if (window.dim != dim) throw ValidationError("boolean model: window dimension mismatch");
    if (!(mu > 0.0)) throw ValidationError("boolean model: mu must be > 0");
    if (!(pareto_a > 0.0)) throw ValidationError("boolean model: tail exponent a must be > 0");
    if (!(pareto_scale > 0.0)) throw ValidationError("boolean model: radius scale must be > 0");
    if (!(contraction_b > 0.0)) throw ValidationError("boolean model: contraction exponent must be > 0");
    if (!(psi_gamma > 0.0) || psi_gamma > 1.0)
        throw ValidationError("boolean model: gamma must lie in (0, 1]");
    if (psi_delta < 0.0) throw ValidationError("boolean model: delta must be >= 0");
    if (!(rstar >= pareto_scale))
        throw ValidationError("boolean model: rstar must be >= the radius scale");
    if (!(pareto_a > psi_gamma * dim))
        throw ValidationError("boolean model: need a > gamma * dim for a finite radial moment");
    if (centres == Centres::determinantal && !(dpp_theta > 0.0 && dpp_theta < 1.0))
        throw ValidationError("boolean model: dpp_theta must lie in (0, 1)");
}

namespace {

/// E psi(R - r)(r + psi(R - r))^{d-1} 1{R >= r} for Pareto radii:
/// log-spaced midpoint quadrature on [r, 10^3 r] plus an analytic tail.
double boolean_radial_moment(const BooleanModelParams& p) {
    const double r = p.rstar, a = p.pareto_a, r0 = p.pareto_scale;
    const double gamma = p.psi_gamma, delta = p.psi_delta;
    const int d = p.dim;
    auto psi = [&](double s) { return std::pow(s, gamma) / std::pow(r, delta); };
    auto density = [&](double u) { // radius tail density a r0^a u^{-a-1}
        return a * std::pow(r0, a) * std::pow(u, -a - 1.0);
    };
    auto integrand = [&](double u) {
        const double ps = psi(u - r);
        return ps * std::pow(r + ps, static_cast<double>(d - 1)) * density(u);
    };

    const int n = 10000;
    const double lo = std::log(r), hi = std::log(r) + 3.0 * std::log(10.0);
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lu = lo + (i + 0.5) * h;
        const double u = std::exp(lu);
        sum += integrand(u) * u * h; // du = u d(log u)
    }

    // Tail above U = 10^3 r: psi(u - r) <= u^gamma / r^delta gives the
    // binomial bound sum_j C(d-1,j) r^{d-1-j} r^{-delta (j+1)}
    //                  * a r0^a U^{gamma(j+1)-a} / (a - gamma(j+1)).
    const double U = r * 1000.0;
    double tail = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= d - 1; ++j) {
        if (j > 0) binom = binom * (d - j) / j; // C(d-1, j)
        const double k = static_cast<double>(j + 1);
        tail += binom * std::pow(r, static_cast<double>(d - 1 - j)) *
                std::pow(r, -delta * k) * a * std::pow(r0, a) *
                std::pow(U, gamma * k - a) / (a - gamma * k);
    }
    return sum + tail;
}

} // namespace

BooleanBound boolean_bound(const BooleanModelParams& p, const MetricParams& mp) {
    mp.validate();
    p.validate();

    BooleanBound out;
    out.lambda = p.lambda();
    out.lambda_total = out.lambda * p.window.volume();
    out.target_t = p.target_t();
    out.radial_moment = boolean_radial_moment(p);

    if (p.centres == BooleanModelParams::Centres::determinantal) {
        out.vertex_term = 2.0 * stein_factor_vertex(out.lambda_total, mp) *
                          out.lambda_total * p.dpp_theta / (1.0 - p.dpp_theta);
    } else {
        out.vertex_term = 0.0; // thinned contracted Poisson centres hit the target law
    }

    constexpr double kPi = 3.14159265358979323846;
    const double cd = std::pow(kPi, 0.5 * p.dim) / std::tgamma(0.5 * p.dim + 1.0);
    out.edge_term = stein_factor_edge(out.lambda_total, mp.ce) * out.lambda * cd *
                    p.dim * std::pow(2.0, p.dim) * p.mu * p.window.volume() *
                    out.radial_moment;
    out.total = out.vertex_term + out.edge_term;
    return out;
}

//----------------------------------------------------------------------------
// Lattice discretisation bound.
//----------------------------------------------------------------------------

DiscretisationBound discretisation_bound(const GibbsModel& m, const EdgeModel& em,
                                         const DiscretisationGrid& grid,
                                         const MetricParams& mp,
                                         const QuadratureSpec& quad,
                                         std::optional<LipschitzData> lip) {
    mp.validate();
    grid.window.validate();
    const Window& w = grid.window;

    DiscretisationBound out;
    out.r_v = grid.cell_radius(mp.cv);
    out.eps = pip_epsilon(m, w, quad);
    out.c_bound = pip_c_bound(m, w, quad);
    out.nstar = optimal_series_cut(out.eps, out.c_bound);
    out.bstar = coupling_bound_bstar(out.eps, out.c_bound, out.nstar);

    out.beta_l1 = integrate(
        [&](const Vec& x) { return std::abs(m.beta(x) - m.beta(grid.snap(x))); }, w, quad).value;
    if (m.kind == GibbsModel::Kind::pairwise) {
        out.phi_l1 = integrate_pair(
            [&](const Vec& x, const Vec& y) {
                return std::abs(m.phi(x, y) - m.phi(grid.snap(x), grid.snap(y)));
            },
            w, quad).value;
    }
    out.kappa_l1 = integrate_pair(
        [&](const Vec& x, const Vec& y) {
            return std::abs(em(x, y) - em(grid.snap(x), grid.snap(y)));
        },
        w, quad).value;

    const double ci = mp.cap();
    const double b2 = m.beta_sup * m.beta_sup;
    out.general = out.r_v + ci * out.bstar * (out.beta_l1 + b2 * out.phi_l1) +
                  0.25 * mp.ce * b2 * out.kappa_l1;

    if (lip) {
        const double vol = w.volume();
        out.lipschitz = (1.0 + (2.0 * ci * out.bstar * lip->l_v + 0.5 * mp.ce * lip->l_e) *
                                   b2 * vol * vol) *
                        out.r_v;
    }
    return out;
}

} // namespace srg
