#include "srg/point_process.hpp"

#include <cmath>

namespace srg {

//----------------------------------------------------------------------------
// Model constructors.
//----------------------------------------------------------------------------

GibbsModel GibbsModel::poisson_const(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw ValidationError("poisson model: rate must be finite and >= 0");
    GibbsModel m;
    m.kind = Kind::poisson;
    m.beta = [rate](const Vec&) { return rate; };
    m.beta_sup = rate;
    m.beta_desc = "const:" + std::to_string(rate);
    m.phi_desc = "none";
    return m;
}

GibbsModel GibbsModel::hard_core(double beta0, double r, int dim) {
    if (!(beta0 >= 0.0)) throw ValidationError("hard-core model: beta0 must be >= 0");
    if (!(r > 0.0)) throw ValidationError("hard-core model: radius must be > 0");
    GibbsModel m;
    m.kind = Kind::pairwise;
    m.beta = [beta0](const Vec&) { return beta0; };
    m.beta_sup = beta0;
    m.phi = [r, dim](const Vec& x, const Vec& y) {
        return squared_distance(x, y, dim) > r * r ? 1.0 : 0.0;
    };
    m.beta_desc = "const:" + std::to_string(beta0);
    m.phi_desc = "hardcore:" + std::to_string(r);
    return m;
}

GibbsModel GibbsModel::soft_core(double beta0, double r, double delta, int dim) {
    if (!(beta0 >= 0.0)) throw ValidationError("soft-core model: beta0 must be >= 0");
    if (!(r > 0.0)) throw ValidationError("soft-core model: radius must be > 0");
    if (delta < 0.0 || delta > 1.0)
        throw ValidationError("soft-core model: delta must lie in [0, 1]");
    GibbsModel m;
    m.kind = Kind::pairwise;
    m.beta = [beta0](const Vec&) { return beta0; };
    m.beta_sup = beta0;
    m.phi = [r, delta, dim](const Vec& x, const Vec& y) {
        return squared_distance(x, y, dim) <= r * r ? delta : 1.0;
    };
    m.beta_desc = "const:" + std::to_string(beta0);
    m.phi_desc = "softcore:" + std::to_string(r) + ":" + std::to_string(delta);
    return m;
}

GibbsModel GibbsModel::smooth_inhibition(double beta0, double strength, double range, int dim) {
    if (!(beta0 >= 0.0)) throw ValidationError("smooth model: beta0 must be >= 0");
    if (strength < 0.0 || strength > 1.0)
        throw ValidationError("smooth model: strength must lie in [0, 1]");
    if (!(range > 0.0)) throw ValidationError("smooth model: range must be > 0");
    GibbsModel m;
    m.kind = Kind::pairwise;
    m.beta = [beta0](const Vec&) { return beta0; };
    m.beta_sup = beta0;
    m.phi = [strength, range, dim](const Vec& x, const Vec& y) {
        return 1.0 - strength * std::exp(-squared_distance(x, y, dim) / (range * range));
    };
    m.beta_desc = "const:" + std::to_string(beta0);
    m.phi_desc = "smooth:" + std::to_string(strength) + ":" + std::to_string(range);
    return m;
}

void GibbsModel::validate(const Window& w, RngStream probe) const {
    if (!beta) throw ValidationError("model: beta is not set");
    if (!(beta_sup >= 0.0) || !std::isfinite(beta_sup))
        throw ValidationError("model: beta_sup must be finite and >= 0");
    if (kind == Kind::pairwise && !phi)
        throw ValidationError("model: pairwise kind requires phi");
    // Spot checks on random points: envelope validity and inhibition.
    for (int k = 0; k < 256; ++k) {
        const Vec x = w.sample(probe);
        const double b = beta(x);
        if (!std::isfinite(b) || b < 0.0)
            throw ValidationError("model: beta must be finite and >= 0 on the window");
        if (b > beta_sup * (1.0 + 1e-12) + 1e-300)
            throw ValidationError("model: beta exceeds beta_sup on the window");
        if (kind == Kind::pairwise) {
            const Vec y = w.sample(probe);
            const double p = phi(x, y), q = phi(y, x);
            if (!std::isfinite(p) || p < 0.0 || p > 1.0 + 1e-12)
                throw ValidationError("model: phi must map into [0, 1] (inhibitory)");
            if (std::abs(p - q) > 1e-12)
                throw ValidationError("model: phi must be symmetric");
        }
    }
}

//----------------------------------------------------------------------------
// Samplers.
//----------------------------------------------------------------------------

double beta_total(const GibbsModel& m, const Window& w, const QuadratureSpec& quad) {
    return integrate([&](const Vec& x) { return m.beta(x); }, w, quad).value;
}

Vec sample_beta_location(const GibbsModel& m, const Window& w, RngStream& rng) {
    if (m.beta_sup <= 0.0)
        throw ValidationError("sampler: beta_sup must be > 0 to propose births");
    for (long guard = 0; guard < 100000000L; ++guard) {
        const Vec x = w.sample(rng);
        if (rng.uniform() * m.beta_sup < m.beta(x)) return x;
    }
    throw NumericalError("sampler: envelope rejection failed to accept");
}

PointPattern sample_poisson(const GibbsModel& m, const Window& w, RngStream& rng,
                            const QuadratureSpec& quad) {
    w.validate();
    const double total = beta_total(m, w, quad);
    if (!(total >= 0.0) || !std::isfinite(total))
        throw NumericalError("sample_poisson: non-finite intensity integral");
    PointPattern pat(w.dim);
    const long n = rng.poisson(total);
    pat.points.reserve(n);
    for (long i = 0; i < n; ++i) pat.points.push_back(sample_beta_location(m, w, rng));
    return pat;
}

PointPattern sample_gibbs(const GibbsModel& m, const Window& w, RngStream& rng,
                          double horizon, const QuadratureSpec& quad) {
    w.validate();
    if (m.kind == GibbsModel::Kind::poisson) return sample_poisson(m, w, rng, quad);

    const double total = beta_total(m, w, quad);
    if (!(total > 0.0) || !std::isfinite(total))
        throw ValidationError("sample_gibbs: degenerate chain (no births possible)");
    if (horizon <= 0.0) horizon = 30.0;

    std::vector<Vec> xs;
    double t = 0.0;
    while (true) {
        const double birth_w = total;
        const double death_w = static_cast<double>(xs.size());
        const double rate = birth_w + death_w;
        t += rng.exponential(rate);
        if (t >= horizon) break;
        if (rng.uniform() * rate < birth_w) {
            // Birth proposal from the beta density, thinned to lambda/beta.
            const Vec x = sample_beta_location(m, w, rng);
            const double lam = m.conditional_intensity(x, xs);
            const double envelope = m.beta(x);
            if (envelope > 0.0 && rng.uniform() * envelope < lam) xs.push_back(x);
        } else if (!xs.empty()) {
            const std::size_t k = rng.uniform_index(xs.size());
            xs[k] = xs.back();
            xs.pop_back();
        }
    }
    PointPattern pat(w.dim);
    pat.points = std::move(xs);
    return pat;
}

//----------------------------------------------------------------------------
// Conditional-intensity integral identity.
//----------------------------------------------------------------------------

GnzResult gnz_residual(const GibbsModel& m, const Window& w, const PointTestFunction& h,
                       int n_samples, RngStream rng, const QuadratureSpec& quad) {
    if (n_samples <= 1) throw ValidationError("gnz_residual: need at least 2 samples");

    GnzResult res;
    res.n_samples = n_samples;
    double sum_l = 0.0, sum_r = 0.0, sum_d = 0.0, sum_d2 = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        RngStream sub = rng.substream(s);
        // Fresh Monte Carlo nodes per sample keep the quadrature part of the
        // right side unbiased; its noise then shows up in the paired spread.
        QuadratureSpec sq = quad;
        if (sq.mode == QuadratureSpec::Mode::monte_carlo)
            sq.mc_seed = detail::mix64(quad.mc_seed ^ (0x6E5A0FB1u + static_cast<std::uint64_t>(s)));
        const PointPattern pat = (m.kind == GibbsModel::Kind::poisson)
                                     ? sample_poisson(m, w, sub, quad)
                                     : sample_gibbs(m, w, sub, 0.0, quad);
        // Left side: remove each point in turn.
        double lhs = 0.0;
        std::vector<Vec> rest;
        rest.reserve(pat.points.size());
        for (std::size_t i = 0; i < pat.points.size(); ++i) {
            rest.clear();
            for (std::size_t j = 0; j < pat.points.size(); ++j)
                if (j != i) rest.push_back(pat.points[j]);
            lhs += h(rest, pat.points[i]);
        }
        // Right side: integrate h(pattern, x) lambda(x | pattern).
        const double rhs = integrate(
            [&](const Vec& x) {
                const double lam = m.conditional_intensity(x, pat.points);
                return lam > 0.0 ? h(pat.points, x) * lam : 0.0;
            },
            w, sq).value;
        sum_l += lhs;
        sum_r += rhs;
        const double d = lhs - rhs;
        sum_d += d;
        sum_d2 += d * d;
    }
    const double n = static_cast<double>(n_samples);
    res.lhs_mean = sum_l / n;
    res.rhs_mean = sum_r / n;
    res.diff_mean = sum_d / n;
    const double var = std::max(0.0, sum_d2 / n - res.diff_mean * res.diff_mean) * n / (n - 1.0);
    res.std_error = std::sqrt(var / n);
    return res;
}

} // namespace srg
