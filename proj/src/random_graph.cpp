#include "srg/random_graph.hpp"

#include <cmath>

namespace srg {

EdgeModel EdgeModel::constant(double p) {
    if (!(p >= 0.0) || !(p <= 1.0))
        throw ValidationError("edge model: constant probability must lie in [0, 1]");
    EdgeModel em;
    em.kappa = [p](const Vec&, const Vec&) { return p; };
    em.desc = "const:" + std::to_string(p);
    return em;
}

EdgeModel EdgeModel::hard_threshold(double r, int dim) {
    if (!(r >= 0.0)) throw ValidationError("edge model: threshold radius must be >= 0");
    EdgeModel em;
    em.kappa = [r, dim](const Vec& x, const Vec& y) {
        return squared_distance(x, y, dim) <= r * r ? 1.0 : 0.0;
    };
    em.desc = "threshold:" + std::to_string(r);
    return em;
}

EdgeModel EdgeModel::gaussian(double p0, double range, int dim) {
    if (!(p0 >= 0.0) || !(p0 <= 1.0))
        throw ValidationError("edge model: peak probability must lie in [0, 1]");
    if (!(range > 0.0)) throw ValidationError("edge model: range must be > 0");
    EdgeModel em;
    em.kappa = [p0, range, dim](const Vec& x, const Vec& y) {
        return p0 * std::exp(-squared_distance(x, y, dim) / (range * range));
    };
    em.desc = "gaussian:" + std::to_string(p0) + ":" + std::to_string(range);
    return em;
}

void EdgeModel::validate(const Window& w, RngStream probe) const {
    if (!kappa) throw ValidationError("edge model: kappa is not set");
    for (int k = 0; k < 256; ++k) {
        const Vec x = w.sample(probe);
        const Vec y = w.sample(probe);
        const double p = (*this)(x, y);
        const double q = (*this)(y, x);
        if (std::abs(p - q) > 1e-12)
            throw ValidationError("edge model: kappa must be symmetric");
    }
}

SpatialGraph sample_edges(const PointPattern& pat, const EdgeModel& em, RngStream& rng) {
    SpatialGraph g(pat.dim);
    g.vertices = pat.points;
    const int n = g.n_vertices();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(em(g.vertices[i], g.vertices[j]))) g.add_edge(i, j);
    return g;
}

std::vector<int> sample_edges_to_new_vertex(const SpatialGraph& g, const Vec& x,
                                            const EdgeModel& em, RngStream& rng) {
    std::vector<int> joined;
    for (int i = 0; i < g.n_vertices(); ++i)
        if (rng.bernoulli(em(g.vertices[i], x))) joined.push_back(i);
    return joined;
}

SpatialGraph sample_rgg(const GibbsModel& m, const EdgeModel& em, const Window& w,
                        RngStream& rng, const QuadratureSpec& quad) {
    const PointPattern pat = (m.kind == GibbsModel::Kind::poisson)
                                 ? sample_poisson(m, w, rng, quad)
                                 : sample_gibbs(m, w, rng, 0.0, quad);
    return sample_edges(pat, em, rng);
}

GnzResult graph_gnz_residual(const GibbsModel& m, const EdgeModel& em, const Window& w,
                             const GraphTestFunction& h, int n_samples, RngStream rng,
                             const QuadratureSpec& quad) {
    if (n_samples <= 1) throw ValidationError("graph_gnz_residual: need at least 2 samples");

    GnzResult res;
    res.n_samples = n_samples;
    double sum_l = 0.0, sum_r = 0.0, sum_d = 0.0, sum_d2 = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        RngStream sub = rng.substream(s);
        // Fresh Monte Carlo nodes per sample keep the quadrature part of the
        // right side unbiased; its noise then shows up in the paired spread.
        QuadratureSpec sq = quad;
        if (sq.mode == QuadratureSpec::Mode::monte_carlo)
            sq.mc_seed = detail::mix64(quad.mc_seed ^ (0x51A7B3C9u + static_cast<std::uint64_t>(s)));
        const SpatialGraph g = sample_rgg(m, em, w, sub, quad);
        const int n = g.n_vertices();

        // Left side: detach each vertex in turn; h sees the remaining graph
        // and the detached vertex's edges into it.
        double lhs = 0.0;
        for (int v = 0; v < n; ++v) {
            SpatialGraph rest(g.dim);
            rest.vertices.reserve(n - 1);
            std::vector<int> relabel(n, -1);
            for (int u = 0; u < n; ++u)
                if (u != v) {
                    relabel[u] = rest.n_vertices();
                    rest.vertices.push_back(g.vertices[u]);
                }
            std::vector<int> to_v;
            for (const auto& [i, j] : g.edges_sorted()) {
                if (i == v) to_v.push_back(relabel[j]);
                else if (j == v) to_v.push_back(relabel[i]);
                else rest.add_edge(relabel[i], relabel[j]);
            }
            lhs += h(rest, g.vertices[v], to_v);
        }

        // Right side: quadrature over the probe location; the probe's edges
        // are drawn fresh (one unbiased draw per node).
        RngStream edge_rng = sub.substream(0x9000);
        std::uint64_t node_id = 0;
        const double rhs = integrate(
            [&](const Vec& x) {
                const double lam = m.conditional_intensity(x, g.vertices);
                ++node_id;
                if (lam <= 0.0) return 0.0;
                RngStream er = edge_rng.substream(node_id);
                const std::vector<int> joined = sample_edges_to_new_vertex(g, x, em, er);
                return h(g, x, joined) * lam;
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
