#pragma once

#include <functional>
#include <string>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/graph.hpp"
#include "srg/point_process.hpp"
#include "srg/quadrature.hpp"
#include "srg/rng.hpp"

namespace srg {

//============================================================================
// Random graphs on point patterns: conditionally on the vertices, each pair
// {x, y} carries an edge independently with probability kappa(x, y).
//============================================================================

struct EdgeModel {
    std::function<double(const Vec&, const Vec&)> kappa;
    std::string desc = "custom";

    double operator()(const Vec& x, const Vec& y) const {
        const double p = kappa(x, y);
        if (!(p >= 0.0) || !(p <= 1.0) || !std::isfinite(p))
            throw ValidationError("edge model: invalid connection probability (must be in [0, 1])");
        return p;
    }

    /// Constant connection probability.
    static EdgeModel constant(double p);

    /// Geometric connection: edge iff dist <= r.
    static EdgeModel hard_threshold(double r, int dim);

    /// Smooth Lipschitz profile p0 * exp(-dist^2 / range^2).
    static EdgeModel gaussian(double p0, double range, int dim);

    void validate(const Window& w, RngStream probe) const;
};

/// Independent Bernoulli(kappa) edges over all vertex pairs of the pattern.
SpatialGraph sample_edges(const PointPattern& pat, const EdgeModel& em, RngStream& rng);

/// Edges between a new vertex x and the existing vertices only; returns the
/// indices of the connected existing vertices.
std::vector<int> sample_edges_to_new_vertex(const SpatialGraph& g, const Vec& x,
                                            const EdgeModel& em, RngStream& rng);

/// Full draw: vertices from the Gibbs/Poisson model, then independent edges.
SpatialGraph sample_rgg(const GibbsModel& m, const EdgeModel& em, const Window& w,
                        RngStream& rng, const QuadratureSpec& quad = {});

/// Test function h(rest, x, edges_to_x): graph without the probe vertex, the
/// probe location, and the indices of rest-vertices joined to the probe.
using GraphTestFunction =
    std::function<double(const SpatialGraph&, const Vec&, const std::vector<int>&)>;

/// Graph version of the conditional-intensity integral identity: the probe
/// vertex on the right side receives a fresh independent edge pattern.
GnzResult graph_gnz_residual(const GibbsModel& m, const EdgeModel& em, const Window& w,
                             const GraphTestFunction& h, int n_samples, RngStream rng,
                             const QuadratureSpec& quad = {});

} // namespace srg
