#pragma once

#include <functional>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/gospa.hpp"
#include "srg/graph.hpp"
#include "srg/rng.hpp"

namespace srg {

//============================================================================
// Empirical optimal transport between samples of spatial graphs, with the
// GOSPA metric as ground cost.  Equal-size samples reduce to an assignment
// problem; unequal sizes go through an exact min-cost-flow transportation
// solve on integer mass units.  An entropic (Sinkhorn) approximation is
// available; its value is always an upper bound for the exact one.
//============================================================================

/// Exact solution of the square assignment problem (dense cost, row-major
/// n x n).  Returns for each row the assigned column.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n);

/// Exact optimal transport value between uniform discrete measures with
/// na resp. nb atoms and dense cost matrix (na x nb, row-major).
double transport_uniform(const std::vector<double>& cost, int na, int nb);

/// Entropic approximation with uniform marginals; returns the transport
/// cost <P, C> of the regularised plan (an upper bound on the exact value).
double sinkhorn_uniform(const std::vector<double>& cost, int na, int nb,
                        double reg, int max_iter = 20000, double tol = 1e-10);

struct WassersteinOptions {
    enum class Method { exact, sinkhorn };
    Method method = Method::exact;
    double sinkhorn_reg = 0.05;
    int sinkhorn_max_iter = 20000;
    /// Worker count for the cost matrix; results are independent of it.
    int threads = 1;
};

struct WassersteinResult {
    double value = 0.0;
    /// False when any GOSPA evaluation fell back to the local-search upper
    /// bound (graphs larger than 7 vertices) or when Sinkhorn was used; the
    /// value is then itself an upper bound.
    bool exact = true;
};

WassersteinResult empirical_wasserstein(const std::vector<SpatialGraph>& a,
                                        const std::vector<SpatialGraph>& b,
                                        const MetricParams& mp,
                                        const WassersteinOptions& opts = {});

using GraphSampler = std::function<SpatialGraph(RngStream&)>;

struct NullCalibration {
    /// 95th percentile (nearest rank) of same-law empirical distances.
    double band = 0.0;
    std::vector<double> values;
};

/// Distribution of the empirical transport distance between two independent
/// samples of size n from the same law: quantifies the finite-sample floor
/// of empirical estimates.  Bound checks use W_hat <= bound + band.
NullCalibration null_calibration(const GraphSampler& sampler, int n, int reps,
                                 const MetricParams& mp, RngStream rng,
                                 const WassersteinOptions& opts = {});

} // namespace srg
