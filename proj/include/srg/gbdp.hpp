#pragma once

#include <functional>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/graph.hpp"
#include "srg/point_process.hpp"
#include "srg/quadrature.hpp"
#include "srg/random_graph.hpp"
#include "srg/rng.hpp"

namespace srg {

//============================================================================
// Graph birth-death dynamics.
//
// The continuous-time jump process whose stationary law is the spatial
// random graph (Gibbs vertices, independent kappa-edges): vertices are born
// at rate lambda(x | current vertices) with a fresh, independent edge
// pattern to the existing vertices, and every vertex dies at unit rate
// together with its incident edges.  Simulation uses dominated thinning:
// proposals arrive at rate integral(beta), are placed with density
// beta / integral(beta) and survive with probability lambda / beta, so
// rejected proposals leave the state unchanged.
//
// The coupled version runs two copies on shared randomness: common proposal
// locations, a single acceptance uniform (maximal coupling of the two
// acceptance indicators), shared edge variables at vertices the copies have
// in common, and a shared death pick on the union of the two vertex sets.
// Both marginals remain exact copies of the single-chain dynamics, and once
// the copies agree they agree forever.
//============================================================================

struct TrajectoryPoint {
    double time = 0.0;
    int n_vertices = 0;
    long n_edges = 0;
};

struct GbdpOptions {
    double horizon = 20.0;  // simulated time span
    bool record = true;     // keep a per-jump trajectory
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;  // state at time 0 and after each jump
    SpatialGraph final_graph;
    double horizon = 0.0;
    long n_births = 0;
    long n_deaths = 0;
    long n_phantoms = 0;  // rejected proposals (no state change)

    /// State at time t (last recorded point with time <= t); requires record.
    const TrajectoryPoint& at(double t) const;
};

/// Total jump rate integral(lambda(x | g)) + |g| out of the current state.
double jump_rate(const SpatialGraph& g, const GibbsModel& m, const Window& w,
                 const QuadratureSpec& quad = {});

/// Run the dynamics from the given initial graph over [0, horizon].
Trajectory run_gbdp(const GibbsModel& m, const EdgeModel& em, const Window& w,
                    const SpatialGraph& init, RngStream& rng, const GbdpOptions& opt = {},
                    const QuadratureSpec& quad = {});

using GraphFunctional = std::function<double(const SpatialGraph&)>;

/// Monte Carlo estimate of the process generator applied to h at graph g:
/// the birth integral is evaluated by quadrature with `edge_draws` fresh
/// edge patterns per node, the death sum exactly.  Averages to zero over
/// stationary samples.
double generator_apply(const GraphFunctional& h, const SpatialGraph& g, const GibbsModel& m,
                       const EdgeModel& em, const Window& w, RngStream& rng,
                       int edge_draws = 8, const QuadratureSpec& quad = {});

/// Number of unmatched vertices between two graphs: vertices are matched by
/// exact coordinate equality, and a common vertex counts as matched only if
/// its edges to the other common vertices agree in both graphs.  Zero if and
/// only if the graphs are identical.  Requires distinct coordinates within
/// each graph.
int graph_difference(const SpatialGraph& a, const SpatialGraph& b);

struct CoupleOptions {
    double horizon = 50.0;
    bool record = false;          // keep per-jump trajectories of both copies
    bool stop_when_coupled = true;
};

struct CoupledRun {
    bool coupled = false;
    double coupling_time = -1.0;  // first time the copies are identical
    int rho0 = 0;                 // initial graph difference
    double horizon = 0.0;
    SpatialGraph final_a, final_b;
    std::vector<TrajectoryPoint> points_a, points_b;

    const TrajectoryPoint& at_a(double t) const;
};

/// Run the coupled pair of chains from the two initial graphs.
CoupledRun run_coupled_gbdp(const GibbsModel& m, const EdgeModel& em, const Window& w,
                            const SpatialGraph& init_a, const SpatialGraph& init_b,
                            RngStream& rng, const CoupleOptions& opt = {},
                            const QuadratureSpec& quad = {});

/// Steps until two coupled single-site resampling chains on {0,1}^n meet,
/// started m sites apart: per step one shared uniform site is redrawn as the
/// same Bernoulli(p) value in both chains.  The expected step count is
/// n * (1 + 1/2 + ... + 1/m) independently of p.
long simulate_glauber_coupling(int n, int m, double p, RngStream& rng);

struct MarginalCheck {
    std::vector<double> p_values;  // one KS p per (time, statistic) pair
    double min_p = 1.0;
};

/// Distributional check that coupling leaves the first marginal untouched:
/// vertex and edge counts of the first coupled copy at the given times are
/// compared against an independent single-chain run via two-sample KS tests.
MarginalCheck marginal_check(const GibbsModel& m, const EdgeModel& em, const Window& w,
                             const SpatialGraph& init_a, const SpatialGraph& init_b,
                             int n_paths, const std::vector<double>& times, RngStream rng,
                             const QuadratureSpec& quad = {});

} // namespace srg
