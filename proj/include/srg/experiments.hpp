#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srg/gbdp.hpp"
#include "srg/geometry.hpp"
#include "srg/graph.hpp"
#include "srg/grid.hpp"
#include "srg/point_process.hpp"
#include "srg/random_graph.hpp"
#include "srg/stein_bounds.hpp"
#include "srg/transport.hpp"

namespace srg {

//============================================================================
// End-to-end verification experiments: every run simulates graph samples,
// estimates the empirical transport distance to a target law, evaluates the
// matching closed-form bound, and reports both together with a same-law
// calibration band (the finite-sample zero level of the empirical distance).
// All experiments are deterministic functions of (config, seed) and
// independent of the worker thread count.
//============================================================================

//--- Boolean-style percolation graph vs geometric target -------------------//

/// One transformed percolation graph at radius threshold rstar: surviving
/// centres form a Poisson process of intensity lambda on the target window
/// (position sampling happens directly in target coordinates, so the cost
/// does not grow with rstar), radii are Pareto conditioned on R >= rstar,
/// and pairs connect when the contracted distance is below the sum of their
/// shrunken radii.
SpatialGraph sample_boolean_percolation(const BooleanModelParams& p, RngStream& rng);

/// Matching geometric target graph: Poisson(lambda) vertices, edge iff
/// distance <= 2 t(rstar).
SpatialGraph sample_boolean_target(const BooleanModelParams& p, RngStream& rng);

struct BooleanExperimentConfig {
    BooleanModelParams base;      // rstar is overridden by each sweep value
    std::vector<double> r_list;
    int n_samples = 150;
    int null_reps = 50;
    MetricParams metric;
    WassersteinOptions wopts;
    std::uint64_t seed = 1;
};

struct BooleanRow {
    double r = 0.0;
    double w_hat = 0.0;
    double bound = 0.0;
    double null_band = 0.0;
    double vertex_term = 0.0;
    double edge_term = 0.0;
    double lambda = 0.0;
    double target_t = 0.0;
    double radial_moment = 0.0;
    bool within = false;          // w_hat <= bound + null_band
};

struct BooleanExperimentResult {
    std::vector<BooleanRow> rows;
    double bound_slope = 0.0;     // log-log slope of bound vs r
    double w_slope = 0.0;         // log-log slope of w_hat vs r
    bool all_within = false;
};

BooleanExperimentResult run_boolean_experiment(const BooleanExperimentConfig& cfg);

//--- Soft geometric graph bound verification -------------------------------//

struct SoftRggCell {
    double lambda1 = 0.0, lambda2 = 0.0;  // constant intensities
    double p1 = 0.0, p2 = 0.0;            // constant connection probabilities
};

struct SoftRggExperimentConfig {
    Window window = Window::unit(2);
    std::vector<SoftRggCell> cells;
    int n_samples = 300;
    int null_reps = 50;
    int n_functionals = 20;       // bounded test functionals for the sup-norm mode
    int functional_samples = 2000;
    MetricParams metric;
    WassersteinOptions wopts;
    std::uint64_t seed = 1;
};

struct SoftRggRow {
    SoftRggCell cell;
    double w_hat = 0.0;
    double bound_wasserstein = 0.0;
    double null_band = 0.0;
    double bound_sup = 0.0;
    double max_functional_excess = 0.0;  // max over f of |gap| - 3 se - bound_sup
    bool within = false;
    bool functionals_within = false;
};

struct SoftRggExperimentResult {
    std::vector<SoftRggRow> rows;
    bool all_within = false;
    bool all_functionals_within = false;
};

SoftRggExperimentResult run_soft_rgg_experiment(const SoftRggExperimentConfig& cfg);

//--- Lattice discretisation convergence ------------------------------------//

/// Occupancy birth-death chain for the lattice restriction of an inhibitory
/// model: sites are cell centres with weights beta(centre) * cell volume,
/// proposals of occupied sites are rejected (configurations stay simple),
/// and occupied sites die at unit rate.  The chain runs in continuous time
/// until the given horizon; horizon <= 0 selects the default burn-in.
/// Returns the occupied-centre graph with kappa edges.
SpatialGraph sample_lattice_rgg(const GibbsModel& m, const EdgeModel& em,
                                const DiscretisationGrid& grid, RngStream& rng,
                                double horizon = 0.0);

/// Intermediate variant: lattice occupancy as above, but each vertex is
/// placed uniformly in its cell while edges keep the centre-evaluated
/// connection probabilities.
SpatialGraph sample_intermediate_rgg(const GibbsModel& m, const EdgeModel& em,
                                     const DiscretisationGrid& grid, RngStream& rng,
                                     double horizon = 0.0);

struct DiscretisationExperimentConfig {
    GibbsModel model;             // inhibitory, constant beta
    EdgeModel edge;
    Window window = Window::unit(1);
    std::vector<int> cells_per_axis_list{2, 4, 8, 16};
    std::optional<LipschitzData> lipschitz;
    int n_samples = 400;
    int null_reps = 40;
    MetricParams metric;
    WassersteinOptions wopts;
    QuadratureSpec quad;
    std::uint64_t seed = 1;
};

struct DiscretisationRow {
    int cells_per_axis = 0;
    double r_v = 0.0;
    double w_hat = 0.0;
    double bound_general = 0.0;
    double bound_lipschitz = 0.0;
    double null_band = 0.0;
    bool within = false;          // w_hat <= applicable bound + null_band
};

struct DiscretisationExperimentResult {
    std::vector<DiscretisationRow> rows;
    double lipschitz_slope = 0.0; // log-log slope of the closed-form bound vs r_V
    double w_slope = 0.0;         // log-log slope of w_hat vs r_V
    bool all_within = false;
};

DiscretisationExperimentResult run_discretisation_experiment(
    const DiscretisationExperimentConfig& cfg);

//--- Coupling-time study ----------------------------------------------------//

struct CouplingStudyConfig {
    GibbsModel model;
    EdgeModel edge;
    Window window = Window::unit(2);
    SpatialGraph init_a, init_b;
    int n_reps = 10000;
    double horizon = 200.0;
    std::uint64_t seed = 1;
};

struct CouplingStudyResult {
    double mean_time = 0.0;
    double std_error = 0.0;
    int n_coupled = 0;            // reps that coupled before the horizon
    int n_censored = 0;
    int rho0 = 0;
};

/// Mean coupling time over independent replicate pairs; censored replicates
/// (horizon reached first) enter with the horizon value, so the reported
/// mean is a lower bound if n_censored > 0.
CouplingStudyResult run_coupling_study(const CouplingStudyConfig& cfg);

} // namespace srg
