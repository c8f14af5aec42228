#pragma once

#include <optional>

#include "srg/geometry.hpp"
#include "srg/grid.hpp"
#include "srg/point_process.hpp"
#include "srg/quadrature.hpp"
#include "srg/random_graph.hpp"

namespace srg {

//============================================================================
// Closed-form error bounds for Poisson-type graph approximation, a
// coupling-time bound for birth-death graph dynamics, and their
// model-specific specialisations (soft geometric graphs, Boolean-style
// percolation graphs, lattice discretisations).
//============================================================================

//--- Smoothness factors of the Poisson-target comparison ------------------//

/// Vertex-perturbation factor
///   c_V = min{ C_i, (1/L)(1 + (1 - e^-L) log+ L) * Ct_i },
/// where L is the expected vertex count of the target, C_i = cv + i/2 * ce
/// and Ct_i = cv + i * ce for metric variant i.
double stein_factor_vertex(double lambda_total, const MetricParams& mp);

/// Edge-perturbation factor
///   c_E = min{ 1/4, (2 - e^-L)/L - (3/2 - e^-L)/L^2 } * ce;
/// the second expression applies for L >= 1, below that the constant 1/4
/// binds.
double stein_factor_edge(double lambda_total, double ce);

//--- Coupling-time bound --------------------------------------------------//

/// Series cut value denoting n* = infinity.
inline constexpr long kInfiniteCut = -1;

/// Choice of the closed form used at n* = infinity: the logarithmic form
/// (1+e)/e * log(1/(1-e)) (the n* -> infinity limit of the finite-cut
/// series, requires e < 1) or the smaller exponential form
/// (1+e)/e * (exp(e) - 1) obtained from a separate estimate.  Arguments
/// e >= 1 always use the exponential form.
enum class BstarInfiniteForm { remark_log, theorem_exp };

/// Mean-coupling-time bound per unit of initial graph difference:
///   B* = (n*-1)! (e/c)^{n*-1} [ (1/c) S(c) + Integral ] + (1+e)/e sum_{i<n*} e^i/i,
/// with S(c) the upper tail sum_{i>=n*} c^i/i! and Integral the integral
/// over (0, c) of s^{-1} sum_{i>=n*} s^i/i!.  Continuous limits: e -> 0
/// gives 1 (n* >= 2); c -> 0 gives e^{n*-1}/n* plus the second sum.
double coupling_bound_bstar(double eps, double c, long nstar,
                            BstarInfiniteForm form = BstarInfiniteForm::remark_log);

/// One-removal sensitivity of an inhibitory pairwise model: the largest
/// value over probe locations z of integral beta(x) (1 - phi(x, z)) dx.
/// Zero for Poisson models.
double pip_epsilon(const GibbsModel& m, const Window& w,
                   const QuadratureSpec& quad = {}, int z_per_axis = 16);

/// n*-independent bound on the pattern-pair sensitivity c for inhibitory
/// models: integral of beta (|lambda difference| <= beta pointwise).
double pip_c_bound(const GibbsModel& m, const Window& w, const QuadratureSpec& quad = {});

/// Optimal series cut n* = ceil(c / eps) for an n*-independent c bound.
long optimal_series_cut(double eps, double c);

//--- Coupled single-site dynamics on a finite register --------------------//

/// Expected meeting time of two coupled heat-bath chains on {0,1}^n started
/// m sites apart (shared clocks, sites and innovations): n * H_m.
double glauber_expected_coupling_time(int n, int m);

//--- Soft geometric graph comparison --------------------------------------//

struct SoftRggBound {
    double sup_norm = 0.0;     // bound for |E f(G1) - E f(G2)|, ||f||_inf <= 1
    double wasserstein = 0.0;  // bound in the graph transport metric
    double vertex_term = 0.0;  // c_V part of the transport bound
    double edge_term = 0.0;    // c_E part of the transport bound
    double lambda1_total = 0.0;
    double lambda2_total = 0.0;
};

/// Bound between two Poisson-vertex soft geometric graphs (intensity
/// lambda_i, connection kernel kappa_i); the second model is the target.
SoftRggBound soft_rgg_bound(const GibbsModel& m1, const EdgeModel& k1,
                            const GibbsModel& m2, const EdgeModel& k2,
                            const Window& w, const MetricParams& mp,
                            const QuadratureSpec& quad = {});

//--- Boolean-style percolation graph --------------------------------------//

struct BooleanModelParams {
    int dim = 2;
    Window window;            // target window (contracted scale)
    double mu = 0.1;          // centre intensity on the pre-image window
    double pareto_a = 2.0;    // radius tail exponent: P(R >= r) = (r/r0)^-a
    double pareto_scale = 1.0; // r0
    double contraction_b = 2.0; // q = rstar^-b
    double psi_gamma = 0.5;   // radius shrink psi(s) = s^gamma / rstar^delta
    double psi_delta = 0.0;
    double rstar = 10.0;      // radius threshold for the thinning

    enum class Centres { poisson, determinantal };
    Centres centres = Centres::poisson;
    /// Spectral parameter of the determinantal centre law (formula-only
    /// vertex term); must lie in (0, 1).
    double dpp_theta = 0.5;

    double thinning_p() const;   // P(R >= rstar)
    double contraction_q() const;
    double lambda() const;       // intensity of the thinned, contracted process
    double target_t() const;     // connection radius parameter of the target
    void validate() const;
};

struct BooleanBound {
    double total = 0.0;
    double vertex_term = 0.0;
    double edge_term = 0.0;
    double lambda = 0.0;
    double lambda_total = 0.0;   // lambda * |window|
    double target_t = 0.0;
    double radial_moment = 0.0;  // E psi(R-r)(r + psi(R-r))^{d-1} 1{R >= r}
};

/// Distance bound between the transformed percolation graph and the
/// geometric target graph with radius 2t.
BooleanBound boolean_bound(const BooleanModelParams& p, const MetricParams& mp);

//--- Lattice discretisation ------------------------------------------------//

struct DiscretisationBound {
    double general = 0.0;        // quadrature-based bound
    double lipschitz = 0.0;      // closed-form bound (needs Lipschitz data)
    double r_v = 0.0;            // cell radius (capped at cv)
    double eps = 0.0;
    double c_bound = 0.0;
    long nstar = 0;
    double bstar = 0.0;
    double beta_l1 = 0.0;        // ||beta - beta o t||_1
    double phi_l1 = 0.0;         // ||phi - phi o t||_1 over window^2
    double kappa_l1 = 0.0;       // ||kappa - kappa o t||_1 over window^2
};

struct LipschitzData {
    double l_v = 0.0; // Lipschitz constant of phi in each argument
    double l_e = 0.0; // Lipschitz constant of kappa in each argument
};

/// Distance bound between the continuous model graph and its cell-centre
/// lattice approximation.
DiscretisationBound discretisation_bound(const GibbsModel& m, const EdgeModel& em,
                                         const DiscretisationGrid& grid,
                                         const MetricParams& mp,
                                         const QuadratureSpec& quad = {},
                                         std::optional<LipschitzData> lip = std::nullopt);

} // namespace srg
