#pragma once

#include <functional>
#include <string>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/quadrature.hpp"
#include "srg/rng.hpp"

namespace srg {

//============================================================================
// Vertex-law models: Poisson processes and inhibitory pairwise-interaction
// processes, described through the conditional intensity
//
//     lambda(x | xs) = beta(x) * prod_{y in xs} phi(x, y),      phi <= 1.
//
// beta_sup bounds beta on the window, so lambda <= beta <= beta_sup (local
// stability); all samplers exploit this envelope.
//============================================================================

struct GibbsModel {
    enum class Kind { poisson, pairwise };

    Kind kind = Kind::poisson;
    std::function<double(const Vec&)> beta;
    double beta_sup = 0.0;
    /// Pair interaction; ignored for the Poisson kind.
    std::function<double(const Vec&, const Vec&)> phi;

    /// Serialisation / provenance descriptors (e.g. "const:5", "hardcore:0.1").
    std::string beta_desc = "custom";
    std::string phi_desc = "none";

    double conditional_intensity(const Vec& x, const std::vector<Vec>& xs) const {
        double lam = beta(x);
        if (kind == Kind::pairwise)
            for (const Vec& y : xs) {
                lam *= phi(x, y);
                if (lam == 0.0) return 0.0;
            }
        return lam;
    }

    /// Homogeneous Poisson process with the given rate.
    static GibbsModel poisson_const(double rate);

    /// Hard core: no pair closer than r (phi = 1{dist > r}).
    static GibbsModel hard_core(double beta0, double r, int dim);

    /// Soft core: pairs closer than r are damped by the factor delta in
    /// [0, 1] (phi = 1 - (1 - delta) 1{dist <= r}).
    static GibbsModel soft_core(double beta0, double r, double delta, int dim);

    /// Smooth inhibition phi(x,y) = 1 - strength * exp(-dist^2 / range^2),
    /// Lipschitz in each argument; strength in [0, 1].
    static GibbsModel smooth_inhibition(double beta0, double strength, double range, int dim);

    void validate(const Window& w, RngStream probe) const;
};

/// Total intensity integral(beta) over the window.
double beta_total(const GibbsModel& m, const Window& w, const QuadratureSpec& quad = {});

/// One draw with density proportional to beta (envelope rejection against
/// beta_sup); the proposal distribution of all birth-death samplers.
Vec sample_beta_location(const GibbsModel& m, const Window& w, RngStream& rng);

/// Exact draw from the Poisson process with intensity beta (rejection from
/// the beta_sup envelope for non-constant beta).
PointPattern sample_poisson(const GibbsModel& m, const Window& w, RngStream& rng,
                            const QuadratureSpec& quad = {});

/// Draw from the pairwise Gibbs law via a dominated spatial birth-death
/// chain: birth proposals at rate integral(beta) thinned by lambda/beta,
/// unit per-point death rate.  The chain runs in continuous time from the
/// empty pattern and returns the state at the burn-in horizon (the state at
/// a fixed time is stationary-unbiased up to the exponentially small
/// relaxation error, unlike the state after a fixed number of jumps, whose
/// law carries the jump-rate bias of the embedded chain).  horizon = 0
/// selects the default of 30 time units, i.e. 30 mean point lifetimes.
PointPattern sample_gibbs(const GibbsModel& m, const Window& w, RngStream& rng,
                          double horizon = 0.0, const QuadratureSpec& quad = {});

/// Test function h(rest, x): pattern without the probe point, probe point.
using PointTestFunction = std::function<double(const std::vector<Vec>&, const Vec&)>;

struct GnzResult {
    double lhs_mean = 0.0;   // E sum_{x in X} h(X - x, x)
    double rhs_mean = 0.0;   // E int h(X, x) lambda(x | X) dx
    double diff_mean = 0.0;  // paired mean of lhs - rhs
    double std_error = 0.0;  // standard error of diff_mean
    int n_samples = 0;
};

/// Monte Carlo check of the defining integral identity of the conditional
/// intensity (equality of the two sides characterises the model law).
GnzResult gnz_residual(const GibbsModel& m, const Window& w, const PointTestFunction& h,
                       int n_samples, RngStream rng, const QuadratureSpec& quad = {});

} // namespace srg
