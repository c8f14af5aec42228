#include "srg/gbdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "srg/stats.hpp"

namespace srg {

//----------------------------------------------------------------------------
// Trajectories.
//----------------------------------------------------------------------------

namespace {

const TrajectoryPoint& state_at(const std::vector<TrajectoryPoint>& points, double t) {
    if (points.empty())
        throw ValidationError("trajectory: no recorded points (record disabled?)");
    if (t < points.front().time)
        throw ValidationError("trajectory: query time precedes the first record");
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double v, const TrajectoryPoint& p) { return v < p.time; });
    return *(it - 1);
}

} // namespace

const TrajectoryPoint& Trajectory::at(double t) const { return state_at(points, t); }
const TrajectoryPoint& CoupledRun::at_a(double t) const { return state_at(points_a, t); }

//----------------------------------------------------------------------------
// Single chain.
//----------------------------------------------------------------------------

double jump_rate(const SpatialGraph& g, const GibbsModel& m, const Window& w,
                 const QuadratureSpec& quad) {
    const double birth = integrate(
        [&](const Vec& x) { return m.conditional_intensity(x, g.vertices); }, w, quad).value;
    return birth + g.n_vertices();
}

Trajectory run_gbdp(const GibbsModel& m, const EdgeModel& em, const Window& w,
                    const SpatialGraph& init, RngStream& rng, const GbdpOptions& opt,
                    const QuadratureSpec& quad) {
    w.validate();
    init.validate();
    if (init.dim != w.dim) throw ValidationError("run_gbdp: graph/window dimension mismatch");
    if (!(opt.horizon > 0.0)) throw ValidationError("run_gbdp: horizon must be > 0");

    Trajectory traj;
    traj.horizon = opt.horizon;
    SpatialGraph g = init;
    if (opt.record) traj.points.push_back({0.0, g.n_vertices(), g.n_edges()});

    const double proposal_rate = beta_total(m, w, quad);
    double t = 0.0;
    while (true) {
        const double rate = proposal_rate + g.n_vertices();
        if (rate <= 0.0) break; // empty graph and no births possible: absorbed
        t += rng.exponential(rate);
        if (t > opt.horizon) break;

        if (rng.uniform() * rate < proposal_rate) {
            const Vec y = sample_beta_location(m, w, rng);
            const double lam = m.conditional_intensity(y, g.vertices);
            if (rng.uniform() * m.beta(y) < lam) {
                g.add_vertex(y, sample_edges_to_new_vertex(g, y, em, rng));
                ++traj.n_births;
            } else {
                ++traj.n_phantoms;
                continue; // no state change, nothing to record
            }
        } else {
            g.remove_vertex(static_cast<int>(rng.uniform_index(g.n_vertices())));
            ++traj.n_deaths;
        }
        if (opt.record) traj.points.push_back({t, g.n_vertices(), g.n_edges()});
    }
    traj.final_graph = std::move(g);
    return traj;
}

//----------------------------------------------------------------------------
// Generator.
//----------------------------------------------------------------------------

double generator_apply(const GraphFunctional& h, const SpatialGraph& g, const GibbsModel& m,
                       const EdgeModel& em, const Window& w, RngStream& rng,
                       int edge_draws, const QuadratureSpec& quad) {
    if (edge_draws < 1) throw ValidationError("generator_apply: edge_draws must be >= 1");
    const double h0 = h(g);

    const double birth = integrate(
        [&](const Vec& x) {
            const double lam = m.conditional_intensity(x, g.vertices);
            if (lam <= 0.0) return 0.0;
            double acc = 0.0;
            for (int k = 0; k < edge_draws; ++k) {
                SpatialGraph gp = g;
                const std::vector<int> nb = sample_edges_to_new_vertex(g, x, em, rng);
                gp.add_vertex(x, nb);
                acc += h(gp) - h0;
            }
            return lam * acc / edge_draws;
        },
        w, quad).value;

    double death = 0.0;
    for (int v = 0; v < g.n_vertices(); ++v) {
        SpatialGraph gm = g;
        gm.remove_vertex(v);
        death += h(gm) - h0;
    }
    return birth + death;
}

//----------------------------------------------------------------------------
// Graph difference and the coupled pair.
//----------------------------------------------------------------------------

namespace {

/// Sorted map from vertex coordinates to the index in each graph (-1 when
/// absent).  Throws if either graph repeats a coordinate.
std::map<Vec, std::pair<int, int>> coordinate_union(const SpatialGraph& a,
                                                    const SpatialGraph& b) {
    std::map<Vec, std::pair<int, int>> u;
    for (int i = 0; i < a.n_vertices(); ++i) {
        auto& slot = u.emplace(a.vertices[i], std::make_pair(-1, -1)).first->second;
        if (slot.first >= 0)
            throw ValidationError("coupled dynamics: repeated vertex coordinates in a graph");
        slot.first = i;
    }
    for (int i = 0; i < b.n_vertices(); ++i) {
        auto& slot = u.emplace(b.vertices[i], std::make_pair(-1, -1)).first->second;
        if (slot.second >= 0)
            throw ValidationError("coupled dynamics: repeated vertex coordinates in a graph");
        slot.second = i;
    }
    return u;
}

} // namespace

int graph_difference(const SpatialGraph& a, const SpatialGraph& b) {
    const auto u = coordinate_union(a, b);
    std::vector<std::pair<int, int>> common;
    common.reserve(u.size());
    for (const auto& [coord, idx] : u)
        if (idx.first >= 0 && idx.second >= 0) common.push_back(idx);

    int matched = 0;
    for (const auto& [ia, ib] : common) {
        bool ok = true;
        for (const auto& [ja, jb] : common) {
            if (ja == ia) continue;
            if (a.has_edge(ia, ja) != b.has_edge(ib, jb)) { ok = false; break; }
        }
        if (ok) ++matched;
    }
    return static_cast<int>(u.size()) - matched;
}

CoupledRun run_coupled_gbdp(const GibbsModel& m, const EdgeModel& em, const Window& w,
                            const SpatialGraph& init_a, const SpatialGraph& init_b,
                            RngStream& rng, const CoupleOptions& opt,
                            const QuadratureSpec& quad) {
    w.validate();
    init_a.validate();
    init_b.validate();
    if (init_a.dim != w.dim || init_b.dim != w.dim)
        throw ValidationError("run_coupled_gbdp: graph/window dimension mismatch");
    if (!(opt.horizon > 0.0)) throw ValidationError("run_coupled_gbdp: horizon must be > 0");

    CoupledRun run;
    run.horizon = opt.horizon;
    SpatialGraph ga = init_a, gb = init_b;
    run.rho0 = graph_difference(ga, gb);
    if (run.rho0 == 0) {
        run.coupled = true;
        run.coupling_time = 0.0;
    }
    if (opt.record) {
        run.points_a.push_back({0.0, ga.n_vertices(), ga.n_edges()});
        run.points_b.push_back({0.0, gb.n_vertices(), gb.n_edges()});
    }
    const double proposal_rate = beta_total(m, w, quad);
    double t = 0.0;
    while (!(run.coupled && opt.stop_when_coupled)) {
        const auto u = coordinate_union(ga, gb);
        const double rate = proposal_rate + static_cast<double>(u.size());
        if (rate <= 0.0) break;
        t += rng.exponential(rate);
        if (t > opt.horizon) break;

        bool changed = false;
        if (rng.uniform() * rate < proposal_rate) {
            // Shared proposal location and a single acceptance uniform.
            const Vec y = sample_beta_location(m, w, rng);
            const double v = rng.uniform() * m.beta(y);
            const bool acc_a = v < m.conditional_intensity(y, ga.vertices);
            const bool acc_b = v < m.conditional_intensity(y, gb.vertices);
            if (acc_a || acc_b) {
                // One edge variable per union vertex, shared where common.
                std::vector<int> nb_a, nb_b;
                for (const auto& [coord, idx] : u) {
                    const double uu = rng.uniform();
                    const double p = em(coord, y);
                    if (uu < p) {
                        if (acc_a && idx.first >= 0) nb_a.push_back(idx.first);
                        if (acc_b && idx.second >= 0) nb_b.push_back(idx.second);
                    }
                }
                if (acc_a) ga.add_vertex(y, nb_a);
                if (acc_b) gb.add_vertex(y, nb_b);
                changed = true;
            }
        } else {
            // Shared death pick on the union of the two vertex sets.
            const std::size_t k = rng.uniform_index(u.size());
            auto it = u.begin();
            std::advance(it, static_cast<long>(k));
            const auto idx = it->second;
            if (idx.first >= 0) ga.remove_vertex(idx.first);
            if (idx.second >= 0) gb.remove_vertex(idx.second);
            changed = true;
        }
        if (!changed) continue;
        if (opt.record) {
            run.points_a.push_back({t, ga.n_vertices(), ga.n_edges()});
            run.points_b.push_back({t, gb.n_vertices(), gb.n_edges()});
        }
        if (!run.coupled && graph_difference(ga, gb) == 0) {
            run.coupled = true;
            run.coupling_time = t;
        }
    }
    run.final_a = std::move(ga);
    run.final_b = std::move(gb);
    return run;
}

//----------------------------------------------------------------------------
// Coupled single-site resampling on a finite register.
//----------------------------------------------------------------------------

long simulate_glauber_coupling(int n, int m, double p, RngStream& rng) {
    if (n < 1 || n > 63) throw ValidationError("glauber simulation: n must lie in [1, 63]");
    if (m < 0 || m > n)
        throw ValidationError("glauber simulation: disagreement count must lie in [0, n]");
    if (!(p >= 0.0) || !(p <= 1.0))
        throw ValidationError("glauber simulation: p must lie in [0, 1]");
    std::uint64_t disagree = (m == 0) ? 0 : (~std::uint64_t{0} >> (64 - m));
    long steps = 0;
    while (disagree != 0) {
        const std::uint64_t site = rng.uniform_index(static_cast<std::uint64_t>(n));
        (void)rng.bernoulli(p); // shared refreshed value; both copies take it
        disagree &= ~(std::uint64_t{1} << site);
        ++steps;
    }
    return steps;
}

//----------------------------------------------------------------------------
// Marginal preservation check.
//----------------------------------------------------------------------------

MarginalCheck marginal_check(const GibbsModel& m, const EdgeModel& em, const Window& w,
                             const SpatialGraph& init_a, const SpatialGraph& init_b,
                             int n_paths, const std::vector<double>& times, RngStream rng,
                             const QuadratureSpec& quad) {
    if (n_paths < 10) throw ValidationError("marginal_check: need at least 10 paths");
    if (times.empty()) throw ValidationError("marginal_check: need at least one check time");
    double horizon = 0.0;
    for (double t : times) {
        if (!(t > 0.0)) throw ValidationError("marginal_check: times must be > 0");
        horizon = std::max(horizon, t);
    }

    CoupleOptions copt;
    copt.horizon = horizon * 1.0001;
    copt.record = true;
    copt.stop_when_coupled = false;
    GbdpOptions sopt;
    sopt.horizon = horizon * 1.0001;
    sopt.record = true;

    const std::size_t nt = times.size();
    std::vector<std::vector<double>> coup_v(nt), coup_e(nt), solo_v(nt), solo_e(nt);
    for (int r = 0; r < n_paths; ++r) {
        RngStream rc = rng.substream(2 * static_cast<std::uint64_t>(r));
        RngStream rs = rng.substream(2 * static_cast<std::uint64_t>(r) + 1);
        const CoupledRun cr = run_coupled_gbdp(m, em, w, init_a, init_b, rc, copt, quad);
        const Trajectory tr = run_gbdp(m, em, w, init_a, rs, sopt, quad);
        for (std::size_t k = 0; k < nt; ++k) {
            const TrajectoryPoint& pc = cr.at_a(times[k]);
            const TrajectoryPoint& ps = tr.at(times[k]);
            coup_v[k].push_back(pc.n_vertices);
            coup_e[k].push_back(static_cast<double>(pc.n_edges));
            solo_v[k].push_back(ps.n_vertices);
            solo_e[k].push_back(static_cast<double>(ps.n_edges));
        }
    }

    MarginalCheck out;
    for (std::size_t k = 0; k < nt; ++k) {
        const double dv = ks_statistic(coup_v[k], solo_v[k]);
        const double de = ks_statistic(coup_e[k], solo_e[k]);
        out.p_values.push_back(ks_p_value(dv, coup_v[k].size(), solo_v[k].size()));
        out.p_values.push_back(ks_p_value(de, coup_e[k].size(), solo_e[k].size()));
    }
    out.min_p = *std::min_element(out.p_values.begin(), out.p_values.end());
    return out;
}

} // namespace srg
