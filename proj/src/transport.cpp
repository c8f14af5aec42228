#include "srg/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace srg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

//----------------------------------------------------------------------------
// Assignment: shortest augmenting paths with dual potentials, O(n^3).
//----------------------------------------------------------------------------

std::vector<int> solve_assignment(const std::vector<double>& cost, int n) {
    if (n <= 0) throw ValidationError("solve_assignment: empty problem");
    if (cost.size() != static_cast<std::size_t>(n) * n)
        throw ValidationError("solve_assignment: cost matrix size mismatch");
    for (double c : cost)
        if (!std::isfinite(c))
            throw NumericalError("solve_assignment: non-finite cost entry");

    // 1-based arrays; p[j] = row matched to column j (0 = none).
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

//----------------------------------------------------------------------------
// Transportation problem with uniform marginals: successive shortest paths
// on the dense bipartite graph, integer mass units, Johnson potentials.
//----------------------------------------------------------------------------

double transport_uniform(const std::vector<double>& cost, int na, int nb) {
    if (na <= 0 || nb <= 0) throw ValidationError("transport_uniform: empty marginal");
    if (cost.size() != static_cast<std::size_t>(na) * nb)
        throw ValidationError("transport_uniform: cost matrix size mismatch");
    for (double c : cost)
        if (!std::isfinite(c))
            throw NumericalError("transport_uniform: non-finite cost entry");

    const long g = std::gcd(static_cast<long>(na), static_cast<long>(nb));
    const long total = static_cast<long>(na) / g * nb; // lcm
    if (total > 80'000'000L)
        throw ValidationError("transport_uniform: sample sizes too disparate (mass units overflow)");
    const long sa = total / na, sb = total / nb;

    std::vector<long> supply(na, sa), demand(nb, sb);
    std::vector<long> flow(static_cast<std::size_t>(na) * nb, 0);
    // Node potentials phi: reduced cost of i->j is c_ij + phi_a[i] - phi_b[j],
    // of the reverse arc j->i (flow > 0) the negation; both stay >= 0.
    std::vector<double> pot_a(na, 0.0), pot_b(nb, 0.0);

    auto c_at = [&](int i, int j) { return cost[static_cast<std::size_t>(i) * nb + j]; };

    long remaining = total;
    const long max_augment = 64L * (na + nb) + total / std::max(1L, std::min(sa, sb));
    long augments = 0;
    while (remaining > 0) {
        if (++augments > std::max<long>(max_augment, 1'000'000L))
            throw NumericalError("transport_uniform: augmentation limit exceeded");

        // Multi-source Dijkstra (dense) from rows with residual supply to the
        // nearest column with residual demand, on reduced costs.
        std::vector<double> da(na, kInf), db(nb, kInf);
        std::vector<int> prev_col_of_row(na, -2); // -1 = source, else column
        std::vector<int> prev_row_of_col(nb, -2);
        std::vector<char> done_a(na, 0), done_b(nb, 0);
        for (int i = 0; i < na; ++i)
            if (supply[i] > 0) {
                da[i] = 0.0;
                prev_col_of_row[i] = -1;
            }
        int end_col = -1;
        while (true) {
            // Pick the unfinished node with the smallest tentative distance.
            double best = kInf;
            int bi = -1;
            bool is_row = true;
            for (int i = 0; i < na; ++i)
                if (!done_a[i] && da[i] < best) { best = da[i]; bi = i; is_row = true; }
            for (int j = 0; j < nb; ++j)
                if (!done_b[j] && db[j] < best) { best = db[j]; bi = j; is_row = false; }
            if (bi < 0) break;
            if (!is_row && demand[bi] > 0) { end_col = bi; break; }
            if (is_row) {
                done_a[bi] = 1;
                for (int j = 0; j < nb; ++j) {
                    if (done_b[j]) continue;
                    const double w = c_at(bi, j) + pot_a[bi] - pot_b[j];
                    const double nd = da[bi] + w;
                    if (nd < db[j]) {
                        db[j] = nd;
                        prev_row_of_col[j] = bi;
                    }
                }
            } else {
                done_b[bi] = 1;
                for (int i = 0; i < na; ++i) {
                    if (done_a[i]) continue;
                    if (flow[static_cast<std::size_t>(i) * nb + bi] <= 0) continue;
                    const double w = pot_b[bi] - pot_a[i] - c_at(i, bi);
                    const double nd = db[bi] + std::max(0.0, w);
                    if (nd < da[i]) {
                        da[i] = nd;
                        prev_col_of_row[i] = bi;
                    }
                }
            }
        }
        if (end_col < 0)
            throw NumericalError("transport_uniform: no augmenting path found");

        // Standard potential update: phi(v) += min(dist(v), dist(sink)) for
        // every node.  Unreached nodes (dist = inf) must still be shifted by
        // the sink distance, otherwise forward arcs from an unreached row
        // into a reached column acquire negative reduced costs and later
        // Dijkstra passes return non-shortest paths.
        const double dist_end = db[end_col];
        for (int i = 0; i < na; ++i) pot_a[i] += std::min(da[i], dist_end);
        for (int j = 0; j < nb; ++j) pot_b[j] += std::min(db[j], dist_end);

        // Trace the path back and find the bottleneck.
        long bottleneck = demand[end_col];
        {
            int j = end_col;
            while (true) {
                const int i = prev_row_of_col[j];
                if (prev_col_of_row[i] == -1) {
                    bottleneck = std::min(bottleneck, supply[i]);
                    break;
                }
                const int jprev = prev_col_of_row[i];
                bottleneck = std::min(bottleneck, flow[static_cast<std::size_t>(i) * nb + jprev]);
                j = jprev;
            }
        }
        {
            int j = end_col;
            while (true) {
                const int i = prev_row_of_col[j];
                flow[static_cast<std::size_t>(i) * nb + j] += bottleneck;
                if (prev_col_of_row[i] == -1) {
                    supply[i] -= bottleneck;
                    break;
                }
                const int jprev = prev_col_of_row[i];
                flow[static_cast<std::size_t>(i) * nb + jprev] -= bottleneck;
                j = jprev;
            }
            demand[end_col] -= bottleneck;
        }
        remaining -= bottleneck;
    }

    double value = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            value += static_cast<double>(flow[static_cast<std::size_t>(i) * nb + j]) * c_at(i, j);
    return value / static_cast<double>(total);
}

//----------------------------------------------------------------------------
// Sinkhorn iterations with uniform marginals.
//----------------------------------------------------------------------------

double sinkhorn_uniform(const std::vector<double>& cost, int na, int nb,
                        double reg, int max_iter, double tol) {
    if (!(reg > 0.0)) throw ValidationError("sinkhorn: regularisation must be > 0");
    if (na <= 0 || nb <= 0) throw ValidationError("sinkhorn: empty marginal");

    std::vector<double> K(cost.size());
    for (std::size_t k = 0; k < cost.size(); ++k) K[k] = std::exp(-cost[k] / reg);

    std::vector<double> u(na, 1.0), v(nb, 1.0);
    const double wa = 1.0 / na, wb = 1.0 / nb;
    for (int it = 0; it < max_iter; ++it) {
        double err = 0.0;
        for (int i = 0; i < na; ++i) {
            double s = 0.0;
            for (int j = 0; j < nb; ++j) s += K[static_cast<std::size_t>(i) * nb + j] * v[j];
            if (s <= 0.0 || !std::isfinite(s))
                throw NumericalError("sinkhorn: iteration underflow; increase regularisation");
            u[i] = wa / s;
        }
        for (int j = 0; j < nb; ++j) {
            double s = 0.0;
            for (int i = 0; i < na; ++i) s += K[static_cast<std::size_t>(i) * nb + j] * u[i];
            if (s <= 0.0 || !std::isfinite(s))
                throw NumericalError("sinkhorn: iteration underflow; increase regularisation");
            const double nv = wb / s;
            err = std::max(err, std::abs(nv - v[j]));
            v[j] = nv;
        }
        if (err < tol) break;
    }
    double value = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            value += u[i] * K[static_cast<std::size_t>(i) * nb + j] * v[j] *
                     cost[static_cast<std::size_t>(i) * nb + j];
    return value;
}

//----------------------------------------------------------------------------
// Empirical Wasserstein between graph samples.
//----------------------------------------------------------------------------

namespace {

void fill_cost_rows(const std::vector<SpatialGraph>& a, const std::vector<SpatialGraph>& b,
                    const MetricParams& mp, std::vector<double>& cost, bool& all_exact,
                    std::size_t row_begin, std::size_t row_end) {
    const std::size_t nb = b.size();
    for (std::size_t i = row_begin; i < row_end; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            const GospaResult r = gospa(a[i], b[j], mp);
            cost[i * nb + j] = r.value;
            if (!r.exact) all_exact = false;
        }
}

} // namespace

WassersteinResult empirical_wasserstein(const std::vector<SpatialGraph>& a,
                                        const std::vector<SpatialGraph>& b,
                                        const MetricParams& mp,
                                        const WassersteinOptions& opts) {
    mp.validate();
    if (a.empty() || b.empty())
        throw ValidationError("empirical_wasserstein: samples must be non-empty");

    const std::size_t na = a.size(), nb = b.size();
    std::vector<double> cost(na * nb);
    const int threads = std::max(1, opts.threads);
    bool all_exact = true;
    if (threads == 1 || na < 2 * static_cast<std::size_t>(threads)) {
        fill_cost_rows(a, b, mp, cost, all_exact, 0, na);
    } else {
        // Static row partition: the result does not depend on thread count.
        std::vector<std::thread> pool;
        std::vector<char> exact_flags(threads, 1);
        const std::size_t chunk = (na + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t lo = std::min(na, t * chunk);
            const std::size_t hi = std::min(na, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, t, lo, hi] {
                bool ex = true;
                fill_cost_rows(a, b, mp, cost, ex, lo, hi);
                exact_flags[t] = ex ? 1 : 0;
            });
        }
        for (auto& th : pool) th.join();
        for (char f : exact_flags) all_exact = all_exact && (f != 0);
    }

    WassersteinResult res;
    if (opts.method == WassersteinOptions::Method::sinkhorn) {
        res.value = sinkhorn_uniform(cost, static_cast<int>(na), static_cast<int>(nb),
                                     opts.sinkhorn_reg, opts.sinkhorn_max_iter);
        res.exact = false;
        return res;
    }
    if (na == nb) {
        const std::vector<int> match = solve_assignment(cost, static_cast<int>(na));
        double total = 0.0;
        for (std::size_t i = 0; i < na; ++i) total += cost[i * nb + match[i]];
        res.value = total / static_cast<double>(na);
    } else {
        res.value = transport_uniform(cost, static_cast<int>(na), static_cast<int>(nb));
    }
    res.exact = all_exact;
    return res;
}

NullCalibration null_calibration(const GraphSampler& sampler, int n, int reps,
                                 const MetricParams& mp, RngStream rng,
                                 const WassersteinOptions& opts) {
    if (n <= 0 || reps <= 0)
        throw ValidationError("null_calibration: n and reps must be > 0");
    NullCalibration out;
    out.values.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        RngStream sa = rng.substream(2 * static_cast<std::uint64_t>(r));
        RngStream sb = rng.substream(2 * static_cast<std::uint64_t>(r) + 1);
        std::vector<SpatialGraph> ga, gb;
        ga.reserve(n);
        gb.reserve(n);
        for (int i = 0; i < n; ++i) ga.push_back(sampler(sa));
        for (int i = 0; i < n; ++i) gb.push_back(sampler(sb));
        out.values.push_back(empirical_wasserstein(ga, gb, mp, opts).value);
    }
    std::vector<double> sorted = out.values;
    std::sort(sorted.begin(), sorted.end());
    const int rank = std::max(0, static_cast<int>(std::ceil(0.95 * reps)) - 1);
    out.band = sorted[rank];
    return out;
}

} // namespace srg
