#include "srg/gospa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "srg/transport.hpp"

namespace srg {

namespace {

//----------------------------------------------------------------------------
// Shared scaffolding: cost tables for one ordered pair (a smaller, b larger).
//----------------------------------------------------------------------------

struct Tables {
    int n = 0;                      // |a| (smaller)
    int m = 0;                      // |b| (larger)
    std::vector<double> dv;         // n x m vertex costs
    std::vector<std::uint8_t> adj_a; // n x n
    std::vector<std::uint8_t> adj_b; // m x m
    long edges_b = 0;
    MetricParams mp;

    double dvat(int i, int j) const { return dv[static_cast<std::size_t>(i) * m + j]; }
    bool ea(int i, int j) const { return adj_a[static_cast<std::size_t>(i) * n + j] != 0; }
    bool eb(int i, int j) const { return adj_b[static_cast<std::size_t>(i) * m + j] != 0; }

    /// Edge comparison cost for matched pairs (i,i') of a vs (j,j') of b.
    double edge_cost(int i, int ip, int j, int jp) const {
        const bool e = ea(i, ip);
        const bool f = eb(j, jp);
        if (e != f) return mp.ce;
        if (!e) return 0.0;
        if (!mp.endpoint_edge_metric) return 0.0;
        // Both present: optional refinement by endpoint displacement.
        return std::min(mp.ce, 0.5 * (dvat(i, j) + dvat(ip, jp)));
    }
};

Tables make_tables(const SpatialGraph& a, const SpatialGraph& b, const MetricParams& mp) {
    Tables t;
    t.n = a.n_vertices();
    t.m = b.n_vertices();
    t.mp = mp;
    t.dv.resize(static_cast<std::size_t>(t.n) * t.m);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.m; ++j)
            t.dv[static_cast<std::size_t>(i) * t.m + j] =
                dist_v(a.vertices[i], b.vertices[j], a.dim, mp.cv);
    t.adj_a = a.adjacency();
    t.adj_b = b.adjacency();
    t.edges_b = b.n_edges();
    return t;
}

/// Unmatched-vertex charge that does not depend on the injection:
/// variant 1 counts potential edge slots, variant 2 charges the flat cv+ce
/// per vertex (its degree part is injection-dependent and added separately).
double fixed_penalty(const Tables& t) {
    const int n = t.n, m = t.m;
    const int u = m - n;
    if (u == 0) return 0.0;
    if (m == 1) // no edge slots exist at all
        return t.mp.variant == 1 ? t.mp.cv : t.mp.cv + t.mp.ce;
    if (t.mp.variant == 1) {
        const double slots = static_cast<double>(n) * u + 0.5 * u * (u - 1.0);
        return u * t.mp.cv + t.mp.ce / (m - 1) * slots;
    }
    return u * (t.mp.cv + t.mp.ce);
}

/// Variant-2 injection-dependent part: edges of b joining a matched vertex
/// to an unmatched one, each charged ce/(m-1).
double cross_edge_penalty(const Tables& t, const std::vector<std::uint8_t>& in_image) {
    if (t.mp.variant != 2 || t.n == t.m || t.m < 2) return 0.0;
    long cross = 0;
    for (int j = 0; j < t.m; ++j)
        for (int jp = j + 1; jp < t.m; ++jp)
            if (t.eb(j, jp) && (in_image[j] != in_image[jp])) ++cross;
    return t.mp.ce / (t.m - 1) * static_cast<double>(cross);
}

/// Full objective of one injection pi : [n] -> [m] (before the 1/m factor).
double objective(const Tables& t, const std::vector<int>& pi) {
    const int n = t.n, m = t.m;
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += t.dvat(i, pi[i]);
    if (m >= 2) {
        double etotal = 0.0;
        for (int i = 0; i < n; ++i)
            for (int ip = i + 1; ip < n; ++ip)
                etotal += t.edge_cost(i, ip, pi[i], pi[ip]);
        total += etotal / (m - 1);
    }
    total += fixed_penalty(t);
    std::vector<std::uint8_t> in_image(m, 0);
    for (int i = 0; i < n; ++i) in_image[pi[i]] = 1;
    total += cross_edge_penalty(t, in_image);
    return total;
}

//----------------------------------------------------------------------------
// Exact optimisation by depth-first enumeration with pruning (max size <= 7).
//----------------------------------------------------------------------------

struct Dfs {
    const Tables& t;
    std::vector<int> pi;
    std::vector<std::uint8_t> used;
    double best = std::numeric_limits<double>::infinity();
    double base; // penalty parts that never decrease

    explicit Dfs(const Tables& tt) : t(tt), pi(tt.n, -1), used(tt.m, 0) {
        base = fixed_penalty(t);
    }

    void run(int i, double acc) {
        if (acc + base >= best) return; // remaining costs are all >= 0
        if (i == t.n) {
            double total = acc + base;
            std::vector<std::uint8_t> in_image(t.m, 0);
            for (int k = 0; k < t.n; ++k) in_image[pi[k]] = 1;
            total += cross_edge_penalty(t, in_image);
            best = std::min(best, total);
            return;
        }
        for (int j = 0; j < t.m; ++j) {
            if (used[j]) continue;
            double add = t.dvat(i, j);
            if (t.m >= 2)
                for (int ip = 0; ip < i; ++ip)
                    add += t.edge_cost(ip, i, pi[ip], j) / (t.m - 1);
            pi[i] = j;
            used[j] = 1;
            run(i + 1, acc + add);
            used[j] = 0;
            pi[i] = -1;
        }
    }
};

//----------------------------------------------------------------------------
// Local search for larger graphs: seed with the vertex-only assignment, then
// first-improvement sweeps over single reassignments and target swaps.
//----------------------------------------------------------------------------

std::vector<int> assignment_seed(const Tables& t) {
    const int n = t.n, m = t.m;
    // Square matrix: dummy rows make unmatched targets explicit; the dummy
    // cost is a constant, so it only matters that it is finite.
    std::vector<double> cost(static_cast<std::size_t>(m) * m, t.mp.cv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            cost[static_cast<std::size_t>(i) * m + j] = t.dvat(i, j);
    const std::vector<int> rows = solve_assignment(cost, m);
    return std::vector<int>(rows.begin(), rows.begin() + n);
}

double local_search(const Tables& t, std::vector<int>& pi) {
    const int n = t.n, m = t.m;
    double cur = objective(t, pi);
    std::vector<std::uint8_t> used(m, 0);
    for (int i = 0; i < n; ++i) used[pi[i]] = 1;

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        // Move a single vertex to an unused target.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                if (used[j]) continue;
                const int old = pi[i];
                pi[i] = j;
                const double cand = objective(t, pi);
                if (cand < cur - 1e-15) {
                    cur = cand;
                    used[old] = 0;
                    used[j] = 1;
                    improved = true;
                } else {
                    pi[i] = old;
                }
            }
        }
        // Swap the targets of two matched vertices.
        for (int i = 0; i < n; ++i) {
            for (int ip = i + 1; ip < n; ++ip) {
                std::swap(pi[i], pi[ip]);
                const double cand = objective(t, pi);
                if (cand < cur - 1e-15) {
                    cur = cand;
                    improved = true;
                } else {
                    std::swap(pi[i], pi[ip]);
                }
            }
        }
        if (!improved) break;
    }
    return cur;
}

/// Canonical orientation: smaller graph first; equal sizes break the tie by
/// vertex then edge content, so the summation order (and hence the exact
/// floating-point value) is the same for (a, b) and (b, a).
bool first_is_small(const SpatialGraph& a, const SpatialGraph& b) {
    if (a.n_vertices() != b.n_vertices()) return a.n_vertices() < b.n_vertices();
    if (a.vertices != b.vertices) return a.vertices < b.vertices;
    return a.edges_sorted() <= b.edges_sorted();
}

} // namespace

GospaResult gospa(const SpatialGraph& a, const SpatialGraph& b, const MetricParams& mp) {
    mp.validate();
    a.validate();
    b.validate();
    if (a.dim != b.dim)
        throw ValidationError("gospa: graphs must share the same dimension");

    const SpatialGraph& small = first_is_small(a, b) ? a : b;
    const SpatialGraph& big = first_is_small(a, b) ? b : a;
    const int n = small.n_vertices();
    const int m = big.n_vertices();

    if (m == 0) return {0.0, true};

    Tables t = make_tables(small, big, mp);

    if (n == 0) {
        std::vector<int> empty;
        return {objective(t, empty) / m, true};
    }

    if (m <= 7) {
        Dfs dfs(t);
        dfs.run(0, 0.0);
        return {dfs.best / m, true};
    }

    std::vector<int> pi = assignment_seed(t);
    const double val = local_search(t, pi);
    return {val / m, false};
}

double gospa_bruteforce(const SpatialGraph& a, const SpatialGraph& b, const MetricParams& mp) {
    mp.validate();
    a.validate();
    b.validate();
    if (a.dim != b.dim)
        throw ValidationError("gospa_bruteforce: graphs must share the same dimension");
    if (std::max(a.n_vertices(), b.n_vertices()) > 7)
        throw ValidationError("gospa_bruteforce: supports at most 7 vertices per graph");

    const SpatialGraph& small = first_is_small(a, b) ? a : b;
    const SpatialGraph& big = first_is_small(a, b) ? b : a;
    const int n = small.n_vertices();
    const int m = big.n_vertices();
    if (m == 0) return 0.0;

    Tables t = make_tables(small, big, mp);

    // Enumerate injections as the first n entries of every permutation of
    // [m]; duplicates across permutations only re-evaluate the same value.
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<int> pi(perm.begin(), perm.begin() + n);
        best = std::min(best, objective(t, pi));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / m;
}

} // namespace srg
