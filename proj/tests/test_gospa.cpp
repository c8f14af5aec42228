//============================================================================
// Graph metric tests.  An independent reference implementation (subset
// enumeration + permutations, written from the definition with none of the
// library's pruning or table machinery) pins down the optimisation; the
// remaining cases exercise the metric axioms, caps, penalties and the
// local-search path for large graphs.
//============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/gospa.hpp"
#include "srg/graph.hpp"
#include "srg/rng.hpp"

using namespace srg;

namespace {

//----------------------------------------------------------------------------
// Reference metric, straight from the definition.
//----------------------------------------------------------------------------

double ref_dv(const Vec& x, const Vec& y, int dim, double cv) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return std::min(std::sqrt(s), cv);
}

double ref_injection_value(const SpatialGraph& a, const SpatialGraph& b,
                           const std::vector<int>& pi, const MetricParams& mp) {
    const int n = a.n_vertices();
    const int m = b.n_vertices();
    double val = 0.0;
    for (int i = 0; i < n; ++i)
        val += ref_dv(a.vertices[i], b.vertices[pi[i]], a.dim, mp.cv);
    if (m >= 2) {
        double e = 0.0;
        for (int i = 0; i < n; ++i)
            for (int ip = i + 1; ip < n; ++ip) {
                const bool ea = a.has_edge(i, ip);
                const bool eb = b.has_edge(pi[i], pi[ip]);
                if (ea != eb)
                    e += mp.ce;
                else if (ea && mp.endpoint_edge_metric)
                    e += std::min(mp.ce,
                                  0.5 * (ref_dv(a.vertices[i], b.vertices[pi[i]], a.dim,
                                                mp.cv) +
                                         ref_dv(a.vertices[ip], b.vertices[pi[ip]], a.dim,
                                                mp.cv)));
            }
        val += e / (m - 1);
    }
    const int u = m - n;
    if (u > 0) {
        if (m == 1) {
            val += mp.variant == 1 ? mp.cv : mp.cv + mp.ce;
        } else if (mp.variant == 1) {
            val += u * mp.cv +
                   mp.ce / (m - 1) * (static_cast<double>(n) * u + 0.5 * u * (u - 1.0));
        } else {
            val += u * (mp.cv + mp.ce);
            std::vector<bool> matched(m, false);
            for (int i = 0; i < n; ++i) matched[pi[i]] = true;
            int cross = 0;
            for (int j = 0; j < m; ++j)
                for (int jp = j + 1; jp < m; ++jp)
                    if (b.has_edge(j, jp) && matched[j] != matched[jp]) ++cross;
            val += mp.ce / (m - 1) * cross;
        }
    }
    return val;
}

void ref_enumerate(int m, int n, int next, std::vector<int>& subset,
                   const SpatialGraph& a, const SpatialGraph& b, const MetricParams& mp,
                   double& best) {
    if (static_cast<int>(subset.size()) == n) {
        std::vector<int> pi = subset;
        std::sort(pi.begin(), pi.end());
        do {
            best = std::min(best, ref_injection_value(a, b, pi, mp));
        } while (std::next_permutation(pi.begin(), pi.end()));
        return;
    }
    for (int j = next; j < m; ++j) {
        subset.push_back(j);
        ref_enumerate(m, n, j + 1, subset, a, b, mp, best);
        subset.pop_back();
    }
}

double ref_gospa(const SpatialGraph& a_in, const SpatialGraph& b_in,
                 const MetricParams& mp) {
    const SpatialGraph& a = a_in.n_vertices() <= b_in.n_vertices() ? a_in : b_in;
    const SpatialGraph& b = a_in.n_vertices() <= b_in.n_vertices() ? b_in : a_in;
    const int n = a.n_vertices();
    const int m = b.n_vertices();
    if (m == 0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> subset;
    ref_enumerate(m, n, 0, subset, a, b, mp, best);
    return best / m;
}

SpatialGraph random_graph(int n, double p, RngStream& rng, int dim = 2) {
    SpatialGraph g(dim);
    for (int i = 0; i < n; ++i)
        g.add_vertex(make_vec(rng.uniform(), dim >= 2 ? rng.uniform() : 0.0,
                              dim >= 3 ? rng.uniform() : 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) g.add_edge(i, j);
    return g;
}

MetricParams pick_params(int which) {
    MetricParams mp;
    switch (which % 4) {
        case 0: mp = {1.0, 1.0, 1, false}; break;
        case 1: mp = {0.7, 1.3, 2, false}; break;
        case 2: mp = {2.0, 0.5, 1, true}; break;
        default: mp = {0.4, 0.9, 2, true}; break;
    }
    return mp;
}

} // namespace

TEST_CASE("optimiser agrees with the reference enumeration") {
    RngStream rng(101, 0);
    for (int rep = 0; rep < 1500; ++rep) {
        const MetricParams mp = pick_params(rep);
        const int na = static_cast<int>(rng.uniform_index(8));
        const int nb = static_cast<int>(rng.uniform_index(8));
        const SpatialGraph a = random_graph(na, 0.5, rng);
        const SpatialGraph b = random_graph(nb, 0.5, rng);
        const double ref = ref_gospa(a, b, mp);
        const GospaResult got = gospa(a, b, mp);
        REQUIRE(got.exact);
        REQUIRE(std::abs(got.value - ref) <= 1e-12);
        REQUIRE(std::abs(gospa_bruteforce(a, b, mp) - ref) <= 1e-12);
    }
}

TEST_CASE("distance is symmetric and zero exactly on identical graphs") {
    RngStream rng(102, 0);
    for (int rep = 0; rep < 400; ++rep) {
        const MetricParams mp = pick_params(rep);
        const SpatialGraph a = random_graph(static_cast<int>(rng.uniform_index(7)), 0.5, rng);
        const SpatialGraph b = random_graph(static_cast<int>(rng.uniform_index(7)), 0.5, rng);
        CHECK(gospa(a, b, mp).value == gospa(b, a, mp).value);  // exact
        CHECK(gospa(a, a, mp).value == 0.0);
    }
    // a strictly different graph is at positive distance
    MetricParams mp;
    SpatialGraph a(2), b(2);
    a.add_vertex(make_vec(0.2, 0.2));
    b.add_vertex(make_vec(0.2, 0.2));
    b.add_vertex(make_vec(0.8, 0.8));
    CHECK(gospa(a, b, mp).value > 0.0);
}

TEST_CASE("triangle inequality holds on random triples") {
    RngStream rng(103, 0);
    for (int rep = 0; rep < 700; ++rep) {
        const MetricParams mp = pick_params(rep);
        const SpatialGraph a = random_graph(static_cast<int>(rng.uniform_index(7)), 0.5, rng);
        const SpatialGraph b = random_graph(static_cast<int>(rng.uniform_index(7)), 0.5, rng);
        const SpatialGraph c = random_graph(static_cast<int>(rng.uniform_index(7)), 0.5, rng);
        const double ab = gospa(a, b, mp).value;
        const double bc = gospa(b, c, mp).value;
        const double ac = gospa(a, c, mp).value;
        REQUIRE(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("values never exceed the variant cap") {
    RngStream rng(104, 0);
    for (int rep = 0; rep < 600; ++rep) {
        const MetricParams mp = pick_params(rep);
        // spread far apart so distances saturate
        SpatialGraph a = random_graph(static_cast<int>(rng.uniform_index(8)), 0.6, rng);
        SpatialGraph b = random_graph(static_cast<int>(rng.uniform_index(8)), 0.6, rng);
        for (auto& v : b.vertices) { v[0] += 50.0; v[1] += 50.0; }
        REQUIRE(gospa(a, b, mp).value <= mp.cap() + 1e-12);
    }
}

TEST_CASE("small graphs have closed-form values") {
    MetricParams mp;  // cv = ce = 1, variant 1
    SpatialGraph e(2);
    CHECK(gospa(e, e, mp).value == 0.0);

    // single vertices: plain truncated distance
    SpatialGraph x(2), y(2);
    x.add_vertex(make_vec(0.0, 0.0));
    y.add_vertex(make_vec(0.3, 0.0));
    CHECK(gospa(x, y, mp).value == doctest::Approx(0.3).epsilon(1e-12));
    y.vertices[0][0] = 9.0;  // beyond the cap
    CHECK(gospa(x, y, mp).value == doctest::Approx(1.0).epsilon(1e-12));

    // empty vs one vertex: variant-specific penalty
    MetricParams v1{0.6, 0.8, 1, false}, v2{0.6, 0.8, 2, false};
    CHECK(gospa(e, x, v1).value == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(gospa(e, x, v2).value == doctest::Approx(1.4).epsilon(1e-12));

    // same two vertices, edge presence differs: ce/(m-1)/m = ce/2
    SpatialGraph g1(2), g2(2);
    g1.add_vertex(make_vec(0.1, 0.1));
    g1.add_vertex(make_vec(0.9, 0.9));
    g2 = g1;
    g2.add_edge(0, 1);
    CHECK(gospa(g1, g2, mp).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("one extra vertex is charged the documented penalty") {
    MetricParams v1{1.0, 1.0, 1, false};
    MetricParams v2{1.0, 1.0, 2, false};
    RngStream rng(105, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + static_cast<int>(rng.uniform_index(6));
        SpatialGraph a = random_graph(n, 0.5, rng);
        SpatialGraph b = a;
        const int extra = b.add_vertex(make_vec(0.5, 0.5));
        const int m = n + 1;

        // unconnected extra vertex: matching a into b \ {extra} is optimal
        // and costs only the fixed penalty
        const double val1 = gospa(a, b, v1).value;
        CHECK(val1 == doctest::Approx((v1.cv + v1.ce) / m).epsilon(1e-12));
        const double val2 = gospa(a, b, v2).value;
        CHECK(val2 == doctest::Approx((v2.cv + v2.ce) / m).epsilon(1e-12));

        // variant 2 additionally charges each edge at the extra vertex
        int deg = 0;
        for (int i = 0; i < n; ++i)
            if (rng.bernoulli(0.5)) {
                b.add_edge(i, extra);
                ++deg;
            }
        const double val2b = gospa(a, b, v2).value;
        CHECK(val2b ==
              doctest::Approx((v2.cv + v2.ce + deg * v2.ce / (m - 1)) / m).epsilon(1e-12));
    }
}

TEST_CASE("matching ignores vertex labelling") {
    RngStream rng(106, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const MetricParams mp = pick_params(rep);
        const SpatialGraph a = random_graph(5, 0.5, rng);
        const SpatialGraph b = random_graph(6, 0.5, rng);
        // rebuild b with its vertices in a shuffled order
        std::vector<int> order(b.n_vertices());
        std::iota(order.begin(), order.end(), 0);
        for (int i = b.n_vertices() - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_index(i + 1)]);
        std::vector<int> inv(order.size());
        for (int i = 0; i < b.n_vertices(); ++i) inv[order[i]] = i;
        SpatialGraph c(2);
        for (int i = 0; i < b.n_vertices(); ++i) c.add_vertex(b.vertices[order[i]]);
        for (const auto& [i, j] : b.edges_sorted()) c.add_edge(inv[i], inv[j]);
        CHECK(gospa(a, b, mp).value == doctest::Approx(gospa(a, c, mp).value).epsilon(1e-13));
    }
}

TEST_CASE("endpoint edge refinement only relaxes matched present edges") {
    MetricParams plain{1.0, 1.0, 1, false};
    MetricParams refined{1.0, 1.0, 1, true};
    SpatialGraph a(2), b(2);
    a.add_vertex(make_vec(0.0, 0.0));
    a.add_vertex(make_vec(1.0, 0.0));
    a.add_edge(0, 1);
    b.add_vertex(make_vec(0.1, 0.0));
    b.add_vertex(make_vec(0.9, 0.0));
    b.add_edge(0, 1);
    // vertex part 0.2; plain edge part 0; refined edge part adds
    // min(ce, (0.1+0.1)/2)/(m-1) = 0.1
    CHECK(gospa(a, b, plain).value == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(gospa(a, b, refined).value == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("large graphs fall back to a flagged upper bound") {
    RngStream rng(107, 0);
    const MetricParams mp{1.0, 1.0, 1, false};
    const SpatialGraph a = random_graph(12, 0.3, rng);
    const SpatialGraph b = random_graph(14, 0.3, rng);
    const GospaResult r = gospa(a, b, mp);
    CHECK_FALSE(r.exact);
    CHECK(r.value > 0.0);
    CHECK(r.value <= mp.cap() + 1e-12);
    CHECK(r.value == gospa(b, a, mp).value);
    CHECK(gospa(a, a, mp).value == 0.0);  // still exact zero on equal inputs

    // the local search can never beat the true optimum: compare on graphs
    // where a subset embedding makes the optimum known (b = a plus far mass)
    SpatialGraph big = a;
    for (int i = 0; i < 3; ++i) big.add_vertex(make_vec(100.0 + i, 100.0));
    const double exact_penalty =
        (3 * mp.cv + mp.ce / (big.n_vertices() - 1) *
                         (a.n_vertices() * 3.0 + 3.0)) /
        big.n_vertices();
    const double upper = gospa(a, big, mp).value;
    CHECK(upper >= exact_penalty - 1e-12);
}

TEST_CASE("invalid inputs are rejected") {
    SpatialGraph a(2), b(3);
    MetricParams mp;
    CHECK_THROWS_AS(gospa(a, b, mp), ValidationError);
    MetricParams bad;
    bad.variant = 3;
    CHECK_THROWS_AS(gospa(a, a, bad), ValidationError);
    SpatialGraph big(2);
    for (int i = 0; i < 9; ++i) big.add_vertex(make_vec(i * 0.1, 0.0));
    CHECK_THROWS_AS(gospa_bruteforce(big, big, mp), ValidationError);
}
