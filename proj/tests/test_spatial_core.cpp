//============================================================================
// Core utilities: random streams, windows, the truncated vertex metric,
// quadrature, grids, graphs and the small statistics helpers.
//============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/graph.hpp"
#include "srg/grid.hpp"
#include "srg/quadrature.hpp"
#include "srg/rng.hpp"
#include "srg/stats.hpp"

using namespace srg;

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);

    RngStream s1 = RngStream(42, 7).substream(3);
    RngStream s2 = RngStream(42, 7).substream(3);
    RngStream s3 = RngStream(42, 7).substream(4);
    CHECK(s1.next_u64() == s2.next_u64());
    CHECK(s1.next_u64() != s3.next_u64());
}

TEST_CASE("uniform variates live in [0,1) and have the right mean") {
    RngStream rng(1, 2);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
}

TEST_CASE("bernoulli honours degenerate probabilities") {
    RngStream rng(1, 3);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("exponential and poisson variates match their moments") {
    RngStream rng(11, 5);
    const int n = 200000;
    double esum = 0.0;
    for (int i = 0; i < n; ++i) esum += rng.exponential(2.0);
    // mean 1/2, sd 1/2 -> se ~ 0.0011
    CHECK(std::abs(esum / n - 0.5) < 0.005);

    for (double mean : {0.7, 3.0, 40.0, 200.0}) {
        double s = 0.0, ss = 0.0;
        const int m = 50000;
        for (int i = 0; i < m; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            s += k;
            ss += k * k;
        }
        const double mu = s / m;
        const double var = ss / m - mu * mu;
        const double se = std::sqrt(mean / m);
        CHECK(std::abs(mu - mean) < 5 * se);
        CHECK(std::abs(var - mean) < 0.05 * mean + 5 * se);
    }
    CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("uniform_index is in range and roughly uniform") {
    RngStream rng(9, 1);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const std::uint64_t k = rng.uniform_index(7);
        REQUIRE(k < 7);
        ++counts[static_cast<int>(k)];
    }
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("truncated vertex metric satisfies the metric axioms") {
    RngStream rng(5, 0);
    const double cv = 0.7;
    const int dim = 3;
    const Window w = Window::cube(dim, -1.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        const Vec x = w.sample(rng), y = w.sample(rng), z = w.sample(rng);
        const double dxy = dist_v(x, y, dim, cv);
        const double dyx = dist_v(y, x, dim, cv);
        const double dxz = dist_v(x, z, dim, cv);
        const double dzy = dist_v(z, y, dim, cv);
        CHECK(dxy >= 0.0);
        CHECK(dxy == dyx);          // symmetry is exact
        CHECK(dxy <= cv);           // capped
        CHECK(dist_v(x, x, dim, cv) == 0.0);
        CHECK(dxz <= dxy + dzy + 1e-12);  // triangle inequality
    }
    // below the cap the metric is plain Euclidean
    const Vec a = make_vec(0.1, 0.2, 0.3), b = make_vec(0.2, 0.2, 0.3);
    CHECK(dist_v(a, b, 3, 5.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(dist_v(a, b, 3, 0.0), ValidationError);
}

TEST_CASE("window geometry and validation") {
    const Window w = Window::cube(2, 0.0, 2.0);
    CHECK(w.volume() == doctest::Approx(4.0));
    CHECK(w.half_diagonal() == doctest::Approx(std::sqrt(2.0)));
    CHECK(w.contains(make_vec(1.0, 1.0)));
    CHECK_FALSE(w.contains(make_vec(2.5, 1.0)));
    RngStream rng(3, 3);
    for (int i = 0; i < 1000; ++i) CHECK(w.contains(w.sample(rng)));

    CHECK_THROWS_AS(Window(0, make_vec(0), make_vec(1)), ValidationError);
    CHECK_THROWS_AS(Window(2, make_vec(1, 1), make_vec(0, 2)), ValidationError);
}

TEST_CASE("tensor quadrature is exact for constants and linear factors") {
    const Window w = Window::cube(2, 0.0, 3.0);
    QuadratureSpec q;
    q.points_per_axis = 32;
    CHECK(integrate([](const Vec&) { return 2.5; }, w, q).value ==
          doctest::Approx(2.5 * 9.0).epsilon(1e-13));
    // midpoint rules integrate per-axis linear functions exactly
    CHECK(integrate([](const Vec& x) { return x[0] * x[1]; }, w, q).value ==
          doctest::Approx(4.5 * 4.5).epsilon(1e-12));
}

TEST_CASE("tensor quadrature converges on smooth integrands") {
    const Window w = Window::unit(2);
    const double exact = (std::exp(1.0) - 1.0) * (std::exp(1.0) - 1.0);
    QuadratureSpec q;
    q.points_per_axis = 64;
    const double v =
        integrate([](const Vec& x) { return std::exp(x[0] + x[1]); }, w, q).value;
    CHECK(std::abs(v - exact) < 1e-4);
}

TEST_CASE("monte carlo quadrature agrees with the analytic value within noise") {
    const Window w = Window::unit(2);
    QuadratureSpec q;
    q.mode = QuadratureSpec::Mode::monte_carlo;
    q.mc_points = 200000;
    const double exact = (std::exp(1.0) - 1.0) * (std::exp(1.0) - 1.0);
    const auto r = integrate([](const Vec& x) { return std::exp(x[0] + x[1]); }, w, q);
    CHECK(r.std_error > 0.0);
    CHECK(std::abs(r.value - exact) < 4 * r.std_error);
    // identical spec -> identical estimate
    const auto r2 = integrate([](const Vec& x) { return std::exp(x[0] + x[1]); }, w, q);
    CHECK(r.value == r2.value);
}

TEST_CASE("pair quadrature matches products of single integrals") {
    const Window w = Window::unit(1);
    QuadratureSpec q;
    q.points_per_axis = 64;
    // f(x,y) = x * y separates into (1/2)^2
    const double v =
        integrate_pair([](const Vec& x, const Vec& y) { return x[0] * y[0]; }, w, q).value;
    CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    const double one =
        integrate_pair([](const Vec&, const Vec&) { return 1.0; }, w, q).value;
    CHECK(one == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("quadrature rejects invalid specs and non-finite integrands") {
    const Window w = Window::unit(1);
    QuadratureSpec q;
    q.points_per_axis = -1;
    CHECK_THROWS_AS(integrate([](const Vec&) { return 1.0; }, w, q), ValidationError);
    QuadratureSpec q2;
    CHECK_THROWS_AS(
        integrate([](const Vec&) { return std::numeric_limits<double>::quiet_NaN(); }, w,
                  q2),
        NumericalError);
}

TEST_CASE("grid cells partition the window") {
    const Window w = Window(2, make_vec(0.0, -1.0), make_vec(2.0, 1.0));
    const DiscretisationGrid grid(w, 4);
    CHECK(grid.n_cells() == 16);
    CHECK(grid.cell_volume() * 16 == doctest::Approx(w.volume()));
    CHECK(grid.cell_radius() ==
          doctest::Approx(0.5 * std::sqrt(0.25 + 0.25)));
    CHECK(grid.cell_radius(0.1) == doctest::Approx(0.1));

    for (long i = 0; i < grid.n_cells(); ++i)
        CHECK(grid.cell_index(grid.centre(i)) == i);

    RngStream rng(2, 9);
    for (int i = 0; i < 2000; ++i) {
        const Vec x = w.sample(rng);
        const Vec s = grid.snap(x);
        CHECK(grid.snap(s) == s);  // snapping is idempotent
        for (int k = 0; k < w.dim; ++k)
            CHECK(std::abs(x[k] - s[k]) <= 0.5 * grid.cell_side(k) + 1e-12);
    }
    for (long i = 0; i < grid.n_cells(); ++i) {
        const Vec x = grid.sample_cell(i, rng);
        CHECK(grid.cell_index(x) == i);
    }
    CHECK(static_cast<long>(grid.centres().size()) == grid.n_cells());
    CHECK_THROWS_AS(DiscretisationGrid(w, 0), ValidationError);
}

TEST_CASE("spatial graph bookkeeping") {
    SpatialGraph g(2);
    const int a = g.add_vertex(make_vec(0.0, 0.0));
    const int b = g.add_vertex(make_vec(1.0, 0.0), {a});
    const int c = g.add_vertex(make_vec(0.0, 1.0), {a, b});
    CHECK(g.n_vertices() == 3);
    CHECK(g.n_edges() == 3);
    CHECK(g.has_edge(a, b));
    CHECK(g.has_edge(b, a));
    CHECK(g.degree(a) == 2);

    const auto es = g.edges_sorted();
    REQUIRE(es.size() == 3);
    CHECK(es[0] == std::pair<int, int>{0, 1});
    CHECK(es[2] == std::pair<int, int>{1, 2});

    // removing a vertex keeps the remaining edge structure intact
    g.remove_vertex(a);
    CHECK(g.n_vertices() == 2);
    CHECK(g.n_edges() == 1);  // only the b-c edge survives
    CHECK(g.has_edge(0, 1));
    (void)c;

    g.validate();
    SpatialGraph bad(2);
    bad.add_vertex(make_vec(0.0, 0.0));
    bad.edges.insert(edge_key(0, 5));
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("vertex removal relabels the swapped vertex consistently") {
    RngStream rng(17, 4);
    for (int rep = 0; rep < 200; ++rep) {
        SpatialGraph g(2);
        const int n = 2 + static_cast<int>(rng.uniform_index(8));
        for (int i = 0; i < n; ++i)
            g.add_vertex(make_vec(rng.uniform(), rng.uniform()));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(0.4)) g.add_edge(i, j);
        const int victim = static_cast<int>(rng.uniform_index(n));
        // record the expected neighbourhood structure by coordinates
        std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> expect;
        for (const auto& [i, j] : g.edges_sorted()) {
            if (i == victim || j == victim) continue;
            auto pi = std::make_pair(g.vertices[i][0], g.vertices[i][1]);
            auto pj = std::make_pair(g.vertices[j][0], g.vertices[j][1]);
            expect.insert({std::min(pi, pj), std::max(pi, pj)});
        }
        g.remove_vertex(victim);
        g.validate();
        std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> got;
        for (const auto& [i, j] : g.edges_sorted()) {
            auto pi = std::make_pair(g.vertices[i][0], g.vertices[i][1]);
            auto pj = std::make_pair(g.vertices[j][0], g.vertices[j][1]);
            got.insert({std::min(pi, pj), std::max(pi, pj)});
        }
        CHECK(got == expect);
    }
}

TEST_CASE("mean, KS and regression helpers") {
    CHECK_THROWS_AS(mean_and_se({1.0}), ValidationError);
    const auto ms = mean_and_se({1.0, 2.0, 3.0, 4.0});
    CHECK(ms.mean == doctest::Approx(2.5));
    CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

    CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_statistic({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
    // with ties the statistic compares post-tie counts, staying conservative
    CHECK(ks_statistic({1, 1, 2}, {1, 2, 2}) == doctest::Approx(1.0 / 3.0));

    CHECK(ks_p_value(0.0, 100, 100) == doctest::Approx(1.0));
    CHECK(ks_p_value(0.5, 100, 100) < 1e-10);
    // classic 5% constant
    CHECK(ks_critical_value(0.05, 100, 100) ==
          doctest::Approx(1.3581015157406195 * std::sqrt(0.02)).epsilon(1e-6));

    const auto fit = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
}

TEST_CASE("KS distinguishes different laws and accepts equal laws") {
    RngStream rng(23, 1);
    std::vector<double> a, b, c;
    for (int i = 0; i < 2000; ++i) {
        a.push_back(rng.uniform());
        b.push_back(rng.uniform());
        c.push_back(rng.uniform() * 1.3);
    }
    CHECK(ks_statistic(a, b) < ks_critical_value(0.05, a.size(), b.size()));
    CHECK(ks_statistic(a, c) > ks_critical_value(0.001, a.size(), c.size()));
}
