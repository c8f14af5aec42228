//============================================================================
// Random graphs on point patterns: edge models, conditionally independent
// Bernoulli edges, the combined vertex-and-edge sampler, and the graph
// version of the conditional-intensity integral identity.
//============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "srg/geometry.hpp"
#include "srg/graph.hpp"
#include "srg/random_graph.hpp"
#include "srg/rng.hpp"
#include "srg/stats.hpp"

using namespace srg;

namespace {

PointPattern make_pattern(const std::vector<std::pair<double, double>>& pts) {
    PointPattern pat(2);
    for (const auto& [x, y] : pts) pat.points.push_back(Vec{x, y, 0.0});
    return pat;
}

} // namespace

TEST_CASE("edge model factories validate their parameters") {
    CHECK_THROWS_AS(EdgeModel::constant(-0.1), ValidationError);
    CHECK_THROWS_AS(EdgeModel::constant(1.1), ValidationError);
    CHECK_THROWS_AS(EdgeModel::hard_threshold(-1.0, 2), ValidationError);
    CHECK_THROWS_AS(EdgeModel::gaussian(1.5, 0.2, 2), ValidationError);
    CHECK_THROWS_AS(EdgeModel::gaussian(-0.2, 0.2, 2), ValidationError);
    CHECK_THROWS_AS(EdgeModel::gaussian(0.5, 0.0, 2), ValidationError);
    CHECK_NOTHROW(EdgeModel::constant(0.0));
    CHECK_NOTHROW(EdgeModel::constant(1.0));
}

TEST_CASE("edge model evaluation rejects invalid probabilities") {
    EdgeModel em;
    em.kappa = [](const Vec&, const Vec&) { return 1.2; };
    const Vec a{0, 0, 0}, b{1, 0, 0};
    CHECK_THROWS_WITH_AS(em(a, b), doctest::Contains("invalid connection probability"),
                         ValidationError);
    em.kappa = [](const Vec&, const Vec&) { return -0.01; };
    CHECK_THROWS_AS(em(a, b), ValidationError);
    em.kappa = [](const Vec&, const Vec&) { return std::nan(""); };
    CHECK_THROWS_AS(em(a, b), ValidationError);
}

TEST_CASE("edge model validation probes symmetry on the window") {
    const Window w = Window::unit(2);
    CHECK_NOTHROW(EdgeModel::gaussian(0.8, 0.3, 2).validate(w, RngStream(21, 0)));

    EdgeModel asym;
    asym.kappa = [](const Vec& x, const Vec& y) { return x[0] < y[0] ? 0.2 : 0.8; };
    CHECK_THROWS_AS(asym.validate(w, RngStream(21, 1)), ValidationError);

    EdgeModel unset;
    CHECK_THROWS_AS(unset.validate(w, RngStream(21, 2)), ValidationError);
}

TEST_CASE("hard-threshold edges are exactly the close pairs") {
    const double r = 0.5;
    const EdgeModel em = EdgeModel::hard_threshold(r, 2);
    // Distances: (0,1): 0.5 (boundary, connected), (0,2): 0.51, (1,2): ~0.708.
    const PointPattern pat = make_pattern({{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.51}});
    RngStream rng(22, 0);
    const SpatialGraph g = sample_edges(pat, em, rng);
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK_FALSE(g.has_edge(1, 2));
    CHECK(g.n_edges() == 1);

    // Degenerate probabilities are deterministic: repeat draws never differ.
    for (int rep = 0; rep < 50; ++rep) {
        RngStream rr(22, 100 + rep);
        const SpatialGraph h = sample_edges(pat, em, rr);
        CHECK(h.edges_sorted() == g.edges_sorted());
    }
}

TEST_CASE("constant edge probability matches the Bernoulli frequency") {
    const double p = 0.37;
    const EdgeModel em = EdgeModel::constant(p);
    const PointPattern pat = make_pattern({{0.1, 0.2}, {0.8, 0.9}});
    RngStream rng(23, 0);
    const int reps = 20000;
    int hits = 0;
    for (int s = 0; s < reps; ++s)
        if (sample_edges(pat, em, rng).n_edges() == 1) ++hits;
    const double freq = static_cast<double>(hits) / reps;
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::abs(freq - p) < 5.0 * se);
}

TEST_CASE("gaussian edge profile matches its closed form at a fixed distance") {
    const double p0 = 0.9, range = 0.4, d = 0.3;
    const EdgeModel em = EdgeModel::gaussian(p0, range, 2);
    const double p = p0 * std::exp(-d * d / (range * range));
    const PointPattern pat = make_pattern({{0.0, 0.0}, {d, 0.0}});
    RngStream rng(24, 0);
    const int reps = 20000;
    int hits = 0;
    for (int s = 0; s < reps; ++s)
        if (sample_edges(pat, em, rng).n_edges() == 1) ++hits;
    const double freq = static_cast<double>(hits) / reps;
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::abs(freq - p) < 5.0 * se);
    // The profile peaks at p0 for coincident points and decays with distance.
    const Vec o{0, 0, 0};
    CHECK(em(o, o) == doctest::Approx(p0));
    CHECK(em(o, Vec{1.0, 0, 0}) < em(o, Vec{0.1, 0, 0}));
}

TEST_CASE("edge indicators over pairs are independent") {
    // Three vertices, kappa = 1/2: independence makes all 8 edge subsets
    // equally likely, so the subset frequencies pin the joint law.
    const EdgeModel em = EdgeModel::constant(0.5);
    const PointPattern pat = make_pattern({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    RngStream rng(25, 0);
    const int reps = 16000;
    std::array<int, 8> cell{};
    for (int s = 0; s < reps; ++s) {
        const SpatialGraph g = sample_edges(pat, em, rng);
        const int code = (g.has_edge(0, 1) ? 1 : 0) | (g.has_edge(0, 2) ? 2 : 0) |
                         (g.has_edge(1, 2) ? 4 : 0);
        ++cell[code];
    }
    const double se = std::sqrt(0.125 * 0.875 / reps);
    for (int c = 0; c < 8; ++c) {
        const double freq = static_cast<double>(cell[c]) / reps;
        CHECK(std::abs(freq - 0.125) < 5.0 * se);
    }
}

TEST_CASE("edges to a new vertex join the right neighbours") {
    const EdgeModel em = EdgeModel::hard_threshold(0.3, 2);
    SpatialGraph g(2);
    g.vertices = {Vec{0.0, 0.0, 0.0}, Vec{0.2, 0.0, 0.0}, Vec{1.0, 1.0, 0.0}};
    RngStream rng(26, 0);
    const Vec x{0.1, 0.1, 0.0};  // within 0.3 of vertices 0 and 1 only
    const std::vector<int> joined = sample_edges_to_new_vertex(g, x, em, rng);
    CHECK(joined == std::vector<int>{0, 1});
    CHECK(g.n_edges() == 0);  // the graph itself is untouched

    // Frequency check against a constant-probability model.
    const EdgeModel ec = EdgeModel::constant(0.4);
    SpatialGraph big(2);
    RngStream place(26, 1);
    const Window w = Window::unit(2);
    for (int i = 0; i < 50; ++i) big.vertices.push_back(w.sample(place));
    const int reps = 5000;
    std::vector<double> joined_counts;
    joined_counts.reserve(reps);
    for (int s = 0; s < reps; ++s)
        joined_counts.push_back(
            static_cast<double>(sample_edges_to_new_vertex(big, x, ec, rng).size()));
    const auto [mean, se, n] = mean_and_se(joined_counts);
    (void)n;
    CHECK(std::abs(mean - 50.0 * 0.4) < 5.0 * se);
}

TEST_CASE("empty and singleton patterns give edgeless graphs") {
    const EdgeModel em = EdgeModel::constant(1.0);
    RngStream rng(27, 0);
    const SpatialGraph g0 = sample_edges(PointPattern(2), em, rng);
    CHECK(g0.n_vertices() == 0);
    CHECK(g0.n_edges() == 0);
    const SpatialGraph g1 = sample_edges(make_pattern({{0.5, 0.5}}), em, rng);
    CHECK(g1.n_vertices() == 1);
    CHECK(g1.n_edges() == 0);
}

TEST_CASE("combined sampler is deterministic given the stream") {
    const GibbsModel m = GibbsModel::hard_core(25.0, 0.08, 2);
    const EdgeModel em = EdgeModel::gaussian(0.8, 0.3, 2);
    const Window w = Window::unit(2);
    RngStream a(28, 3), b(28, 3), c(28, 4);
    const SpatialGraph ga = sample_rgg(m, em, w, a);
    const SpatialGraph gb = sample_rgg(m, em, w, b);
    const SpatialGraph gc = sample_rgg(m, em, w, c);
    CHECK(ga.vertices == gb.vertices);
    CHECK(ga.edges_sorted() == gb.edges_sorted());
    const bool differs =
        ga.vertices != gc.vertices || ga.edges_sorted() != gc.edges_sorted();
    CHECK(differs);

    // The Poisson path works too and produces a plausible mean degree.
    const GibbsModel mp = GibbsModel::poisson_const(20.0);
    RngStream d(28, 5), e(28, 5);
    const SpatialGraph gd = sample_rgg(mp, em, w, d);
    const SpatialGraph ge = sample_rgg(mp, em, w, e);
    CHECK(gd.vertices == ge.vertices);
    CHECK(gd.edges_sorted() == ge.edges_sorted());
}

TEST_CASE("graph conditional-intensity identity holds for the Poisson model") {
    const GibbsModel m = GibbsModel::poisson_const(4.0);
    const EdgeModel em = EdgeModel::constant(0.5);
    const Window w = Window::unit(2);

    const GraphTestFunction h_deg = [](const SpatialGraph&, const Vec&,
                                       const std::vector<int>& joined) {
        return 1.0 + static_cast<double>(joined.size());
    };
    QuadratureSpec quad;
    quad.points_per_axis = 16;
    const GnzResult r1 = graph_gnz_residual(m, em, w, h_deg, 2000, RngStream(29, 0), quad);
    REQUIRE(r1.std_error > 0.0);
    CHECK(std::abs(r1.diff_mean) <= 4.0 * r1.std_error);
    // E sum_v (1 + deg v) = E N + 2 E #edges = 4 + 2 * (16/2) * 0.5 = 12.
    CHECK(std::abs(r1.lhs_mean - 12.0) < 0.8);

    // A functional that also reads the remaining graph's edges.
    const GraphTestFunction h_mix = [](const SpatialGraph& rest, const Vec& x,
                                       const std::vector<int>& joined) {
        return std::exp(-x[0]) * (1.0 + static_cast<double>(joined.size())) +
               0.1 * static_cast<double>(rest.n_edges());
    };
    const GnzResult r2 = graph_gnz_residual(m, em, w, h_mix, 2000, RngStream(29, 1), quad);
    CHECK(std::abs(r2.diff_mean) <= 4.0 * r2.std_error);
}

TEST_CASE("graph conditional-intensity identity holds for hard core with threshold edges") {
    const GibbsModel m = GibbsModel::hard_core(30.0, 0.07, 2);
    const EdgeModel em = EdgeModel::hard_threshold(0.2, 2);
    const Window w = Window::unit(2);

    const GraphTestFunction h = [](const SpatialGraph&, const Vec& x,
                                   const std::vector<int>& joined) {
        return (1.0 + static_cast<double>(joined.size())) * (1.0 + x[1]);
    };
    QuadratureSpec mc;
    mc.mode = QuadratureSpec::Mode::monte_carlo;
    mc.mc_points = 400;
    mc.mc_seed = 55;
    const GnzResult r = graph_gnz_residual(m, em, w, h, 1200, RngStream(30, 0), mc);
    REQUIRE(r.std_error > 0.0);
    CHECK(std::abs(r.diff_mean) <= 4.0 * r.std_error);

    CHECK_THROWS_AS(graph_gnz_residual(m, em, w, h, 1, RngStream(30, 1)), ValidationError);
}
