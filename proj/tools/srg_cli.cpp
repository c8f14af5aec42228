//============================================================================
// srg_cli — command-line front end for the spatial random graph toolkit.
//
// Subcommands
//   sample        draw point patterns / random graphs from a configured model
//   gbdp          run a birth-death graph trajectory
//   couple        run two coupled birth-death chains and report coupling
//   gospa         graph distance between two graph JSON files
//   wasserstein   empirical transport distance between two graph samples
//   bound         evaluate closed-form bounds (stein-factors, bstar, glauber)
//   experiment    full verification experiments (boolean, soft-rgg,
//                 discretisation, coupling), writing CSV tables
//
// Exit codes: 0 success, 2 invalid input/config, 3 numerical failure.
// All outputs embed the configuration hash and seed, and identical
// (config, seed) runs produce byte-identical files.
//============================================================================

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "srg/config.hpp"
#include "srg/experiments.hpp"
#include "srg/gbdp.hpp"
#include "srg/gospa.hpp"
#include "srg/graph.hpp"
#include "srg/grid.hpp"
#include "srg/point_process.hpp"
#include "srg/random_graph.hpp"
#include "srg/rng.hpp"
#include "srg/serialize.hpp"
#include "srg/stein_bounds.hpp"
#include "srg/transport.hpp"

namespace {

using namespace srg;

//--- Config block builders --------------------------------------------------//

const std::vector<std::string> kWindowKeys = {"window.dim", "window.side", "window.lower",
                                              "window.upper"};
const std::vector<std::string> kVertexKeys = {"vertex.kind", "vertex.beta", "vertex.r",
                                              "vertex.delta", "vertex.strength",
                                              "vertex.range"};
const std::vector<std::string> kEdgeKeys = {"edge.kind", "edge.p", "edge.r", "edge.p0",
                                            "edge.range"};
const std::vector<std::string> kMetricKeys = {"metric.cv", "metric.ce", "metric.variant"};
const std::vector<std::string> kQuadKeys = {"quadrature.mode", "quadrature.points_per_axis",
                                            "quadrature.mc_points"};

std::vector<std::string> concat_keys(std::initializer_list<std::vector<std::string>> groups,
                                     std::initializer_list<const char*> extra = {}) {
    std::vector<std::string> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    for (const char* k : extra) out.emplace_back(k);
    return out;
}

Window window_from_config(const ConfigMap& cfg) {
    const int dim = static_cast<int>(cfg.get_long("window.dim", 2));
    if (cfg.has("window.lower") || cfg.has("window.upper")) {
        const auto lo = cfg.get_double_list("window.lower", {});
        const auto hi = cfg.get_double_list("window.upper", {});
        if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
            throw ValidationError("config: window.lower/upper must list window.dim entries");
        Vec l{0, 0, 0}, u{0, 0, 0};
        for (int k = 0; k < dim; ++k) { l[k] = lo[k]; u[k] = hi[k]; }
        return Window(dim, l, u);
    }
    const double side = cfg.get_double("window.side", 1.0);
    return Window::cube(dim, 0.0, side);
}

GibbsModel vertex_model_from_config(const ConfigMap& cfg, int dim) {
    const std::string kind = cfg.get_string("vertex.kind", "poisson");
    const double beta = cfg.get_double("vertex.beta", 1.0);
    if (kind == "poisson") return GibbsModel::poisson_const(beta);
    if (kind == "hard_core")
        return GibbsModel::hard_core(beta, cfg.get_double("vertex.r", 0.1), dim);
    if (kind == "soft_core")
        return GibbsModel::soft_core(beta, cfg.get_double("vertex.r", 0.1),
                                     cfg.get_double("vertex.delta", 0.5), dim);
    if (kind == "smooth_inhibition")
        return GibbsModel::smooth_inhibition(beta, cfg.get_double("vertex.strength", 0.5),
                                             cfg.get_double("vertex.range", 0.1), dim);
    throw ValidationError("config: unknown vertex.kind '" + kind +
                          "' (poisson, hard_core, soft_core, smooth_inhibition)");
}

EdgeModel edge_model_from_config(const ConfigMap& cfg, int dim) {
    const std::string kind = cfg.get_string("edge.kind", "constant");
    if (kind == "constant") {
        const double p = cfg.get_double("edge.p", 0.5);
        if (!(p >= 0.0) || !(p <= 1.0))
            throw ValidationError("config: edge.p: invalid connection probability "
                                  "(must be in [0, 1])");
        return EdgeModel::constant(p);
    }
    if (kind == "hard_threshold")
        return EdgeModel::hard_threshold(cfg.get_double("edge.r", 0.2), dim);
    if (kind == "gaussian") {
        const double p0 = cfg.get_double("edge.p0", 0.5);
        if (!(p0 >= 0.0) || !(p0 <= 1.0))
            throw ValidationError("config: edge.p0: invalid connection probability "
                                  "(must be in [0, 1])");
        return EdgeModel::gaussian(p0, cfg.get_double("edge.range", 0.2), dim);
    }
    throw ValidationError("config: unknown edge.kind '" + kind +
                          "' (constant, hard_threshold, gaussian)");
}

MetricParams metric_from_config(const ConfigMap& cfg) {
    MetricParams mp;
    mp.cv = cfg.get_double("metric.cv", 1.0);
    mp.ce = cfg.get_double("metric.ce", 1.0);
    mp.variant = static_cast<int>(cfg.get_long("metric.variant", 1));
    mp.validate();
    return mp;
}

QuadratureSpec quadrature_from_config(const ConfigMap& cfg) {
    QuadratureSpec q;
    const std::string mode = cfg.get_string("quadrature.mode", "tensor");
    if (mode == "tensor")
        q.mode = QuadratureSpec::Mode::tensor;
    else if (mode == "monte_carlo")
        q.mode = QuadratureSpec::Mode::monte_carlo;
    else
        throw ValidationError("config: unknown quadrature.mode '" + mode + "'");
    q.points_per_axis = static_cast<int>(cfg.get_long("quadrature.points_per_axis", 0));
    q.mc_points = cfg.get_long("quadrature.mc_points", q.mc_points);
    return q;
}

SpatialGraph initial_graph_from_config(const ConfigMap& cfg, const std::string& key,
                                       const GibbsModel& m, const EdgeModel& em,
                                       const Window& w, RngStream& rng) {
    const std::string v = cfg.get_string(key, "empty");
    if (v == "empty") {
        SpatialGraph g;
        g.dim = w.dim;
        return g;
    }
    if (v == "sample") return sample_rgg(m, em, w, rng);
    return graph_from_json(read_text_file(v));
}

std::string provenance_header(const ConfigMap& cfg, std::uint64_t seed) {
    return "# config_hash=" + cfg.hash() + "\n# seed=" + std::to_string(seed) + "\n";
}

void emit(const std::string& output_path, const std::string& content) {
    if (output_path.empty())
        std::cout << content;
    else
        write_text_file(output_path, content);
}

std::string bool_cell(bool b) { return b ? "1" : "0"; }

//--- sample -----------------------------------------------------------------//

int cmd_sample(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
               const std::string& output_override) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys({kWindowKeys, kVertexKeys, kEdgeKeys, kQuadKeys},
                                  {"run.seed", "run.horizon", "run.output", "run.edges"}));
    const Window w = window_from_config(cfg);
    const GibbsModel m = vertex_model_from_config(cfg, w.dim);
    const QuadratureSpec quad = quadrature_from_config(cfg);
    const std::uint64_t seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);
    const double horizon = cfg.get_double("run.horizon", 0.0);
    const bool with_edges = cfg.get_bool("run.edges", cfg.has("edge.kind"));
    std::string output = output_override.empty() ? cfg.get_string("run.output", "")
                                                 : output_override;

    RngStream rng(seed, 0x5A3F1E);
    m.validate(w, rng.substream(0xFACE));
    if (with_edges) {
        const EdgeModel em = edge_model_from_config(cfg, w.dim);
        em.validate(w, rng.substream(0xFACF));
        PointPattern pat = m.kind == GibbsModel::Kind::poisson
                               ? sample_poisson(m, w, rng, quad)
                               : sample_gibbs(m, w, rng, horizon, quad);
        const SpatialGraph g = sample_edges(pat, em, rng);
        emit(output, graph_to_json(g, seed, cfg.hash()));
        std::cerr << "sampled graph: " << g.n_vertices() << " vertices, " << g.n_edges()
                  << " edges\n";
    } else {
        PointPattern pat = m.kind == GibbsModel::Kind::poisson
                               ? sample_poisson(m, w, rng, quad)
                               : sample_gibbs(m, w, rng, horizon, quad);
        emit(output, provenance_header(cfg, seed) + pattern_to_csv(pat));
        std::cerr << "sampled pattern: " << pat.size() << " points\n";
    }
    return 0;
}

//--- gbdp -------------------------------------------------------------------//

int cmd_gbdp(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
             const std::string& output_override) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys({kWindowKeys, kVertexKeys, kEdgeKeys, kQuadKeys},
                                  {"run.seed", "run.horizon", "run.output", "run.init"}));
    const Window w = window_from_config(cfg);
    const GibbsModel m = vertex_model_from_config(cfg, w.dim);
    const EdgeModel em = edge_model_from_config(cfg, w.dim);
    const QuadratureSpec quad = quadrature_from_config(cfg);
    const std::uint64_t seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);
    const std::string output = output_override.empty() ? cfg.get_string("run.output", "")
                                                       : output_override;

    RngStream rng(seed, 0x6BD9);
    const SpatialGraph init =
        initial_graph_from_config(cfg, "run.init", m, em, w, rng);
    GbdpOptions opts;
    opts.horizon = cfg.get_double("run.horizon", 20.0);
    const Trajectory traj = run_gbdp(m, em, w, init, rng, opts, quad);
    emit(output, provenance_header(cfg, seed) + trajectory_to_csv(traj));
    std::cerr << "trajectory: " << traj.n_births << " births, " << traj.n_deaths
              << " deaths, " << traj.n_phantoms << " phantom events; final "
              << traj.final_graph.n_vertices() << " vertices, "
              << traj.final_graph.n_edges() << " edges\n";
    return 0;
}

//--- couple -----------------------------------------------------------------//

int cmd_couple(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
               const std::string& output_override) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys(
        {kWindowKeys, kVertexKeys, kEdgeKeys, kQuadKeys},
        {"run.seed", "run.horizon", "run.output", "run.init_a", "run.init_b"}));
    const Window w = window_from_config(cfg);
    const GibbsModel m = vertex_model_from_config(cfg, w.dim);
    const EdgeModel em = edge_model_from_config(cfg, w.dim);
    const QuadratureSpec quad = quadrature_from_config(cfg);
    const std::uint64_t seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);
    const std::string output = output_override.empty() ? cfg.get_string("run.output", "")
                                                       : output_override;

    RngStream rng(seed, 0xC09);
    const SpatialGraph init_a =
        initial_graph_from_config(cfg, "run.init_a", m, em, w, rng);
    const SpatialGraph init_b =
        initial_graph_from_config(cfg, "run.init_b", m, em, w, rng);
    CoupleOptions opts;
    opts.horizon = cfg.get_double("run.horizon", 50.0);
    opts.record = true;
    opts.stop_when_coupled = false;
    const CoupledRun run = run_coupled_gbdp(m, em, w, init_a, init_b, rng, opts, quad);
    emit(output, provenance_header(cfg, seed) + coupled_trajectory_to_csv(run));
    if (run.coupled)
        std::cerr << "chains coupled at t=" << format_double(run.coupling_time)
                  << " (initial difference " << run.rho0 << ")\n";
    else
        std::cerr << "chains did not couple before the horizon (initial difference "
                  << run.rho0 << ")\n";
    return 0;
}

//--- gospa ------------------------------------------------------------------//

int cmd_gospa(const std::string& path_a, const std::string& path_b, double cv, double ce,
              int variant) {
    MetricParams mp;
    mp.cv = cv;
    mp.ce = ce;
    mp.variant = variant;
    mp.validate();
    const SpatialGraph a = graph_from_json(read_text_file(path_a));
    const SpatialGraph b = graph_from_json(read_text_file(path_b));
    const GospaResult r = gospa(a, b, mp);
    std::cout << format_double(r.value) << "\n";
    if (!r.exact) std::cerr << "note: value is a local-search upper bound\n";
    return 0;
}

//--- wasserstein ------------------------------------------------------------//

std::vector<SpatialGraph> load_graph_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw ValidationError("wasserstein: not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            names.push_back(entry.path().string());
    std::sort(names.begin(), names.end());
    if (names.empty())
        throw ValidationError("wasserstein: no .json graphs in " + dir);
    std::vector<SpatialGraph> graphs;
    graphs.reserve(names.size());
    for (const auto& n : names) graphs.push_back(graph_from_json(read_text_file(n)));
    return graphs;
}

int cmd_wasserstein(const std::string& dir_a, const std::string& dir_b, double cv, double ce,
                    int variant, const std::string& method, int threads) {
    MetricParams mp;
    mp.cv = cv;
    mp.ce = ce;
    mp.variant = variant;
    mp.validate();
    WassersteinOptions opts;
    opts.threads = threads;
    if (method == "exact")
        opts.method = WassersteinOptions::Method::exact;
    else if (method == "sinkhorn")
        opts.method = WassersteinOptions::Method::sinkhorn;
    else
        throw ValidationError("wasserstein: unknown method '" + method + "'");
    const auto a = load_graph_dir(dir_a);
    const auto b = load_graph_dir(dir_b);
    const WassersteinResult r = empirical_wasserstein(a, b, mp, opts);
    std::cout << format_double(r.value) << "\n";
    if (!r.exact) std::cerr << "note: value is an upper bound\n";
    return 0;
}

//--- bound ------------------------------------------------------------------//

int cmd_bound_stein_factors(double lambda, double cv, double ce, int variant) {
    MetricParams mp;
    mp.cv = cv;
    mp.ce = ce;
    mp.variant = variant;
    mp.validate();
    if (!(lambda >= 0.0))
        throw ValidationError("stein-factors: lambda must be >= 0");
    std::cout << "c_V=" << format_double(stein_factor_vertex(lambda, mp)) << "\n"
              << "c_E=" << format_double(stein_factor_edge(lambda, ce)) << "\n";
    return 0;
}

int cmd_bound_bstar(double eps, double c, long nstar, const std::string& form) {
    BstarInfiniteForm f = BstarInfiniteForm::remark_log;
    if (form == "exp")
        f = BstarInfiniteForm::theorem_exp;
    else if (form != "log")
        throw ValidationError("bstar: form must be 'log' or 'exp'");
    std::cout << format_double(coupling_bound_bstar(eps, c, nstar, f)) << "\n";
    return 0;
}

int cmd_bound_glauber(int n, int m) {
    std::cout << format_double(glauber_expected_coupling_time(n, m)) << "\n";
    return 0;
}

//--- experiment -------------------------------------------------------------//

int cmd_experiment_boolean(const std::string& config_path, std::uint64_t seed_override,
                           bool has_seed, const std::string& output) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys(
        {kWindowKeys, kMetricKeys},
        {"model.mu", "model.pareto_a", "model.pareto_scale", "model.contraction_b",
         "model.psi_gamma", "model.psi_delta", "model.centres", "model.dpp_theta",
         "sweep.r_list", "run.n_samples", "run.null_reps", "run.seed", "run.threads"}));
    BooleanExperimentConfig ec;
    ec.base.window = window_from_config(cfg);
    ec.base.dim = ec.base.window.dim;
    ec.base.mu = cfg.get_double("model.mu", ec.base.mu);
    ec.base.pareto_a = cfg.get_double("model.pareto_a", ec.base.pareto_a);
    ec.base.pareto_scale = cfg.get_double("model.pareto_scale", ec.base.pareto_scale);
    ec.base.contraction_b = cfg.get_double("model.contraction_b", ec.base.contraction_b);
    ec.base.psi_gamma = cfg.get_double("model.psi_gamma", ec.base.psi_gamma);
    ec.base.psi_delta = cfg.get_double("model.psi_delta", ec.base.psi_delta);
    const std::string centres = cfg.get_string("model.centres", "poisson");
    if (centres == "poisson")
        ec.base.centres = BooleanModelParams::Centres::poisson;
    else if (centres == "determinantal")
        ec.base.centres = BooleanModelParams::Centres::determinantal;
    else
        throw ValidationError("config: unknown model.centres '" + centres + "'");
    ec.base.dpp_theta = cfg.get_double("model.dpp_theta", ec.base.dpp_theta);
    ec.r_list = cfg.get_double_list("sweep.r_list", {});
    if (ec.r_list.empty())
        throw ValidationError("config: sweep.r_list is required");
    ec.n_samples = static_cast<int>(cfg.get_long("run.n_samples", ec.n_samples));
    ec.null_reps = static_cast<int>(cfg.get_long("run.null_reps", ec.null_reps));
    ec.metric = metric_from_config(cfg);
    ec.wopts.threads = static_cast<int>(cfg.get_long("run.threads", 1));
    ec.seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);

    const BooleanExperimentResult res = run_boolean_experiment(ec);

    std::ostringstream out;
    out << provenance_header(cfg, ec.seed);
    out << "# bound_slope=" << format_double(res.bound_slope) << "\n";
    out << "# w_slope=" << format_double(res.w_slope) << "\n";
    out << "# all_within=" << bool_cell(res.all_within) << "\n";
    out << "r,w_hat,bound,null_band,vertex_term,edge_term,lambda,target_t,radial_moment,"
           "within\n";
    for (const auto& row : res.rows)
        out << format_double(row.r) << ',' << format_double(row.w_hat) << ','
            << format_double(row.bound) << ',' << format_double(row.null_band) << ','
            << format_double(row.vertex_term) << ',' << format_double(row.edge_term) << ','
            << format_double(row.lambda) << ',' << format_double(row.target_t) << ','
            << format_double(row.radial_moment) << ',' << bool_cell(row.within) << "\n";
    emit(output, out.str());
    std::cerr << "boolean sweep: " << res.rows.size() << " radii, all_within="
              << bool_cell(res.all_within) << ", bound_slope="
              << format_double(res.bound_slope) << "\n";
    return 0;
}

int cmd_experiment_soft_rgg(const std::string& config_path, std::uint64_t seed_override,
                            bool has_seed, const std::string& output) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys(
        {kWindowKeys, kMetricKeys},
        {"cells.lambda1_list", "cells.lambda2_list", "cells.p1_list", "cells.p2_list",
         "run.n_samples", "run.null_reps", "run.n_functionals", "run.functional_samples",
         "run.seed", "run.threads"}));
    SoftRggExperimentConfig ec;
    ec.window = window_from_config(cfg);
    const auto l1 = cfg.get_double_list("cells.lambda1_list", {});
    const auto l2 = cfg.get_double_list("cells.lambda2_list", {});
    const auto p1 = cfg.get_double_list("cells.p1_list", {});
    const auto p2 = cfg.get_double_list("cells.p2_list", {});
    if (l1.empty() || l1.size() != l2.size() || l1.size() != p1.size() ||
        l1.size() != p2.size())
        throw ValidationError(
            "config: cells.* lists must be non-empty and of equal length");
    for (std::size_t i = 0; i < l1.size(); ++i)
        ec.cells.push_back({l1[i], l2[i], p1[i], p2[i]});
    ec.n_samples = static_cast<int>(cfg.get_long("run.n_samples", ec.n_samples));
    ec.null_reps = static_cast<int>(cfg.get_long("run.null_reps", ec.null_reps));
    ec.n_functionals = static_cast<int>(cfg.get_long("run.n_functionals", ec.n_functionals));
    ec.functional_samples =
        static_cast<int>(cfg.get_long("run.functional_samples", ec.functional_samples));
    ec.metric = metric_from_config(cfg);
    ec.wopts.threads = static_cast<int>(cfg.get_long("run.threads", 1));
    ec.seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);

    const SoftRggExperimentResult res = run_soft_rgg_experiment(ec);

    std::ostringstream out;
    out << provenance_header(cfg, ec.seed);
    out << "# all_within=" << bool_cell(res.all_within) << "\n";
    out << "# all_functionals_within=" << bool_cell(res.all_functionals_within) << "\n";
    out << "lambda1,lambda2,p1,p2,w_hat,bound_wasserstein,null_band,bound_sup,"
           "max_functional_excess,within,functionals_within\n";
    for (const auto& row : res.rows)
        out << format_double(row.cell.lambda1) << ',' << format_double(row.cell.lambda2)
            << ',' << format_double(row.cell.p1) << ',' << format_double(row.cell.p2) << ','
            << format_double(row.w_hat) << ',' << format_double(row.bound_wasserstein)
            << ',' << format_double(row.null_band) << ',' << format_double(row.bound_sup)
            << ',' << format_double(row.max_functional_excess) << ','
            << bool_cell(row.within) << ',' << bool_cell(row.functionals_within) << "\n";
    emit(output, out.str());
    std::cerr << "soft-rgg: " << res.rows.size() << " cells, all_within="
              << bool_cell(res.all_within) << "\n";
    return 0;
}

int cmd_experiment_discretisation(const std::string& config_path,
                                  std::uint64_t seed_override, bool has_seed,
                                  const std::string& output) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys(
        {kWindowKeys, kVertexKeys, kEdgeKeys, kMetricKeys, kQuadKeys},
        {"grids.cells_per_axis", "lipschitz.l_v", "lipschitz.l_e", "run.n_samples",
         "run.null_reps", "run.seed", "run.threads"}));
    DiscretisationExperimentConfig ec;
    ec.window = window_from_config(cfg);
    ec.model = vertex_model_from_config(cfg, ec.window.dim);
    ec.edge = edge_model_from_config(cfg, ec.window.dim);
    const auto cells = cfg.get_double_list("grids.cells_per_axis", {2, 4, 8, 16});
    ec.cells_per_axis_list.clear();
    for (double c : cells) {
        if (c < 1 || c != static_cast<long>(c))
            throw ValidationError("config: grids.cells_per_axis entries must be integers >= 1");
        ec.cells_per_axis_list.push_back(static_cast<int>(c));
    }
    if (cfg.has("lipschitz.l_v") || cfg.has("lipschitz.l_e"))
        ec.lipschitz = LipschitzData{cfg.get_double("lipschitz.l_v", 0.0),
                                     cfg.get_double("lipschitz.l_e", 0.0)};
    ec.n_samples = static_cast<int>(cfg.get_long("run.n_samples", ec.n_samples));
    ec.null_reps = static_cast<int>(cfg.get_long("run.null_reps", ec.null_reps));
    ec.metric = metric_from_config(cfg);
    ec.wopts.threads = static_cast<int>(cfg.get_long("run.threads", 1));
    ec.quad = quadrature_from_config(cfg);
    ec.seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);

    const DiscretisationExperimentResult res = run_discretisation_experiment(ec);

    std::ostringstream out;
    out << provenance_header(cfg, ec.seed);
    out << "# lipschitz_slope=" << format_double(res.lipschitz_slope) << "\n";
    out << "# w_slope=" << format_double(res.w_slope) << "\n";
    out << "# all_within=" << bool_cell(res.all_within) << "\n";
    out << "cells_per_axis,r_v,w_hat,bound_general,bound_lipschitz,null_band,within\n";
    for (const auto& row : res.rows)
        out << row.cells_per_axis << ',' << format_double(row.r_v) << ','
            << format_double(row.w_hat) << ',' << format_double(row.bound_general) << ','
            << format_double(row.bound_lipschitz) << ',' << format_double(row.null_band)
            << ',' << bool_cell(row.within) << "\n";
    emit(output, out.str());
    std::cerr << "discretisation: " << res.rows.size() << " grids, w_slope="
              << format_double(res.w_slope) << ", all_within=" << bool_cell(res.all_within)
              << "\n";
    return 0;
}

int cmd_experiment_coupling(const std::string& config_path, std::uint64_t seed_override,
                            bool has_seed, const std::string& output) {
    const ConfigMap cfg = ConfigMap::parse_file(config_path);
    cfg.require_known(concat_keys(
        {kWindowKeys, kVertexKeys, kEdgeKeys, kQuadKeys},
        {"run.n_reps", "run.horizon", "run.seed", "run.init_a", "run.init_b"}));
    CouplingStudyConfig ec;
    ec.window = window_from_config(cfg);
    ec.model = vertex_model_from_config(cfg, ec.window.dim);
    ec.edge = edge_model_from_config(cfg, ec.window.dim);
    ec.n_reps = static_cast<int>(cfg.get_long("run.n_reps", ec.n_reps));
    ec.horizon = cfg.get_double("run.horizon", ec.horizon);
    ec.seed = has_seed ? seed_override : cfg.get_uint64("run.seed", 1);
    RngStream init_rng(ec.seed, 0x1A17);
    ec.init_a = initial_graph_from_config(cfg, "run.init_a", ec.model, ec.edge, ec.window,
                                          init_rng);
    ec.init_b = initial_graph_from_config(cfg, "run.init_b", ec.model, ec.edge, ec.window,
                                          init_rng);

    const CouplingStudyResult res = run_coupling_study(ec);

    std::ostringstream out;
    out << provenance_header(cfg, ec.seed);
    out << "mean_time,std_error,n_coupled,n_censored,rho0\n";
    out << format_double(res.mean_time) << ',' << format_double(res.std_error) << ','
        << res.n_coupled << ',' << res.n_censored << ',' << res.rho0 << "\n";
    emit(output, out.str());
    std::cerr << "coupling study: mean time " << format_double(res.mean_time) << " +/- "
              << format_double(res.std_error) << " (" << res.n_censored << " censored)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial random graph simulation and bound verification toolkit"};
    app.require_subcommand(1);

    std::string config_path, output_path;
    std::uint64_t seed = 0;
    bool has_seed = false;

    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Run configuration file")->required();
        sub->add_option("--seed", seed, "Override the config seed")
            ->each([&](const std::string&) { has_seed = true; });
        sub->add_option("--output", output_path, "Output file (default: stdout or config)");
    };

    CLI::App* sample = app.add_subcommand("sample", "Sample a point pattern or random graph");
    add_run_flags(sample);
    CLI::App* gbdp = app.add_subcommand("gbdp", "Run a birth-death graph trajectory");
    add_run_flags(gbdp);
    CLI::App* couple = app.add_subcommand("couple", "Run coupled birth-death chains");
    add_run_flags(couple);

    std::string gospa_a, gospa_b;
    double mcv = 1.0, mce = 1.0;
    int mvariant = 1;
    CLI::App* gospa_cmd =
        app.add_subcommand("gospa", "Graph distance between two graph JSON files");
    gospa_cmd->add_option("a", gospa_a, "First graph (JSON)")->required();
    gospa_cmd->add_option("b", gospa_b, "Second graph (JSON)")->required();
    gospa_cmd->add_option("--cv", mcv, "Vertex metric cap (default 1)");
    gospa_cmd->add_option("--ce", mce, "Edge metric cap (default 1)");
    gospa_cmd->add_option("--variant", mvariant, "Penalty variant 1 or 2 (default 1)");

    std::string dir_a, dir_b, wmethod = "exact";
    int wthreads = 1;
    CLI::App* wass = app.add_subcommand(
        "wasserstein", "Empirical transport distance between two graph sample directories");
    wass->add_option("dir_a", dir_a, "Directory of .json graphs")->required();
    wass->add_option("dir_b", dir_b, "Directory of .json graphs")->required();
    wass->add_option("--cv", mcv, "Vertex metric cap (default 1)");
    wass->add_option("--ce", mce, "Edge metric cap (default 1)");
    wass->add_option("--variant", mvariant, "Penalty variant 1 or 2 (default 1)");
    wass->add_option("--method", wmethod, "exact or sinkhorn (default exact)");
    wass->add_option("--threads", wthreads, "Cost matrix worker threads (default 1)");

    CLI::App* bound = app.add_subcommand("bound", "Evaluate closed-form bounds");
    bound->require_subcommand(1);
    double blambda = 1.0, beps = 0.1, bc = 1.0;
    long bnstar = kInfiniteCut;
    std::string bform = "log";
    int gn = 1, gm = 1;
    CLI::App* sf = bound->add_subcommand(
        "stein-factors", "Vertex and edge smoothness factors of the Poisson comparison");
    sf->add_option("--lambda", blambda, "Expected vertex count of the target")->required();
    sf->add_option("--cv", mcv, "Vertex metric cap (default 1)");
    sf->add_option("--ce", mce, "Edge metric cap (default 1)");
    sf->add_option("--variant", mvariant, "Penalty variant 1 or 2 (default 1)");
    CLI::App* bstar = bound->add_subcommand(
        "bstar", "Mean-coupling-time bound per unit of initial graph difference");
    bstar->add_option("--eps", beps, "One-removal sensitivity")->required();
    bstar->add_option("--c", bc, "Pattern-pair sensitivity")->required();
    bstar->add_option("--nstar", bnstar, "Series cut (-1 = infinity; default -1)");
    bstar->add_option("--form", bform, "Closed form at infinity: log or exp (default log)");
    CLI::App* glauber = bound->add_subcommand(
        "glauber", "Expected meeting time of coupled single-site dynamics");
    glauber->add_option("--n", gn, "Number of sites")->required();
    glauber->add_option("--m", gm, "Initial disagreements")->required();

    CLI::App* experiment =
        app.add_subcommand("experiment", "Run a full verification experiment");
    experiment->require_subcommand(1);
    CLI::App* exp_boolean = experiment->add_subcommand(
        "boolean", "Percolation graph vs geometric target over a radius sweep");
    add_run_flags(exp_boolean);
    CLI::App* exp_soft = experiment->add_subcommand(
        "soft-rgg", "Two soft geometric graph laws vs the closed-form bound");
    add_run_flags(exp_soft);
    CLI::App* exp_disc = experiment->add_subcommand(
        "discretisation", "Lattice discretisation convergence study");
    add_run_flags(exp_disc);
    CLI::App* exp_couple = experiment->add_subcommand(
        "coupling", "Mean coupling time of the coupled birth-death chains");
    add_run_flags(exp_couple);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sample->parsed()) return cmd_sample(config_path, seed, has_seed, output_path);
        if (gbdp->parsed()) return cmd_gbdp(config_path, seed, has_seed, output_path);
        if (couple->parsed()) return cmd_couple(config_path, seed, has_seed, output_path);
        if (gospa_cmd->parsed()) return cmd_gospa(gospa_a, gospa_b, mcv, mce, mvariant);
        if (wass->parsed())
            return cmd_wasserstein(dir_a, dir_b, mcv, mce, mvariant, wmethod, wthreads);
        if (bound->parsed()) {
            if (sf->parsed()) return cmd_bound_stein_factors(blambda, mcv, mce, mvariant);
            if (bstar->parsed()) return cmd_bound_bstar(beps, bc, bnstar, bform);
            if (glauber->parsed()) return cmd_bound_glauber(gn, gm);
        }
        if (experiment->parsed()) {
            if (exp_boolean->parsed())
                return cmd_experiment_boolean(config_path, seed, has_seed, output_path);
            if (exp_soft->parsed())
                return cmd_experiment_soft_rgg(config_path, seed, has_seed, output_path);
            if (exp_disc->parsed())
                return cmd_experiment_discretisation(config_path, seed, has_seed,
                                                     output_path);
            if (exp_couple->parsed())
                return cmd_experiment_coupling(config_path, seed, has_seed, output_path);
        }
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const srg::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const srg::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
