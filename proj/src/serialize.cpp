#include "srg/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace srg {

//----------------------------------------------------------------------------
// Numbers.
//----------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw NumericalError("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw ValidationError("parse_double: invalid numeric token '" + token + "'");
    return v;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& token) {
    long v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw ValidationError("csv: invalid integer token '" + token + "'");
    return v;
}

std::string coord_header(int dim, bool with_index) {
    std::string h = with_index ? "index" : "";
    for (int k = 0; k < dim; ++k) {
        if (!h.empty()) h += ',';
        h += "x" + std::to_string(k + 1);
    }
    return h;
}

int dim_from_header(const std::string& header, bool with_index) {
    const auto fields = split_fields(header);
    const std::size_t base = with_index ? 1 : 0;
    if (with_index && (fields.empty() || fields[0] != "index"))
        throw ValidationError("csv: expected 'index' as the first header column");
    const int dim = static_cast<int>(fields.size() - base);
    if (dim < 1 || dim > kMaxDim)
        throw ValidationError("csv: header implies an unsupported dimension");
    for (int k = 0; k < dim; ++k)
        if (fields[base + k] != "x" + std::to_string(k + 1))
            throw ValidationError("csv: unexpected coordinate header '" + fields[base + k] + "'");
    return dim;
}

} // namespace

//----------------------------------------------------------------------------
// Point patterns.
//----------------------------------------------------------------------------

std::string pattern_to_csv(const PointPattern& pat) {
    std::string out = coord_header(pat.dim, false) + "\n";
    for (const Vec& p : pat.points) {
        for (int k = 0; k < pat.dim; ++k) {
            if (k) out += ',';
            out += format_double(p[k]);
        }
        out += '\n';
    }
    return out;
}

PointPattern pattern_from_csv(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ValidationError("csv: empty point pattern file");
    PointPattern pat(dim_from_header(lines[0], false));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_fields(lines[i]);
        if (static_cast<int>(fields.size()) != pat.dim)
            throw ValidationError("csv: wrong number of coordinates in a point row");
        Vec p{0, 0, 0};
        for (int k = 0; k < pat.dim; ++k) p[k] = parse_double(fields[k]);
        pat.points.push_back(p);
    }
    return pat;
}

//----------------------------------------------------------------------------
// Graphs (CSV pair).
//----------------------------------------------------------------------------

std::string graph_vertices_csv(const SpatialGraph& g) {
    std::string out = coord_header(g.dim, true) + "\n";
    for (int i = 0; i < g.n_vertices(); ++i) {
        out += std::to_string(i);
        for (int k = 0; k < g.dim; ++k) {
            out += ',';
            out += format_double(g.vertices[i][k]);
        }
        out += '\n';
    }
    return out;
}

std::string graph_edges_csv(const SpatialGraph& g) {
    std::string out = "i,j\n";
    for (const auto& [i, j] : g.edges_sorted())
        out += std::to_string(i) + "," + std::to_string(j) + "\n";
    return out;
}

SpatialGraph graph_from_csv(const std::string& vertices_text, const std::string& edges_text) {
    const auto vlines = split_lines(vertices_text);
    if (vlines.empty()) throw ValidationError("csv: empty vertex file");
    SpatialGraph g(dim_from_header(vlines[0], true));
    for (std::size_t i = 1; i < vlines.size(); ++i) {
        if (vlines[i].empty()) continue;
        const auto fields = split_fields(vlines[i]);
        if (static_cast<int>(fields.size()) != g.dim + 1)
            throw ValidationError("csv: wrong number of fields in a vertex row");
        if (parse_long(fields[0]) != g.n_vertices())
            throw ValidationError("csv: vertex indices must be consecutive from 0");
        Vec p{0, 0, 0};
        for (int k = 0; k < g.dim; ++k) p[k] = parse_double(fields[k + 1]);
        g.vertices.push_back(p);
    }
    const auto elines = split_lines(edges_text);
    if (elines.empty() || elines[0] != "i,j")
        throw ValidationError("csv: edge file must start with header 'i,j'");
    for (std::size_t i = 1; i < elines.size(); ++i) {
        if (elines[i].empty()) continue;
        const auto fields = split_fields(elines[i]);
        if (fields.size() != 2) throw ValidationError("csv: edge rows need exactly two fields");
        g.add_edge(static_cast<int>(parse_long(fields[0])),
                   static_cast<int>(parse_long(fields[1])));
    }
    g.validate();
    return g;
}

//----------------------------------------------------------------------------
// Graphs (JSON).
//----------------------------------------------------------------------------

std::string graph_to_json(const SpatialGraph& g, std::uint64_t seed,
                          const std::string& config_hash) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["dim"] = g.dim;
    auto& vs = j["vertices"] = nlohmann::ordered_json::array();
    for (const Vec& v : g.vertices) {
        auto row = nlohmann::ordered_json::array();
        for (int k = 0; k < g.dim; ++k) row.push_back(v[k]);
        vs.push_back(row);
    }
    auto& es = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.edges_sorted()) es.push_back({a, b});
    j["provenance"]["seed"] = seed;
    j["provenance"]["config_hash"] = config_hash;
    return j.dump(2) + "\n";
}

SpatialGraph graph_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json: parse failure: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != 1)
            throw ValidationError("json: unsupported schema_version");
        SpatialGraph g(j.at("dim").get<int>());
        for (const auto& row : j.at("vertices")) {
            if (static_cast<int>(row.size()) != g.dim)
                throw ValidationError("json: vertex row has the wrong dimension");
            Vec p{0, 0, 0};
            for (int k = 0; k < g.dim; ++k) p[k] = row.at(k).get<double>();
            g.vertices.push_back(p);
        }
        for (const auto& e : j.at("edges")) {
            if (e.size() != 2) throw ValidationError("json: edge rows need two indices");
            g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
        }
        g.validate();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json: malformed graph document: ") + e.what());
    }
}

//----------------------------------------------------------------------------
// Trajectories.
//----------------------------------------------------------------------------

namespace {

void trajectory_rows(std::string& out, const std::vector<TrajectoryPoint>& points,
                     int graph_id, double coupled_from) {
    for (const TrajectoryPoint& p : points) {
        out += format_double(p.time);
        out += ',';
        out += std::to_string(graph_id);
        out += ',';
        out += std::to_string(p.n_vertices);
        out += ',';
        out += std::to_string(p.n_edges);
        out += ',';
        out += (coupled_from >= 0.0 && p.time >= coupled_from) ? '1' : '0';
        out += '\n';
    }
}

} // namespace

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "time,graph_id,n_vertices,n_edges,coupled_flag\n";
    trajectory_rows(out, traj.points, 0, -1.0);
    return out;
}

std::string coupled_trajectory_to_csv(const CoupledRun& run) {
    std::string out = "time,graph_id,n_vertices,n_edges,coupled_flag\n";
    const double from = run.coupled ? run.coupling_time : -1.0;
    trajectory_rows(out, run.points_a, 0, from);
    trajectory_rows(out, run.points_b, 1, from);
    return out;
}

//----------------------------------------------------------------------------
// Files.
//----------------------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open file for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw ValidationError("write failure on file: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace srg
