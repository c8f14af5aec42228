#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srg/gbdp.hpp"
#include "srg/geometry.hpp"
#include "srg/graph.hpp"

namespace srg {

//============================================================================
// Deterministic serialisation: CSV for point patterns, graphs, trajectories
// and experiment tables, JSON for single graphs.  All floating-point output
// uses the shortest representation that round-trips to the identical
// binary64 value, so identical runs produce byte-identical files and
// parse -> write is the identity.
//============================================================================

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Strict double parse of an entire token; throws ValidationError on junk.
double parse_double(const std::string& token);

//--- Point patterns ---------------------------------------------------------//

/// CSV with header x1[,x2[,x3]] and one row per point.
std::string pattern_to_csv(const PointPattern& pat);
PointPattern pattern_from_csv(const std::string& text);

//--- Graphs -----------------------------------------------------------------//

/// vertices.csv: header index,x1[,...]; edges.csv: header i,j (sorted pairs).
std::string graph_vertices_csv(const SpatialGraph& g);
std::string graph_edges_csv(const SpatialGraph& g);
SpatialGraph graph_from_csv(const std::string& vertices_text, const std::string& edges_text);

/// Single JSON document (schema_version, dim, vertices, edges, provenance).
std::string graph_to_json(const SpatialGraph& g, std::uint64_t seed = 0,
                          const std::string& config_hash = "");
SpatialGraph graph_from_json(const std::string& text);

//--- Trajectories -----------------------------------------------------------//

/// CSV columns time,graph_id,n_vertices,n_edges,coupled_flag.
std::string trajectory_to_csv(const Trajectory& traj);
std::string coupled_trajectory_to_csv(const CoupledRun& run);

//--- Files ------------------------------------------------------------------//

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace srg
