#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "srg/geometry.hpp"

namespace srg {

//============================================================================
// Spatial graphs: vertices carry coordinates, edges are unordered index
// pairs.  Edges live in a hash set keyed on the (min, max) pair; iteration
// for serialisation and metrics goes through the sorted view so all outputs
// are deterministic.
//============================================================================

inline std::uint64_t edge_key(int i, int j) {
    const std::uint32_t a = static_cast<std::uint32_t>(i < j ? i : j);
    const std::uint32_t b = static_cast<std::uint32_t>(i < j ? j : i);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct SpatialGraph {
    int dim = 2;
    std::vector<Vec> vertices;
    std::unordered_set<std::uint64_t> edges;

    SpatialGraph() = default;
    explicit SpatialGraph(int d) : dim(d) {}

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    long n_edges() const { return static_cast<long>(edges.size()); }

    bool has_edge(int i, int j) const {
        if (i == j) return false;
        return edges.count(edge_key(i, j)) != 0;
    }

    void add_edge(int i, int j) {
        check_pair(i, j);
        edges.insert(edge_key(i, j));
    }

    void remove_edge(int i, int j) { edges.erase(edge_key(i, j)); }

    int degree(int v) const {
        int d = 0;
        for (int u = 0; u < n_vertices(); ++u)
            if (u != v && has_edge(u, v)) ++d;
        return d;
    }

    /// Edges as sorted (i, j) pairs with i < j; deterministic order.
    std::vector<std::pair<int, int>> edges_sorted() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(edges.size());
        for (std::uint64_t key : edges)
            out.emplace_back(static_cast<int>(key >> 32),
                             static_cast<int>(key & 0xFFFFFFFFULL));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Append a vertex, connecting it to the listed existing vertices.
    int add_vertex(const Vec& x, const std::vector<int>& neighbours = {}) {
        const int idx = n_vertices();
        vertices.push_back(x);
        for (int u : neighbours) add_edge(u, idx);
        return idx;
    }

    /// Remove vertex v together with its incident edges.  The last vertex is
    /// moved into slot v (labels are not meaningful, coordinates are).
    void remove_vertex(int v) {
        const int last = n_vertices() - 1;
        if (v < 0 || v > last)
            throw ValidationError("remove_vertex: index out of range");
        // Drop edges at v, then relabel edges at `last` to v.
        std::vector<std::uint64_t> to_erase;
        std::vector<std::uint64_t> to_relabel;
        for (std::uint64_t key : edges) {
            const int i = static_cast<int>(key >> 32);
            const int j = static_cast<int>(key & 0xFFFFFFFFULL);
            if (i == v || j == v) to_erase.push_back(key);
            else if (i == last || j == last) to_relabel.push_back(key);
        }
        for (auto k : to_erase) edges.erase(k);
        if (v != last) {
            for (auto k : to_relabel) {
                const int i = static_cast<int>(k >> 32);
                const int j = static_cast<int>(k & 0xFFFFFFFFULL);
                edges.erase(k);
                edges.insert(edge_key(i == last ? v : i, j == last ? v : j));
            }
            vertices[v] = vertices[last];
        }
        vertices.pop_back();
    }

    /// Dense adjacency matrix (row-major n x n, entries 0/1).
    std::vector<std::uint8_t> adjacency() const {
        const int n = n_vertices();
        std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
        for (std::uint64_t key : edges) {
            const int i = static_cast<int>(key >> 32);
            const int j = static_cast<int>(key & 0xFFFFFFFFULL);
            adj[static_cast<std::size_t>(i) * n + j] = 1;
            adj[static_cast<std::size_t>(j) * n + i] = 1;
        }
        return adj;
    }

    void validate() const {
        if (dim < 1 || dim > kMaxDim)
            throw ValidationError("graph: dimension must be 1, 2 or 3");
        for (std::uint64_t key : edges) {
            const int i = static_cast<int>(key >> 32);
            const int j = static_cast<int>(key & 0xFFFFFFFFULL);
            if (i < 0 || j < 0 || i >= n_vertices() || j >= n_vertices() || i >= j)
                throw ValidationError("graph: edge references invalid vertex index");
        }
        for (const Vec& v : vertices)
            for (int k = 0; k < dim; ++k)
                if (!std::isfinite(v[k]))
                    throw ValidationError("graph: non-finite vertex coordinate");
    }

private:
    void check_pair(int i, int j) const {
        if (i == j) throw ValidationError("graph: self-loops are not allowed");
        if (i < 0 || j < 0 || i >= n_vertices() || j >= n_vertices())
            throw ValidationError("graph: edge endpoint out of range");
    }
};

} // namespace srg
