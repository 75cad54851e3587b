#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "maxdyn/rng.hpp"

namespace maxdyn {

using Vertex = std::uint32_t;

// Sorted-unique vertex id set with exact set operations.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<Vertex> members);

    static VertexSet single(Vertex v) { return VertexSet({v}); }

    bool contains(Vertex v) const;
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    const std::vector<Vertex>& members() const { return members_; }

    bool is_subset_of(const VertexSet& other) const;
    bool intersects(const VertexSet& other) const;
    VertexSet unite(const VertexSet& other) const;
    VertexSet difference(const VertexSet& other) const;

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::vector<Vertex> members_;
};

// Simple digraph: no self-loops, no duplicate edges, ids in [0, n).
// Immutable after construction; safe to share across threads. Undirected
// graphs are encoded as bidirected digraphs (both edge directions present).
class DirectedGraph {
public:
    static DirectedGraph from_edge_list(Vertex n,
                                        const std::vector<std::pair<Vertex, Vertex>>& edges);

    Vertex n() const { return n_; }
    std::size_t edge_count() const { return edge_count_; }

    const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
    const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }

    bool has_edge(Vertex u, Vertex v) const;

    // All edges as (u, v), sorted by (u, v).
    std::vector<std::pair<Vertex, Vertex>> edges() const;

private:
    Vertex n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

enum class GraphFamily { complete, path, dicycle };

const char* family_name(GraphFamily family);

// complete/path emit both edge directions; dicycle emits one.
DirectedGraph generate(GraphFamily family, Vertex n);

// Uniform random digraph (each ordered pair an edge with probability p)
// conditioned on strong connectivity by rejection. Test/CLI plumbing only.
DirectedGraph random_strongly_connected(Vertex n, double p, RngStream& rng,
                                        unsigned max_attempts = 100000);

// Reverse every edge. An involution; preserves strong connectivity.
DirectedGraph dual(const DirectedGraph& g);

// True iff every edge (u,v) is paired with (v,u).
bool is_undirected(const DirectedGraph& g);

// Out-neighbours of s that are not in s; disjoint from s by construction.
VertexSet boundary(const DirectedGraph& g, const VertexSet& s);

// BFS layers from s along out-edges: [s, level 1, level 2, ...]. The levels
// partition the vertex set; requires a strongly connected graph so that no
// vertex is unreachable.
std::vector<VertexSet> k_boundary_partition(const DirectedGraph& g, const VertexSet& s);

struct SccDecomposition {
    std::vector<VertexSet> components;            // reverse topological order
    std::vector<std::size_t> component_of;        // vertex id -> component index
    std::vector<std::pair<std::size_t, std::size_t>> condensation_edges;  // sorted unique
};

// Tarjan. Components are emitted in reverse topological order: every
// condensation edge goes from a higher component index to a lower one.
SccDecomposition scc(const DirectedGraph& g);

bool is_strongly_connected(const DirectedGraph& g);

// Edge-list text format: "n m" on the first line, then m lines "u v".
// '#' starts a comment; blank lines are ignored.
DirectedGraph parse_edge_list(std::istream& in);
DirectedGraph parse_edge_list_file(const std::string& path);
std::string format_edge_list(const DirectedGraph& g);

}  // namespace maxdyn
