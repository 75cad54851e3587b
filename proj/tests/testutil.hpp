#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "maxdyn/dynamics.hpp"
#include "maxdyn/graph.hpp"
#include "maxdyn/rng.hpp"
#include "maxdyn/valuation.hpp"

namespace testutil {

using namespace maxdyn;

// 6-vertex undirected example: values [5,5,3,4,5,2], the top-right vertex
// (index 4) has neighbours valued {3,4,2}.
inline DirectedGraph six_vertex_undirected() {
    std::vector<std::pair<Vertex, Vertex>> edges;
    auto undirected = [&](Vertex a, Vertex b) {
        edges.emplace_back(a, b);
        edges.emplace_back(b, a);
    };
    undirected(0, 1);
    undirected(0, 2);
    undirected(2, 3);
    undirected(1, 3);
    undirected(2, 4);
    undirected(4, 5);
    undirected(3, 5);
    undirected(4, 3);
    return DirectedGraph::from_edge_list(6, edges);
}

inline Valuation six_vertex_valuation() {
    return Valuation({5, 5, 3, 4, 5, 2});
}

// 10-vertex undirected graph partitioned into levels {0}, {1,2,3},
// {4,...,9} from the max-valued vertex 0.
inline DirectedGraph ten_vertex_undirected() {
    std::vector<std::pair<Vertex, Vertex>> edges;
    auto undirected = [&](Vertex a, Vertex b) {
        edges.emplace_back(a, b);
        edges.emplace_back(b, a);
    };
    undirected(0, 1);
    undirected(1, 2);
    undirected(0, 2);
    undirected(0, 3);
    undirected(1, 4);
    undirected(1, 5);
    undirected(1, 6);
    undirected(2, 6);
    undirected(2, 7);
    undirected(7, 8);
    undirected(8, 9);
    undirected(2, 8);
    undirected(3, 9);
    return DirectedGraph::from_edge_list(10, edges);
}

inline Valuation ten_vertex_valuation() {
    return Valuation({10, 9, 1, 3, 2, 4, 6, 5, 7, 8});
}

// Directed variant of the 10-vertex example; its dual partitions into the
// same levels from vertex 0.
inline std::vector<std::pair<Vertex, Vertex>> ten_vertex_directed_edges() {
    return {{1, 0}, {2, 1}, {2, 0}, {3, 0}, {4, 1}, {5, 1}, {6, 1}, {6, 2}, {7, 2},
            {8, 7}, {9, 8}, {8, 2}, {9, 3}, {0, 9}, {7, 6}, {6, 5}, {5, 4}};
}

inline DirectedGraph ten_vertex_directed() {
    return DirectedGraph::from_edge_list(10, ten_vertex_directed_edges());
}

// 9-vertex strongly connected example: a 6-cycle 0..5 and a triangle
// 6 -> 8 -> 7 -> 6, joined by 2 -> 6 and 6 -> 3.
inline DirectedGraph nine_vertex_directed() {
    return DirectedGraph::from_edge_list(
        9, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {2, 6}, {7, 6}, {8, 7},
            {6, 8}, {6, 3}});
}

inline Valuation nine_vertex_valuation() {
    return Valuation({6, 5, 4, 3, 2, 1, 5, 2, 3});
}

// Weakly connected 3-vertex example whose absorbing valuations need not be
// constant: root 0 points at leaves 1 and 2.
inline DirectedGraph out_star_3() {
    return DirectedGraph::from_edge_list(3, {{0, 1}, {0, 2}});
}

// Every labeled simple digraph on n vertices (n <= 4: at most 4096).
inline void for_each_digraph(Vertex n, const std::function<void(const DirectedGraph&)>& fn) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v) pairs.emplace_back(u, v);
    const std::size_t bits = pairs.size();
    for (std::uint64_t mask = 0; mask < (1ull << bits); ++mask) {
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (std::size_t i = 0; i < bits; ++i) {
            if (mask & (1ull << i)) edges.push_back(pairs[i]);
        }
        fn(DirectedGraph::from_edge_list(n, edges));
    }
}

inline void for_each_strongly_connected(Vertex n,
                                        const std::function<void(const DirectedGraph&)>& fn) {
    for_each_digraph(n, [&](const DirectedGraph& g) {
        if (is_strongly_connected(g)) fn(g);
    });
}

// Literal recursive k-boundary definition. Only valid on undirected graphs:
// there the out-neighbours of level k-1 lie in levels k-2..k, so subtracting
// level k-2 isolates level k. Directed back edges break that (on the dicycle
// C_3 from {0} the recursion cycles {0},{1},{2},{0},{1},... forever), hence
// the level cap instead of an emptiness-only stop.
inline std::vector<VertexSet> k_boundaries_recursive(const DirectedGraph& g,
                                                     const VertexSet& s) {
    std::vector<VertexSet> levels{s, boundary(g, s)};
    while (levels.size() <= g.n() + 2) {
        const VertexSet& prev = levels[levels.size() - 1];
        const VertexSet& prev2 = levels[levels.size() - 2];
        if (prev.empty()) break;
        VertexSet next = boundary(g, prev).difference(prev2);
        if (next.empty()) break;
        levels.push_back(next);
    }
    if (levels.back().empty()) levels.pop_back();
    return levels;
}

// Boundary-operator peeling with all earlier levels removed; the directed
// generalisation of the recursion, equal to BFS layers on every graph.
inline std::vector<VertexSet> k_boundaries_peeled(const DirectedGraph& g, const VertexSet& s) {
    std::vector<VertexSet> levels{s};
    VertexSet seen = s;
    for (;;) {
        VertexSet next = boundary(g, levels.back()).difference(seen);
        if (next.empty()) break;
        seen = seen.unite(next);
        levels.push_back(next);
    }
    return levels;
}

// Random valuation with values in [1, limit].
inline Valuation random_valuation(Vertex n, Value limit, RngStream& rng) {
    std::vector<Value> values(n);
    for (Vertex v = 0; v < n; ++v) values[v] = rng.next_below(limit) + 1;
    return Valuation(std::move(values));
}

// Mixed family graph for trajectory sweeps: complete, path, dicycle or a
// random strongly connected digraph.
inline DirectedGraph mixed_family_graph(std::uint64_t pick, Vertex n, RngStream& rng) {
    switch (pick % 4) {
        case 0: return generate(GraphFamily::complete, std::max<Vertex>(n, 1));
        case 1: return generate(GraphFamily::path, std::max<Vertex>(n, 2));
        case 2: return generate(GraphFamily::dicycle, std::max<Vertex>(n, 3));
        default: return random_strongly_connected(std::max<Vertex>(n, 2), 0.4, rng);
    }
}

}  // namespace testutil
