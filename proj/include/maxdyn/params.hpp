#pragma once

#include <cstdint>
#include <vector>

#include "maxdyn/graph.hpp"
#include "maxdyn/rational.hpp"

namespace maxdyn {

// Reading of the "|A| <= n/2" constraint at odd n. For integer |A| the two
// coincide at floor(n/2); ceil_half is exposed for comparison only.
enum class HalfRule { floor_half, ceil_half };

struct ExpansionResult {
    Rat value;
    VertexSet witness;  // minimising A; ties: smallest |A|, then lexicographic
};

// Exact minimum of |boundary(A)| / |A| over non-empty A with |A| <= n/2,
// exhaustive over subsets. cap bounds n (default 20, ~10^6 subsets).
ExpansionResult vertex_expansion_out(const DirectedGraph& g, Vertex cap = 20,
                                     HalfRule rule = HalfRule::floor_half);

// Outward expansion of the dual graph.
ExpansionResult vertex_expansion_in(const DirectedGraph& g, Vertex cap = 20,
                                    HalfRule rule = HalfRule::floor_half);

struct OrbitResult {
    Vertex value;    // max over v of the shortest cycle length through v
    Vertex witness;  // smallest vertex attaining it
};

// Shortest cycle through v is 1 + min over out-neighbours u of dist(u, v).
OrbitResult orbit(const DirectedGraph& g);

// Exact n-th harmonic number; H_0 = 0.
Rat harmonic(std::uint64_t n);

// Closed form n*b*(b-1)/2 for the expected rounds of the phase-1 game when
// the walker starts one step from the reflecting end.
Rat gamblers_ruin_closed(std::uint64_t n, std::uint64_t b);

// Exact solve of the phase-1 recurrence: index k holds the expected rounds
// to reach b dollars from k+1 dollars (so [0] is e_1 and [b-1] = e_b = 0).
std::vector<Rat> gamblers_ruin_solve(std::uint64_t n, std::uint64_t b);

struct ParamReport {
    Vertex n = 0;
    Rat phi_out, phi_in, phi_prime;
    VertexSet witness_out, witness_in;
    bool strongly_connected = false;
    Vertex orbit_value = 0;    // 0 when not strongly connected
    Vertex orbit_witness = 0;
    Vertex min_out_degree = 0;
    // Shape-only predictors with constant 1 and natural log; the bounds carry
    // no certified constants. Infinite when the relevant expansion is zero.
    double bound_undirected = 0.0;
    double bound_strongly_connected = 0.0;
};

ParamReport bound_report(const DirectedGraph& g, Vertex cap = 20,
                         HalfRule rule = HalfRule::floor_half);

}  // namespace maxdyn
