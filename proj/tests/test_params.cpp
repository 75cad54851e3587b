#include <cmath>
#include <functional>

#include "doctest.h"
#include "maxdyn/errors.hpp"
#include "maxdyn/params.hpp"
#include "testutil.hpp"

using namespace maxdyn;

namespace {

// Brute-force shortest simple cycle through v (DFS over simple paths).
Vertex shortest_cycle_through(const DirectedGraph& g, Vertex v) {
    Vertex best = 0;
    std::vector<bool> on_path(g.n(), false);
    std::function<void(Vertex, Vertex)> dfs = [&](Vertex u, Vertex depth) {
        for (Vertex w : g.out(u)) {
            if (w == v) {
                if (best == 0 || depth + 1 < best) best = depth + 1;
            } else if (!on_path[w] && (best == 0 || depth + 1 < best)) {
                on_path[w] = true;
                dfs(w, depth + 1);
                on_path[w] = false;
            }
        }
    };
    on_path[v] = true;
    dfs(v, 0);
    return best;
}

}  // namespace

TEST_CASE("vertex expansion examples") {
    ExpansionResult k4 = vertex_expansion_out(generate(GraphFamily::complete, 4));
    CHECK(k4.value == Rat(1));
    CHECK(k4.witness.size() == 2);
    CHECK(k4.witness == VertexSet({0, 1}));  // smallest |A|, then lexicographic

    ExpansionResult p6 = vertex_expansion_out(generate(GraphFamily::path, 6));
    CHECK(p6.value == Rat(BigInt(1), BigInt(3)));
    CHECK(p6.witness == VertexSet({0, 1, 2}));

    // undirected graphs: both directions agree
    DirectedGraph p5 = generate(GraphFamily::path, 5);
    CHECK(vertex_expansion_out(p5).value == vertex_expansion_in(p5).value);

    DirectedGraph c4 = generate(GraphFamily::dicycle, 4);
    CHECK(vertex_expansion_out(c4).value == Rat(BigInt(1), BigInt(2)));
    CHECK(vertex_expansion_in(c4).value == Rat(BigInt(1), BigInt(2)));

    // two disjoint bidirected edges: expansion 0 detects the disconnection
    DirectedGraph split =
        DirectedGraph::from_edge_list(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    CHECK(vertex_expansion_out(split).value == Rat(0));

    // the in-star: not strongly connected, both expansions vanish
    DirectedGraph star = DirectedGraph::from_edge_list(4, {{1, 0}, {2, 0}, {3, 0}});
    CHECK(vertex_expansion_out(star).value == Rat(0));
    CHECK(vertex_expansion_in(star).value == Rat(0));

    // strongly connected digraph where the two directions genuinely differ
    DirectedGraph skew = DirectedGraph::from_edge_list(
        6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 5}, {2, 1}, {2, 3}, {2, 5}, {3, 0},
            {3, 5}, {4, 0}, {4, 3}, {4, 5}, {5, 2}});
    REQUIRE(is_strongly_connected(skew));
    CHECK(vertex_expansion_out(skew).value == Rat(BigInt(1), BigInt(3)));
    CHECK(vertex_expansion_in(skew).value == Rat(BigInt(1), BigInt(2)));

    CHECK_THROWS_AS(vertex_expansion_out(generate(GraphFamily::path, 24)), CapExceeded);
}

TEST_CASE("expansion bounds on strongly connected graphs") {
    RngStream rng(83);
    for (int i = 0; i < 40; ++i) {
        Vertex n = static_cast<Vertex>(2 + rng.next_below(13));
        DirectedGraph g = random_strongly_connected(n, 0.4, rng);
        Rat phi = vertex_expansion_out(g).value;
        CHECK(phi >= Rat(BigInt(2), BigInt(n)));
        CHECK(phi <= Rat(5));
    }
}

TEST_CASE("half rule flag") {
    // odd n: the integer constraint makes both readings agree on floor(n/2)
    DirectedGraph p5 = generate(GraphFamily::path, 5);
    CHECK(vertex_expansion_out(p5, 20, HalfRule::floor_half).value ==
          Rat(BigInt(1), BigInt(2)));
    // ceil_half admits |A| = 3 and the end segment {0,1,2}
    CHECK(vertex_expansion_out(p5, 20, HalfRule::ceil_half).value ==
          Rat(BigInt(1), BigInt(3)));
}

TEST_CASE("orbit") {
    CHECK(orbit(generate(GraphFamily::path, 7)).value == 2);
    CHECK(orbit(generate(GraphFamily::complete, 6)).value == 2);
    for (Vertex n : {3, 4, 5, 8}) {
        CHECK(orbit(generate(GraphFamily::dicycle, n)).value == n);
    }
    CHECK_THROWS_AS(orbit(testutil::out_star_3()), NotStronglyConnected);

    // shortest-cycle formula against the brute-force cycle search
    std::size_t mismatches = 0;
    for (Vertex n = 2; n <= 4; ++n) {
        testutil::for_each_strongly_connected(n, [&](const DirectedGraph& g) {
            Vertex expected = 0;
            for (Vertex v = 0; v < g.n(); ++v) {
                expected = std::max(expected, shortest_cycle_through(g, v));
            }
            if (orbit(g).value != expected) ++mismatches;
        });
    }
    RngStream rng(89);
    for (int i = 0; i < 60; ++i) {
        Vertex n = static_cast<Vertex>(5 + rng.next_below(2));  // n in {5, 6}
        DirectedGraph g = random_strongly_connected(n, 0.35, rng);
        Vertex expected = 0;
        for (Vertex v = 0; v < g.n(); ++v) {
            expected = std::max(expected, shortest_cycle_through(g, v));
        }
        if (orbit(g).value != expected) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == Rat(0));
    CHECK(harmonic(1) == Rat(1));
    CHECK(harmonic(2) == Rat(BigInt(3), BigInt(2)));
    CHECK(harmonic(4) == Rat(BigInt(25), BigInt(12)));

    // n H_{n-2} bracketed by [0.868 n ln n, 2 n ln n] for n >= 10
    for (std::uint64_t n = 10; n <= 200; ++n) {
        double value = static_cast<double>(n) * rat_to_double(harmonic(n - 2));
        double nlogn = static_cast<double>(n) * std::log(static_cast<double>(n));
        CHECK(value >= 0.868 * nlogn);
        CHECK(value <= 2.0 * nlogn);
    }
}

TEST_CASE("gamblers ruin") {
    CHECK(gamblers_ruin_closed(10, 2) == Rat(10));
    CHECK(gamblers_ruin_closed(10, 3) == Rat(30));
    CHECK(gamblers_ruin_closed(2, 2) == Rat(2));

    auto e = gamblers_ruin_solve(10, 3);
    REQUIRE(e.size() == 3);
    CHECK(e[0] == Rat(30));
    CHECK(e[1] == Rat(20));
    CHECK(e[2] == Rat(0));

    for (std::uint64_t n : {2, 7, 50}) {
        auto two = gamblers_ruin_solve(n, 2);
        CHECK(two[0] == Rat(BigInt(n)));
        CHECK(two[1] == Rat(0));
    }

    // closed form and the stage identity across a sample grid
    for (std::uint64_t n = 2; n <= 12; ++n) {
        for (std::uint64_t b = 2; b <= 8; ++b) {
            auto sol = gamblers_ruin_solve(n, b);
            REQUIRE(sol.size() == b);
            CHECK(sol[0] == gamblers_ruin_closed(n, b));
            CHECK(sol[b - 1] == Rat(0));
            for (std::uint64_t k = 0; k + 2 <= b; ++k) {
                // e_{b-k} = kn/2 + k/(k+1) e_{b-(k+1)}
                Rat lhs = sol[b - k - 1];
                Rat rhs = Rat(BigInt(k * n), BigInt(2)) +
                          Rat(BigInt(k), BigInt(k + 1)) * sol[b - k - 2];
                CHECK(lhs == rhs);
            }
        }
    }

    CHECK_THROWS_AS(gamblers_ruin_solve(1, 3), DomainError);
    CHECK_THROWS_AS(gamblers_ruin_closed(5, 1), DomainError);
}

TEST_CASE("bound_report") {
    ParamReport k6 = bound_report(generate(GraphFamily::complete, 6));
    CHECK(k6.phi_out == Rat(1));
    CHECK(k6.orbit_value == 2);
    CHECK(k6.bound_strongly_connected ==
          doctest::Approx(6.0 * 4.0 + 6.0 * std::log(6.0)));

    ParamReport p6 = bound_report(generate(GraphFamily::path, 6));
    CHECK(p6.phi_out == Rat(BigInt(1), BigInt(3)));
    CHECK(p6.orbit_value == 2);
    CHECK(p6.min_out_degree == 1);

    ParamReport c5 = bound_report(generate(GraphFamily::dicycle, 5));
    CHECK(c5.orbit_value == 5);
    CHECK(c5.phi_out == Rat(BigInt(1), BigInt(2)));
    CHECK(c5.phi_in == Rat(BigInt(1), BigInt(2)));
    CHECK(c5.phi_prime == Rat(BigInt(1), BigInt(2)));

    // disconnected: zero expansion, infinite shape-only bounds
    DirectedGraph split =
        DirectedGraph::from_edge_list(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    ParamReport s = bound_report(split);
    CHECK(s.phi_prime == Rat(0));
    CHECK(std::isinf(s.bound_undirected));
    CHECK_FALSE(s.strongly_connected);
}
