#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "maxdyn/dynamics.hpp"
#include "maxdyn/errors.hpp"
#include "testutil.hpp"

using namespace maxdyn;

namespace {

// Definition-level oracle: vertices on an all-max simple cycle, plus those
// with an all-max walk into such a cycle.
VertexSet strong_cycle_oracle(const DirectedGraph& g, const Valuation& f) {
    const Value m = max_value(f);
    const Vertex n = g.n();
    std::vector<bool> on_cycle(n, false);

    // enumerate all simple cycles via DFS restricted to max-valued vertices
    std::vector<Vertex> path;
    std::vector<bool> on_path(n, false);
    std::function<void(Vertex, Vertex)> dfs = [&](Vertex root, Vertex v) {
        for (Vertex u : g.out(v)) {
            if (f[u] != m) continue;
            if (u == root) {
                for (Vertex w : path) on_cycle[w] = true;
            } else if (u > root && !on_path[u]) {
                path.push_back(u);
                on_path[u] = true;
                dfs(root, u);
                on_path[u] = false;
                path.pop_back();
            }
        }
    };
    for (Vertex root = 0; root < n; ++root) {
        if (f[root] != m) continue;
        path.assign(1, root);
        on_path.assign(n, false);
        on_path[root] = true;
        dfs(root, root);
    }

    // close under all-max walks into the cycles
    std::vector<bool> in_set = on_cycle;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex v = 0; v < n; ++v) {
            if (in_set[v] || f[v] != m) continue;
            for (Vertex u : g.out(v)) {
                if (in_set[u] && f[u] == m) {
                    in_set[v] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<Vertex> members;
    for (Vertex v = 0; v < n; ++v) {
        if (in_set[v]) members.push_back(v);
    }
    return VertexSet(members);
}

}  // namespace

TEST_CASE("step follows the update rule") {
    DirectedGraph g = testutil::six_vertex_undirected();
    Valuation f = testutil::six_vertex_valuation();
    // top-right vertex valued 5 sees neighbours {3, 4, 2}
    Valuation after = step(g, f, 4);
    CHECK(after[4] == 4);
    for (Vertex v : {0, 1, 2, 3, 5}) CHECK(after[v] == f[v]);

    // constant valuations are fixed points of every update
    Valuation c = Valuation::constant(6, 3);
    for (Vertex v = 0; v < 6; ++v) CHECK(step(g, c, v) == c);

    // vertices without out-neighbours keep their value
    DirectedGraph star = testutil::out_star_3();
    Valuation h({1, 3, 2});
    CHECK(step(star, h, 1) == h);
    CHECK(step(star, h, 0)[0] == 3);

    CHECK_THROWS_AS(step(g, f, 6), DomainError);
}

TEST_CASE("random_step determinism and uniformity") {
    DirectedGraph single = DirectedGraph::from_edge_list(1, {});
    Valuation one({5});
    RngStream rng(3);
    for (int i = 0; i < 10; ++i) CHECK(random_step(single, one, rng).first == 0);

    DirectedGraph k3 = generate(GraphFamily::complete, 3);
    Valuation f({1, 2, 3});
    std::vector<Vertex> first_run, second_run;
    {
        RngStream a(1234);
        for (int i = 0; i < 50; ++i) first_run.push_back(random_step(k3, f, a).first);
    }
    {
        RngStream b(1234);
        for (int i = 0; i < 50; ++i) second_run.push_back(random_step(k3, f, b).first);
    }
    CHECK(first_run == second_run);

    // frequency oracle on n = 5: each vertex within 0.2 +- 0.01 over 1e5 draws
    DirectedGraph k5 = generate(GraphFamily::complete, 5);
    Valuation f5 = Valuation::constant(5, 1);
    RngStream rng5(777);
    std::vector<std::uint64_t> counts(5, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[random_step(k5, f5, rng5).first];
    for (Vertex v = 0; v < 5; ++v) {
        double freq = static_cast<double>(counts[v]) / draws;
        CHECK(std::abs(freq - 0.2) < 0.01);
    }
}

TEST_CASE("is_absorbing") {
    DirectedGraph k2 = generate(GraphFamily::complete, 2);
    CHECK(is_absorbing(k2, Valuation::constant(2, 4)));
    CHECK_FALSE(is_absorbing(k2, Valuation({1, 2})));

    // weakly connected: the root already matches its children's maximum
    CHECK(is_absorbing(testutil::out_star_3(), Valuation({2, 2, 1})));
    CHECK_FALSE(is_absorbing(testutil::out_star_3(), Valuation({1, 2, 1})));

    RngStream rng(5);
    for (Vertex n = 2; n <= 4; ++n) {
        testutil::for_each_strongly_connected(n, [&](const DirectedGraph& g) {
            // absorbing iff constant on strongly connected graphs (exhaustive)
            std::vector<Value> values(n, 1);
            for (;;) {
                Valuation f(values);
                bool constant =
                    std::all_of(values.begin(), values.end(),
                                [&](Value v) { return v == values[0]; });
                REQUIRE(is_absorbing(g, f) == constant);
                Vertex pos = n;
                while (pos > 0 && values[pos - 1] == static_cast<Value>(n)) {
                    values[pos - 1] = 1;
                    --pos;
                }
                if (pos == 0) break;
                ++values[pos - 1];
            }
        });
    }
}

TEST_CASE("UpdateEngine agrees with step") {
    RngStream rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        Vertex n = static_cast<Vertex>(2 + rng.next_below(7));
        DirectedGraph g = testutil::mixed_family_graph(rng.next_u64(), n, rng);
        Valuation f = testutil::random_valuation(g.n(), g.n(), rng);
        UpdateEngine engine(g, f);
        for (int round = 0; round < 60; ++round) {
            REQUIRE(engine.absorbing() == is_absorbing(g, f));
            Vertex v = static_cast<Vertex>(rng.next_below(g.n()));
            f = step(g, f, v);
            engine.apply(v);
            REQUIRE(engine.values() == f.values);
        }
    }
}

TEST_CASE("simulate basics") {
    DirectedGraph k2 = generate(GraphFamily::complete, 2);
    RngStream rng(1);
    Trajectory t = simulate(k2, Valuation::constant(2, 2), rng);
    CHECK(t.converged_at == 0);
    CHECK(t.rounds.size() == 1);  // initial record only
    CHECK_FALSE(t.truncated);

    // K_2 with [1,2]: both possible updates absorb, so always exactly 1 round
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        RngStream r(seed);
        Trajectory run = simulate(k2, Valuation({1, 2}), r);
        CHECK(run.converged_at == 1);
        Valuation final = run.final;
        CHECK((final == Valuation({1, 1}) || final == Valuation({2, 2})));
    }

    // truncation: a 1-round budget cannot absorb [2,2,1,1,1] on P_5
    DirectedGraph p5 = generate(GraphFamily::path, 5);
    RngStream r(9);
    SimulateOptions options;
    options.max_rounds = 1;
    Trajectory cut = simulate(p5, Valuation({2, 2, 1, 1, 1}), r, options);
    CHECK(cut.truncated);
    CHECK_FALSE(cut.converged_at.has_value());

    // round indices are consecutive from 1 after the initial record
    RngStream r2(10);
    Trajectory full = simulate(p5, Valuation({2, 2, 1, 1, 1}), r2);
    for (std::size_t i = 0; i < full.rounds.size(); ++i) {
        CHECK(full.rounds[i].t == i);
        CHECK((i == 0) == !full.rounds[i].chosen.has_value());
    }
    CHECK(full.final == Valuation::constant(5, 2));
}

TEST_CASE("forced replay of the nine-vertex example") {
    DirectedGraph g = testutil::nine_vertex_directed();
    Valuation f0 = testutil::nine_vertex_valuation();
    // forced choices for rounds 1..7
    std::vector<Vertex> forced{0, 2, 7, 6, 8, 6, 3};
    Trajectory t = replay_schedule(g, f0, forced);
    REQUIRE(t.rounds.size() == 8);

    std::vector<std::vector<Value>> expected{
        {6, 5, 4, 3, 2, 1, 5, 2, 3}, {5, 5, 4, 3, 2, 1, 5, 2, 3},
        {5, 5, 5, 3, 2, 1, 5, 2, 3}, {5, 5, 5, 3, 2, 1, 5, 5, 3},
        {5, 5, 5, 3, 2, 1, 3, 5, 3}, {5, 5, 5, 3, 2, 1, 3, 5, 5},
        {5, 5, 5, 3, 2, 1, 5, 5, 5}, {5, 5, 5, 2, 2, 1, 5, 5, 5}};
    std::vector<std::size_t> expected_h{0, 0, 0, 0, 0, 0, 6, 6};
    for (std::size_t i = 0; i < 8; ++i) {
        REQUIRE(t.rounds[i].valuation.has_value());
        CHECK(t.rounds[i].valuation->values == expected[i]);
        CHECK(t.rounds[i].strong_cycle_count == expected_h[i]);
    }
}

TEST_CASE("strong_edge_set") {
    DirectedGraph g = testutil::six_vertex_undirected();
    CHECK(strong_edge_set(g, testutil::six_vertex_valuation()) == VertexSet({0, 1}));
    // raising the odd vertex to a lone maximum empties the set
    CHECK(strong_edge_set(g, Valuation({5, 5, 3, 4, 5, 6})).empty());
    DirectedGraph p3 = generate(GraphFamily::path, 3);
    CHECK(strong_edge_set(p3, Valuation::constant(3, 2)) == VertexSet({0, 1, 2}));
    CHECK_THROWS_AS(strong_edge_set(generate(GraphFamily::dicycle, 3), Valuation({1, 1, 1})),
                    NotUndirected);
}

TEST_CASE("strong_cycle_set") {
    DirectedGraph g = testutil::nine_vertex_directed();
    CHECK(strong_cycle_set(g, testutil::nine_vertex_valuation()).empty());
    Valuation round6({5, 5, 5, 3, 2, 1, 5, 5, 5});
    CHECK(strong_cycle_set(g, round6) == VertexSet({0, 1, 2, 6, 7, 8}));

    // a strong edge is the k = 2 case of a strong cycle
    DirectedGraph p4 = generate(GraphFamily::path, 4);
    Valuation f({2, 2, 1, 1});
    CHECK(strong_cycle_set(p4, f) == strong_edge_set(p4, f));
}

TEST_CASE("strong_cycle_set matches the definition-level oracle") {
    RngStream rng(29);
    std::size_t disagreements = 0;
    for (int i = 0; i < 400; ++i) {
        Vertex n = static_cast<Vertex>(2 + rng.next_below(4));  // n <= 5
        DirectedGraph g = testutil::mixed_family_graph(rng.next_u64(), n, rng);
        Valuation f = testutil::random_valuation(g.n(), 3, rng);
        if (strong_cycle_set(g, f) != strong_cycle_oracle(g, f)) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("potentials are monotone along trajectories") {
    RngStream rng(31);
    std::size_t violations = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Vertex n = static_cast<Vertex>(3 + rng.next_below(8));
        DirectedGraph g = testutil::mixed_family_graph(rng.next_u64(), n, rng);
        Valuation f = testutil::random_valuation(g.n(), g.n(), rng);
        const bool undirected = is_undirected(g);
        VertexSet cycle_set = strong_cycle_set(g, f);
        VertexSet edge_set = undirected ? strong_edge_set(g, f) : VertexSet();
        Value m = max_value(f);
        for (int round = 0; round < 200; ++round) {
            if (is_absorbing(g, f)) break;
            f = random_step(g, f, rng).second;
            VertexSet next_cycle = strong_cycle_set(g, f);
            if (!cycle_set.is_subset_of(next_cycle)) ++violations;
            if (undirected) {
                VertexSet next_edge = strong_edge_set(g, f);
                if (!edge_set.is_subset_of(next_edge)) ++violations;
                if (next_edge != next_cycle) ++violations;  // g_t == h_t when undirected
                edge_set = next_edge;
            }
            if (max_value(f) > m) ++violations;
            m = max_value(f);
            // values on an existing strong cycle never change
            cycle_set = next_cycle;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("values on a strong cycle are frozen") {
    RngStream rng(37);
    std::size_t violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Vertex n = static_cast<Vertex>(3 + rng.next_below(6));
        DirectedGraph g = testutil::mixed_family_graph(rng.next_u64(), n, rng);
        Valuation f = testutil::random_valuation(g.n(), g.n(), rng);
        for (int round = 0; round < 150 && !is_absorbing(g, f); ++round) {
            VertexSet cycle_set = strong_cycle_set(g, f);
            Valuation next = random_step(g, f, rng).second;
            for (Vertex v : cycle_set) {
                if (next[v] != f[v]) ++violations;
            }
            f = next;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("constructive_schedule") {
    // directed 10-vertex example: 3 then 6 vertices, ending all-10
    DirectedGraph g = testutil::ten_vertex_directed();
    Valuation f = testutil::ten_vertex_valuation();
    std::vector<Vertex> schedule = constructive_schedule(g, f);
    REQUIRE(schedule.size() == 9);
    CHECK(VertexSet({schedule[0], schedule[1], schedule[2]}) == VertexSet({1, 2, 3}));
    Trajectory t = replay_schedule(g, f, schedule);
    CHECK(t.final == Valuation::constant(10, 10));
    CHECK(t.converged_at == 9);

    CHECK(constructive_schedule(g, Valuation::constant(10, 3)).empty());

    DirectedGraph p4 = generate(GraphFamily::path, 4);
    CHECK(constructive_schedule(p4, Valuation({2, 1, 1, 1})) ==
          std::vector<Vertex>{1, 2, 3});
    Trajectory tp = replay_schedule(p4, Valuation({2, 1, 1, 1}), std::vector<Vertex>{1, 2, 3});
    CHECK(tp.final == Valuation::constant(4, 2));

    CHECK_THROWS_AS(constructive_schedule(testutil::out_star_3(), Valuation({1, 2, 1})),
                    NotStronglyConnected);
}

TEST_CASE("constructive_schedule reaches the constant valuation in n - |argmax| steps") {
    RngStream rng(53);
    std::size_t failures = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Vertex n = static_cast<Vertex>(2 + rng.next_below(9));
        DirectedGraph g = testutil::mixed_family_graph(rng.next_u64(), n, rng);
        Valuation f = testutil::random_valuation(g.n(), g.n(), rng);
        std::vector<Vertex> schedule = constructive_schedule(g, f);
        if (schedule.size() != g.n() - argmax_set(f).size()) ++failures;
        Valuation current = f;
        for (Vertex v : schedule) current = step(g, current, v);
        if (current != Valuation::constant(g.n(), max_value(f))) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("max_min_chain") {
    // nine-vertex example after round 1: the smallest cycle through a max
    // vertex is the triangle, and only vertex 6 in it holds the maximum
    DirectedGraph g = testutil::nine_vertex_directed();
    Valuation f1({5, 5, 4, 3, 2, 1, 5, 2, 3});
    MaxMinChain result = max_min_chain(g, f1);
    CHECK(VertexSet(result.cycle) == VertexSet({6, 7, 8}));
    CHECK(result.chain == std::vector<Vertex>{6});

    DirectedGraph c3 = generate(GraphFamily::dicycle, 3);
    MaxMinChain constant = max_min_chain(c3, Valuation::constant(3, 1));
    CHECK(constant.chain.size() == 3);
    CHECK(VertexSet(constant.cycle) == VertexSet({0, 1, 2}));

    DirectedGraph k3 = generate(GraphFamily::complete, 3);
    MaxMinChain pair = max_min_chain(k3, Valuation({2, 2, 1}));
    CHECK(VertexSet(pair.cycle) == VertexSet({0, 1}));
    CHECK(pair.chain.size() == 2);

    CHECK_THROWS_AS(max_min_chain(k3, Valuation({2, 2, 1}), 0), BudgetExceeded);
}

TEST_CASE("trajectories keep digests only above the size threshold") {
    DirectedGraph p = generate(GraphFamily::path, 20);
    Valuation f = Valuation::constant(20, 1);
    f.values[0] = 2;
    f.values[1] = 2;
    RngStream rng(4);
    SimulateOptions options;
    options.full_valuation_threshold = 8;
    Trajectory t = simulate(p, f, rng, options);
    REQUIRE(t.rounds.size() >= 2);
    for (const auto& round : t.rounds) {
        CHECK_FALSE(round.valuation.has_value());
        CHECK(round.valuation_digest != 0);
    }
    CHECK(t.final == Valuation::constant(20, 2));
    std::string jsonl = trajectory_to_jsonl(t);
    CHECK(jsonl.find("\"digest\":") != std::string::npos);
    CHECK(jsonl.find("\"valuation\":") == std::string::npos);
}

TEST_CASE("trajectory jsonl export") {
    DirectedGraph k2 = generate(GraphFamily::complete, 2);
    RngStream rng(2);
    Trajectory t = simulate(k2, Valuation({1, 2}), rng);
    std::string jsonl = trajectory_to_jsonl(t, "{\"config\":{}}");
    CHECK(jsonl.find("{\"config\":{}}\n") == 0);
    CHECK(jsonl.find("\"t\":0") != std::string::npos);
    CHECK(jsonl.find("\"v\":null") != std::string::npos);
    CHECK(jsonl.find("\"valuation\":[") != std::string::npos);
}
