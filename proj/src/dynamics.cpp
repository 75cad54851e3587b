#include "maxdyn/dynamics.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "maxdyn/errors.hpp"

namespace maxdyn {

Valuation step(const DirectedGraph& g, const Valuation& f, Vertex v) {
    validate_valuation(f, g.n());
    if (v >= g.n()) throw DomainError("step: vertex out of range");
    Valuation out = f;
    const auto& succ = g.out(v);
    if (!succ.empty()) {
        Value m = 0;
        for (Vertex u : succ) m = std::max(m, f[u]);
        out.values[v] = m;
    }
    return out;
}

std::pair<Vertex, Valuation> random_step(const DirectedGraph& g, const Valuation& f,
                                         RngStream& rng) {
    Vertex v = static_cast<Vertex>(rng.next_below(g.n()));
    return {v, step(g, f, v)};
}

bool is_absorbing(const DirectedGraph& g, const Valuation& f) {
    validate_valuation(f, g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        const auto& succ = g.out(v);
        if (succ.empty()) continue;
        Value m = 0;
        for (Vertex u : succ) m = std::max(m, f[u]);
        if (m != f[v]) return false;
    }
    return true;
}

VertexSet strong_edge_set(const DirectedGraph& g, const Valuation& f) {
    if (!is_undirected(g)) throw NotUndirected();
    validate_valuation(f, g.n());
    const Value m = max_value(f);
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (f[v] != m) continue;
        for (Vertex u : g.out(v)) {
            if (f[u] == m) {
                out.push_back(v);
                break;
            }
        }
    }
    return VertexSet(std::move(out));
}

std::size_t strong_pair_count(const DirectedGraph& g, const Valuation& f) {
    const Value m = max_value(f);
    std::size_t count = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (f[v] != m) continue;
        for (Vertex u : g.out(v)) {
            if (f[u] == m && g.has_edge(u, v)) {
                ++count;
                break;
            }
        }
    }
    return count;
}

VertexSet strong_cycle_set(const DirectedGraph& g, const Valuation& f) {
    validate_valuation(f, g.n());
    const Value m = max_value(f);
    const Vertex n = g.n();

    // Induced subgraph H on the max-valued vertices.
    std::vector<Vertex> max_vertices;
    std::vector<int> h_index(n, -1);
    for (Vertex v = 0; v < n; ++v) {
        if (f[v] == m) {
            h_index[v] = static_cast<int>(max_vertices.size());
            max_vertices.push_back(v);
        }
    }
    std::vector<std::pair<Vertex, Vertex>> h_edges;
    for (Vertex v : max_vertices) {
        for (Vertex u : g.out(v)) {
            if (h_index[u] >= 0) {
                h_edges.emplace_back(static_cast<Vertex>(h_index[v]),
                                     static_cast<Vertex>(h_index[u]));
            }
        }
    }
    DirectedGraph h = DirectedGraph::from_edge_list(
        static_cast<Vertex>(std::max<std::size_t>(max_vertices.size(), 1)), h_edges);
    if (max_vertices.empty()) return VertexSet();

    // Cycles of H are exactly its SCCs of size >= 2 (no self-loops), and
    // condition 2 adds everything with an H-path into one of them.
    SccDecomposition comps = scc(h);
    std::vector<bool> reaches(max_vertices.size(), false);
    for (const VertexSet& comp : comps.components) {
        if (comp.size() >= 2) {
            for (Vertex hv : comp) reaches[hv] = true;
        }
    }
    // Reverse BFS over H edges from the cycle cores.
    std::vector<std::vector<Vertex>> h_in(max_vertices.size());
    for (auto [a, b] : h_edges) h_in[b].push_back(a);
    std::queue<Vertex> queue;
    for (Vertex hv = 0; hv < max_vertices.size(); ++hv) {
        if (reaches[hv]) queue.push(hv);
    }
    while (!queue.empty()) {
        Vertex hv = queue.front();
        queue.pop();
        for (Vertex prev : h_in[hv]) {
            if (!reaches[prev]) {
                reaches[prev] = true;
                queue.push(prev);
            }
        }
    }
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < max_vertices.size(); ++i) {
        if (reaches[i]) out.push_back(max_vertices[i]);
    }
    return VertexSet(std::move(out));
}

UpdateEngine::UpdateEngine(const DirectedGraph& g, const Valuation& f0)
    : g_(g), f_(f0.values), max_out_(g.n(), 0), unsatisfied_flag_(g.n(), false) {
    validate_valuation(f0, g.n());
    for (Vertex v = 0; v < g_.n(); ++v) {
        Value m = 0;
        for (Vertex u : g_.out(v)) m = std::max(m, f_[u]);
        max_out_[v] = m;
        if (!g_.out(v).empty() && m != f_[v]) {
            unsatisfied_flag_[v] = true;
            ++unsatisfied_;
        }
    }
}

void UpdateEngine::refresh(Vertex w) {
    bool now = !g_.out(w).empty() && max_out_[w] != f_[w];
    if (now != unsatisfied_flag_[w]) {
        unsatisfied_flag_[w] = now;
        if (now) ++unsatisfied_; else --unsatisfied_;
    }
}

bool UpdateEngine::apply(Vertex v) {
    if (g_.out(v).empty()) return false;
    const Value next = max_out_[v];
    const Value prev = f_[v];
    if (next == prev) return false;
    f_[v] = next;
    refresh(v);
    for (Vertex w : g_.in(v)) {
        if (next >= max_out_[w]) {
            max_out_[w] = next;
        } else if (prev == max_out_[w]) {
            // v may have been the unique maximum of w's out-neighbourhood
            Value m = 0;
            for (Vertex u : g_.out(w)) m = std::max(m, f_[u]);
            max_out_[w] = m;
        }
        refresh(w);
    }
    return true;
}

std::uint64_t default_max_rounds(Vertex n) {
    // 50 * n^2: well above the O(n^2) worst case.
    return 50ull * n * n;
}

namespace {

Trajectory run_trajectory(const DirectedGraph& g, const Valuation& f0,
                          const SimulateOptions& options, std::uint64_t seed,
                          const std::function<Vertex()>& pick,
                          std::uint64_t round_limit) {
    validate_valuation(f0, g.n());
    Trajectory trajectory;
    trajectory.seed = seed;
    UpdateEngine engine(g, f0);

    const bool keep_full =
        options.record_rounds && g.n() <= options.full_valuation_threshold;
    auto record = [&](std::uint64_t t, std::optional<Vertex> chosen) {
        TrajectoryRound r;
        r.t = t;
        r.chosen = chosen;
        Valuation current(engine.values());
        r.valuation_digest = digest(current);
        if (options.record_potentials) {
            r.strong_edge_count = strong_pair_count(g, current);
            r.strong_cycle_count = strong_cycle_set(g, current).size();
        }
        r.max = max_value(current);
        if (keep_full) r.valuation = std::move(current);
        trajectory.rounds.push_back(std::move(r));
    };

    if (options.record_rounds) record(0, std::nullopt);
    std::uint64_t t = 0;
    while (!engine.absorbing()) {
        if (t >= round_limit) {
            trajectory.truncated = true;
            break;
        }
        ++t;
        Vertex v = pick();
        engine.apply(v);
        if (options.record_rounds) record(t, v);
    }
    if (!trajectory.truncated) trajectory.converged_at = t;
    trajectory.final = Valuation(engine.values());
    return trajectory;
}

}  // namespace

Trajectory simulate(const DirectedGraph& g, const Valuation& f0, RngStream& rng,
                    const SimulateOptions& options) {
    const std::uint64_t limit =
        options.max_rounds ? options.max_rounds : default_max_rounds(g.n());
    return run_trajectory(
        g, f0, options, rng.seed(),
        [&]() { return static_cast<Vertex>(rng.next_below(g.n())); }, limit);
}

Trajectory replay_schedule(const DirectedGraph& g, const Valuation& f0,
                           std::span<const Vertex> schedule, const SimulateOptions& options) {
    std::size_t next = 0;
    // The schedule bounds the run; absorption may come first.
    return run_trajectory(
        g, f0, options, 0, [&]() { return schedule[next++]; },
        static_cast<std::uint64_t>(schedule.size()));
}

std::uint64_t simulate_rounds(const DirectedGraph& g, const Valuation& f0, RngStream& rng,
                              std::uint64_t max_rounds, bool& truncated) {
    UpdateEngine engine(g, f0);
    const Vertex n = g.n();
    std::uint64_t t = 0;
    truncated = false;
    while (!engine.absorbing()) {
        if (t >= max_rounds) {
            truncated = true;
            break;
        }
        ++t;
        engine.apply(static_cast<Vertex>(rng.next_below(n)));
    }
    return t;
}

std::vector<Vertex> constructive_schedule(const DirectedGraph& g, const Valuation& f) {
    validate_valuation(f, g.n());
    if (!is_strongly_connected(g)) throw NotStronglyConnected();
    const VertexSet s = argmax_set(f);
    const std::vector<VertexSet> levels = k_boundary_partition(dual(g), s);
    std::vector<Vertex> schedule;
    schedule.reserve(g.n() - s.size());
    for (std::size_t k = 1; k < levels.size(); ++k) {
        for (Vertex v : levels[k]) schedule.push_back(v);
    }
    return schedule;
}

namespace {

// All shortest distances towards target, i.e. BFS over reversed edges.
std::vector<int> distances_to(const DirectedGraph& g, Vertex target) {
    std::vector<int> dist(g.n(), -1);
    std::queue<Vertex> queue;
    dist[target] = 0;
    queue.push(target);
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop();
        for (Vertex u : g.in(v)) {
            if (dist[u] == -1) {
                dist[u] = dist[v] + 1;
                queue.push(u);
            }
        }
    }
    return dist;
}

}  // namespace

MaxMinChain max_min_chain(const DirectedGraph& g, const Valuation& f,
                          std::uint64_t cycle_budget) {
    validate_valuation(f, g.n());
    if (!is_strongly_connected(g)) throw NotStronglyConnected();
    if (g.n() < 2) throw DomainError("max_min_chain needs n >= 2");

    const Value m = max_value(f);
    std::vector<Vertex> max_vertices;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (f[v] == m) max_vertices.push_back(v);
    }

    // alpha_min: length of the shortest cycle through any max-valued vertex.
    std::size_t alpha_min = g.n() + 1;
    for (Vertex w : max_vertices) {
        std::vector<int> dist = distances_to(g, w);
        for (Vertex u : g.out(w)) {
            if (dist[u] >= 0) {
                alpha_min = std::min(alpha_min, static_cast<std::size_t>(dist[u]) + 1);
            }
        }
    }

    // Enumerate cycles of length alpha_min containing a max-valued vertex.
    // Standard duplicate control: only cycles whose minimum vertex is the
    // DFS root are emitted.
    std::uint64_t candidates = 0;
    MaxMinChain best;
    std::size_t best_chain = 0;
    bool found = false;

    auto longest_max_run = [&](const std::vector<Vertex>& cycle) -> std::vector<Vertex> {
        const std::size_t len = cycle.size();
        std::size_t all = 0;
        for (Vertex v : cycle) all += (f[v] == m);
        if (all == len) return cycle;  // whole cycle is a single chain
        // Longest circular run of max-valued vertices.
        std::size_t best_len = 0, best_start = 0, run = 0;
        for (std::size_t i = 0; i < 2 * len; ++i) {
            if (f[cycle[i % len]] == m) {
                ++run;
                run = std::min(run, len);
                if (run > best_len) {
                    best_len = run;
                    best_start = i + 1 - run;
                }
            } else {
                run = 0;
            }
        }
        std::vector<Vertex> chain;
        for (std::size_t i = 0; i < best_len; ++i) chain.push_back(cycle[(best_start + i) % len]);
        return chain;
    };

    std::vector<Vertex> path;
    std::vector<bool> on_path(g.n(), false);
    auto consider = [&](const std::vector<Vertex>& cycle) {
        if (++candidates > cycle_budget) {
            throw BudgetExceeded("max_min_chain: cycle enumeration exceeded budget " +
                                 std::to_string(cycle_budget));
        }
        bool touches_max = false;
        for (Vertex v : cycle) touches_max |= (f[v] == m);
        if (!touches_max) return;
        std::vector<Vertex> chain = longest_max_run(cycle);
        if (!found || chain.size() > best_chain) {
            found = true;
            best_chain = chain.size();
            best.cycle = cycle;
            best.chain = std::move(chain);
        }
    };

    // Cycles are closed only at the exact target length; vertices below the
    // root are excluded so each cycle is generated once, rooted at its
    // minimum vertex.
    std::function<void(Vertex, Vertex)> dfs_exact = [&](Vertex root, Vertex v) {
        for (Vertex u : g.out(v)) {
            if (u == root && path.size() == alpha_min) {
                consider(path);
            } else if (u > root && !on_path[u] && path.size() < alpha_min) {
                path.push_back(u);
                on_path[u] = true;
                dfs_exact(root, u);
                on_path[u] = false;
                path.pop_back();
            }
        }
    };

    for (Vertex root = 0; root < g.n(); ++root) {
        path.assign(1, root);
        on_path.assign(g.n(), false);
        on_path[root] = true;
        dfs_exact(root, root);
    }
    if (!found) throw DomainError("max_min_chain: no cycle through a max-valued vertex");
    return best;
}

std::string trajectory_to_jsonl(const Trajectory& trajectory,
                                const std::string& config_header) {
    std::ostringstream out;
    if (!config_header.empty()) out << config_header << '\n';
    for (const TrajectoryRound& r : trajectory.rounds) {
        out << "{\"t\":" << r.t << ",\"v\":";
        if (r.chosen) {
            out << *r.chosen;
        } else {
            out << "null";
        }
        out << ",\"g\":" << r.strong_edge_count << ",\"h\":" << r.strong_cycle_count
            << ",\"max\":" << r.max;
        if (r.valuation) {
            out << ",\"valuation\":[";
            for (Vertex v = 0; v < r.valuation->size(); ++v) {
                if (v) out << ',';
                out << (*r.valuation)[v];
            }
            out << ']';
        } else {
            out << ",\"digest\":" << r.valuation_digest;
        }
        out << "}\n";
    }
    return out.str();
}

}  // namespace maxdyn
