#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxdyn/graph.hpp"
#include "maxdyn/rng.hpp"
#include "maxdyn/valuation.hpp"

namespace maxdyn {

// One update: vertex v takes the maximum over its out-neighbours (which may
// be smaller than its current value); vertices without out-neighbours keep
// their value. Everything else is unchanged.
Valuation step(const DirectedGraph& g, const Valuation& f, Vertex v);

// Uniform vertex choice through the stream, then step.
std::pair<Vertex, Valuation> random_step(const DirectedGraph& g, const Valuation& f,
                                         RngStream& rng);

// Fixpoint test: no single update changes f. Works for weakly connected
// graphs too, where absorbing valuations need not be constant.
bool is_absorbing(const DirectedGraph& g, const Valuation& f);

// Vertices holding the maximum that have a neighbour also holding it.
// Requires the bidirected (undirected) encoding.
VertexSet strong_edge_set(const DirectedGraph& g, const Valuation& f);

// Vertices of the max-value subgraph H that lie on a cycle of H, plus those
// with an H-path into such a cycle.
VertexSet strong_cycle_set(const DirectedGraph& g, const Valuation& f);

// Size of the strong edge set generalised to digraphs: vertices on
// max-valued 2-cycles. Coincides with |strong_edge_set| when undirected.
std::size_t strong_pair_count(const DirectedGraph& g, const Valuation& f);

struct TrajectoryRound {
    std::uint64_t t = 0;
    std::optional<Vertex> chosen;  // empty for the initial record (t = 0)
    std::uint64_t valuation_digest = 0;
    std::optional<Valuation> valuation;  // kept only below the size threshold
    std::size_t strong_edge_count = 0;   // g_t
    std::size_t strong_cycle_count = 0;  // h_t
    Value max = 0;
};

struct Trajectory {
    std::uint64_t seed = 0;
    std::vector<TrajectoryRound> rounds;  // rounds[0] is the initial state
    std::optional<std::uint64_t> converged_at;
    bool truncated = false;
    Valuation final;
};

struct SimulateOptions {
    std::uint64_t max_rounds = 0;         // 0: use 50 * n^2
    bool record_rounds = true;
    bool record_potentials = true;
    Vertex full_valuation_threshold = 16;  // keep full valuations only when n <= this
};

std::uint64_t default_max_rounds(Vertex n);

Trajectory simulate(const DirectedGraph& g, const Valuation& f0, RngStream& rng,
                    const SimulateOptions& options = {});

// Apply a forced vertex sequence instead of random choices.
Trajectory replay_schedule(const DirectedGraph& g, const Valuation& f0,
                           std::span<const Vertex> schedule,
                           const SimulateOptions& options = {});

// Update rounds until absorption without recording; the Monte Carlo path.
std::uint64_t simulate_rounds(const DirectedGraph& g, const Valuation& f0, RngStream& rng,
                              std::uint64_t max_rounds, bool& truncated);

// The vertex sequence from the period proof: concatenated k-boundary levels
// of argmax(f) taken in the dual graph. Replaying it always ends at the
// constant valuation of max_value(f) after exactly n - |argmax| steps.
std::vector<Vertex> constructive_schedule(const DirectedGraph& g, const Valuation& f);

struct MaxMinChain {
    std::vector<Vertex> cycle;  // rotated so the smallest vertex id is first
    std::vector<Vertex> chain;  // consecutive max-valued vertices within the cycle
};

// Diagnostic only: among the shortest cycles through a max-valued vertex,
// pick one whose run of max-valued vertices is longest. Cycle enumeration is
// brute force and aborts once cycle_budget candidate cycles were generated.
MaxMinChain max_min_chain(const DirectedGraph& g, const Valuation& f,
                          std::uint64_t cycle_budget = 1'000'000);

// Incremental engine behind simulate/simulate_rounds: caches the
// out-neighbourhood maximum per vertex so absorbing checks are O(1).
class UpdateEngine {
public:
    UpdateEngine(const DirectedGraph& g, const Valuation& f0);

    bool absorbing() const { return unsatisfied_ == 0; }
    const std::vector<Value>& values() const { return f_; }
    Value value(Vertex v) const { return f_[v]; }

    // Applies the update rule at v; returns true when the value changed.
    bool apply(Vertex v);

private:
    void refresh(Vertex w);

    const DirectedGraph& g_;
    std::vector<Value> f_;
    std::vector<Value> max_out_;     // 0 for vertices without out-neighbours
    std::vector<bool> unsatisfied_flag_;
    std::size_t unsatisfied_ = 0;
};

// JSON-lines export, one record {t, v, g, h, max} per round; config_header
// becomes the first line when non-empty.
std::string trajectory_to_jsonl(const Trajectory& trajectory,
                                const std::string& config_header = "");

}  // namespace maxdyn
