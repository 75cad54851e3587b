#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxdyn/graph.hpp"
#include "maxdyn/rational.hpp"
#include "maxdyn/valuation.hpp"

namespace maxdyn {

// raw: all n^n valuations over [n]. quotient: canonical representatives with
// canonicalize applied after every update. Hitting times agree between the
// two because rank compression commutes with the update rule.
enum class ChainMode { raw, quotient };

enum class Arithmetic { automatic, exact_rational, float64 };

using StateIndex = std::uint32_t;

struct ChainModel {
    ChainMode mode = ChainMode::raw;
    Vertex graph_n = 0;
    std::vector<Valuation> states;
    // Aggregated transitions per state: (target, multiplicity); the
    // probability is multiplicity / graph_n exactly, and each row's
    // multiplicities sum to graph_n.
    std::vector<std::vector<std::pair<StateIndex, std::uint32_t>>> transitions;
    std::vector<StateIndex> absorbing;  // sorted; only transition is a self-loop
    SccDecomposition scc;               // over states, reverse topological order
    std::optional<StateIndex> initial;  // set when built from a start valuation

    std::size_t size() const { return states.size(); }

    // Fills absorbing and scc from the transition table.
    void recompute_structure();
};

// Full chain over every valuation (or canonical class). cap bounds the state
// count, checked before construction.
ChainModel build_chain(const DirectedGraph& g, ChainMode mode, std::size_t cap = 50000);

// Restriction to the states reachable from f0; enough for hitting times from
// a fixed start and usually far smaller than the full chain.
ChainModel build_chain_from(const DirectedGraph& g, const Valuation& f0, ChainMode mode,
                            std::size_t cap = 50000);

// Maximal SCCs of the chain with no outgoing edges. Eventually every walk is
// trapped in one of these.
std::vector<std::vector<StateIndex>> absorbing_components(const ChainModel& chain);

// Size of the largest absorbing component of the raw chain.
std::size_t period(const DirectedGraph& g, std::size_t cap = 50000);

struct HittingTimes {
    bool exact = false;
    std::vector<Rat> rational;   // populated in exact mode
    std::vector<double> value;   // always populated
    double residual = 0.0;       // max recurrence residual (float mode)
};

// Expected rounds to absorption per state: solves E[x] = 1 + sum_y p(x,y) E[y]
// with E = 0 on absorbing states, SCC by SCC in reverse topological order.
// automatic picks exact rationals for small systems and checked doubles
// beyond. Throws NonAbsorbingReachability when a state cannot be absorbed.
HittingTimes solve_hitting_times(const ChainModel& chain,
                                 Arithmetic arithmetic = Arithmetic::automatic);

struct ConvergenceTime {
    bool exact = false;
    Rat rational;   // valid in exact mode
    double value = 0.0;
    std::size_t chain_states = 0;
};

ConvergenceTime exact_convergence_time(const DirectedGraph& g, const Valuation& f,
                                       std::size_t cap = 50000,
                                       ChainMode mode = ChainMode::quotient,
                                       Arithmetic arithmetic = Arithmetic::automatic);

struct HittingTimeReport {
    bool exact = false;
    std::vector<double> value;   // per canonical state
    std::vector<Rat> rational;   // exact mode only
    std::size_t worst_state = 0;
    double worst_value = 0.0;
    Rat worst_rational;
    Valuation worst_valuation;
    std::size_t chain_states = 0;
};

// Maximum of the expected absorption time over canonical valuation classes
// (quotient chain), with the maximising valuation.
HittingTimeReport worst_case_convergence_time(const DirectedGraph& g, std::size_t cap = 50000,
                                              Arithmetic arithmetic = Arithmetic::automatic);

// True iff a constant valuation is reachable from f in the chain.
bool verify_path_to_constant(const DirectedGraph& g, const Valuation& f,
                             std::size_t cap = 50000);

std::string chain_to_json(const ChainModel& chain);

}  // namespace maxdyn
