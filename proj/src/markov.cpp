#include "maxdyn/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "maxdyn/dynamics.hpp"
#include "maxdyn/errors.hpp"

namespace maxdyn {

namespace {

struct ValuationHash {
    std::size_t operator()(const Valuation& f) const {
        return static_cast<std::size_t>(digest(f));
    }
};

using StateMap = std::unordered_map<Valuation, StateIndex, ValuationHash>;

void check_raw_cap(Vertex n, std::size_t cap) {
    std::size_t count = 1;
    for (Vertex i = 0; i < n; ++i) {
        if (count > cap) break;
        count *= n;
    }
    if (count > cap) {
        throw CapExceeded("chain cap exceeded: " + std::to_string(n) + "^" + std::to_string(n) +
                          " raw states > " + std::to_string(cap));
    }
}

// Aggregate the n per-vertex updates of one state into (target, multiplicity)
// rows; multiplicities sum to n by construction.
std::vector<std::pair<StateIndex, std::uint32_t>> transitions_of(
    const DirectedGraph& g, const Valuation& f, ChainMode mode,
    const std::function<StateIndex(Valuation&&)>& intern) {
    std::vector<std::pair<StateIndex, std::uint32_t>> row;
    for (Vertex v = 0; v < g.n(); ++v) {
        Valuation target = step(g, f, v);
        if (mode == ChainMode::quotient) target = canonicalize(target);
        StateIndex idx = intern(std::move(target));
        auto it = std::find_if(row.begin(), row.end(),
                               [idx](const auto& e) { return e.first == idx; });
        if (it == row.end()) {
            row.emplace_back(idx, 1);
        } else {
            ++it->second;
        }
    }
    std::sort(row.begin(), row.end());
    return row;
}

DirectedGraph chain_digraph(const ChainModel& chain) {
    // Self-loops dropped; SCC structure is unaffected.
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (StateIndex i = 0; i < chain.size(); ++i) {
        for (const auto& [target, count] : chain.transitions[i]) {
            if (target != i) edges.emplace_back(i, target);
        }
    }
    return DirectedGraph::from_edge_list(static_cast<Vertex>(chain.size()), edges);
}

}  // namespace

void ChainModel::recompute_structure() {
    absorbing.clear();
    for (StateIndex i = 0; i < size(); ++i) {
        const auto& row = transitions[i];
        if (row.size() == 1 && row[0].first == i) {
            absorbing.push_back(i);
        }
    }
    scc = maxdyn::scc(chain_digraph(*this));
}

ChainModel build_chain(const DirectedGraph& g, ChainMode mode, std::size_t cap) {
    const Vertex n = g.n();
    ChainModel chain;
    chain.mode = mode;
    chain.graph_n = n;

    if (mode == ChainMode::raw) {
        check_raw_cap(n, cap);
        // Odometer over [1, n]^n in lexicographic order.
        std::vector<Value> values(n, 1);
        for (;;) {
            chain.states.emplace_back(values);
            Vertex pos = n;
            while (pos > 0 && values[pos - 1] == static_cast<Value>(n)) {
                values[pos - 1] = 1;
                --pos;
            }
            if (pos == 0) break;
            ++values[pos - 1];
        }
    } else {
        std::uint64_t classes = canonical_class_count(n);
        if (classes > cap) {
            throw CapExceeded("chain cap exceeded: " + std::to_string(classes) +
                              " canonical states > " + std::to_string(cap));
        }
        for_each_canonical(
            n, [&](const Valuation& f) { chain.states.push_back(f); }, n);
    }

    StateMap index;
    index.reserve(chain.size() * 2);
    for (StateIndex i = 0; i < chain.size(); ++i) index.emplace(chain.states[i], i);
    auto intern = [&](Valuation&& f) -> StateIndex {
        auto it = index.find(f);
        if (it == index.end()) throw DomainError("chain state table is incomplete");
        return it->second;
    };

    chain.transitions.reserve(chain.size());
    for (StateIndex i = 0; i < chain.size(); ++i) {
        chain.transitions.push_back(transitions_of(g, chain.states[i], mode, intern));
    }
    chain.recompute_structure();
    return chain;
}

ChainModel build_chain_from(const DirectedGraph& g, const Valuation& f0, ChainMode mode,
                            std::size_t cap) {
    validate_valuation(f0, g.n());
    ChainModel chain;
    chain.mode = mode;
    chain.graph_n = g.n();

    Valuation start = mode == ChainMode::quotient ? canonicalize(f0) : f0;
    StateMap index;
    chain.states.push_back(start);
    index.emplace(std::move(start), 0);
    chain.initial = 0;

    auto intern = [&](Valuation&& f) -> StateIndex {
        auto it = index.find(f);
        if (it != index.end()) return it->second;
        if (chain.states.size() >= cap) {
            throw CapExceeded("chain cap exceeded while exploring from start valuation (cap " +
                              std::to_string(cap) + ")");
        }
        StateIndex idx = static_cast<StateIndex>(chain.states.size());
        chain.states.push_back(f);
        index.emplace(std::move(f), idx);
        return idx;
    };

    // BFS over the reachable states; transitions are filled in index order
    // behind the frontier.
    for (StateIndex i = 0; i < chain.states.size(); ++i) {
        Valuation current = chain.states[i];  // copy: states vector may grow
        chain.transitions.push_back(transitions_of(g, current, mode, intern));
    }
    chain.recompute_structure();
    return chain;
}

std::vector<std::vector<StateIndex>> absorbing_components(const ChainModel& chain) {
    const SccDecomposition& comps = chain.scc;
    std::vector<bool> has_out(comps.components.size(), false);
    for (auto [from, to] : comps.condensation_edges) has_out[from] = true;
    std::vector<std::vector<StateIndex>> result;
    for (std::size_t c = 0; c < comps.components.size(); ++c) {
        if (!has_out[c]) {
            std::vector<StateIndex> comp(comps.components[c].members().begin(),
                                         comps.components[c].members().end());
            result.push_back(std::move(comp));
        }
    }
    return result;
}

std::size_t period(const DirectedGraph& g, std::size_t cap) {
    ChainModel chain = build_chain(g, ChainMode::raw, cap);
    std::size_t largest = 0;
    for (const auto& comp : absorbing_components(chain)) {
        largest = std::max(largest, comp.size());
    }
    return largest;
}

namespace {

// Dense Gaussian elimination over one SCC, with the already-solved
// downstream expectations folded into the right-hand side.
template <typename Scalar>
void solve_component(const ChainModel& chain, const std::vector<StateIndex>& members,
                     std::vector<Scalar>& expectation, const std::vector<bool>& solved,
                     const Scalar& one_over_n) {
    const std::size_t m = members.size();
    std::vector<int> local(chain.size(), -1);
    for (std::size_t i = 0; i < m; ++i) local[members[i]] = static_cast<int>(i);

    std::vector<std::vector<Scalar>> a(m, std::vector<Scalar>(m + 1, Scalar(0)));
    for (std::size_t i = 0; i < m; ++i) {
        a[i][i] = Scalar(1);
        a[i][m] = Scalar(1);
        for (const auto& [target, count] : chain.transitions[members[i]]) {
            Scalar p = Scalar(static_cast<int>(count)) * one_over_n;
            if (local[target] >= 0) {
                a[i][static_cast<std::size_t>(local[target])] -= p;
            } else {
                if (!solved[target]) {
                    throw DomainError("hitting time solve visited an unsolved state");
                }
                a[i][m] += p * expectation[target];
            }
        }
    }

    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        if constexpr (std::is_same_v<Scalar, double>) {
            for (std::size_t r = col + 1; r < m; ++r) {
                if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
            }
        } else {
            while (pivot < m && a[pivot][col] == Scalar(0)) ++pivot;
            if (pivot == m) throw DomainError("singular hitting-time system");
        }
        std::swap(a[col], a[pivot]);
        const Scalar diag = a[col][col];
        if (diag == Scalar(0)) throw DomainError("singular hitting-time system");
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col] == Scalar(0)) continue;
            Scalar factor = a[r][col] / diag;
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    for (std::size_t i = 0; i < m; ++i) expectation[members[i]] = a[i][m] / a[i][i];
}

template <typename Scalar>
std::vector<Scalar> solve_all(const ChainModel& chain, const Scalar& one_over_n) {
    const std::size_t count = chain.size();
    std::vector<Scalar> expectation(count, Scalar(0));
    std::vector<bool> solved(count, false);
    std::vector<bool> absorbing(count, false);
    for (StateIndex s : chain.absorbing) {
        absorbing[s] = true;
        solved[s] = true;
    }

    // Tarjan order is reverse topological: successors of a component carry
    // smaller indices, so a single forward pass suffices.
    for (const VertexSet& comp : chain.scc.components) {
        std::vector<StateIndex> members(comp.members().begin(), comp.members().end());
        if (members.size() == 1 && absorbing[members[0]]) continue;
        solve_component(chain, members, expectation, solved, one_over_n);
        for (StateIndex s : members) solved[s] = true;
    }
    return expectation;
}

void check_absorption_reachable(const ChainModel& chain) {
    std::vector<bool> reaches(chain.size(), false);
    std::vector<std::vector<StateIndex>> reverse(chain.size());
    for (StateIndex i = 0; i < chain.size(); ++i) {
        for (const auto& [target, count] : chain.transitions[i]) {
            if (target != i) reverse[target].push_back(i);
        }
    }
    std::queue<StateIndex> queue;
    for (StateIndex s : chain.absorbing) {
        reaches[s] = true;
        queue.push(s);
    }
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop();
        for (StateIndex p : reverse[s]) {
            if (!reaches[p]) {
                reaches[p] = true;
                queue.push(p);
            }
        }
    }
    for (StateIndex i = 0; i < chain.size(); ++i) {
        if (!reaches[i]) {
            throw NonAbsorbingReachability(
                "state " + format_valuation(chain.states[i]) +
                " cannot reach an absorbing state; its expectation is infinite");
        }
    }
}

constexpr std::size_t kRationalAutoLimit = 600;
constexpr std::size_t kDenseComponentLimit = 4000;
constexpr double kResidualTolerance = 1e-10;

}  // namespace

HittingTimes solve_hitting_times(const ChainModel& chain, Arithmetic arithmetic) {
    check_absorption_reachable(chain);

    std::size_t largest_component = 0;
    for (const auto& comp : chain.scc.components) {
        largest_component = std::max(largest_component, comp.size());
    }
    if (largest_component > kDenseComponentLimit) {
        throw CapExceeded("hitting-time solve: chain SCC of size " +
                          std::to_string(largest_component) + " exceeds the dense solver limit");
    }

    bool exact = arithmetic == Arithmetic::exact_rational ||
                 (arithmetic == Arithmetic::automatic &&
                  chain.size() - chain.absorbing.size() <= kRationalAutoLimit);

    HittingTimes result;
    result.exact = exact;
    if (exact) {
        result.rational = solve_all<Rat>(chain, Rat(BigInt(1), BigInt(chain.graph_n)));
        result.value.reserve(chain.size());
        for (const Rat& r : result.rational) result.value.push_back(rat_to_double(r));
        // The defining recurrence must hold with zero residual.
        for (StateIndex i = 0; i < chain.size(); ++i) {
            if (std::binary_search(chain.absorbing.begin(), chain.absorbing.end(), i)) continue;
            Rat rhs(BigInt(1), BigInt(1));
            for (const auto& [target, count] : chain.transitions[i]) {
                rhs += Rat(BigInt(count), BigInt(chain.graph_n)) * result.rational[target];
            }
            if (rhs != result.rational[i]) {
                throw DomainError("exact hitting times violate the defining recurrence");
            }
        }
    } else {
        result.value = solve_all<double>(chain, 1.0 / chain.graph_n);
        double residual = 0.0;
        for (StateIndex i = 0; i < chain.size(); ++i) {
            if (std::binary_search(chain.absorbing.begin(), chain.absorbing.end(), i)) continue;
            double rhs = 1.0;
            for (const auto& [target, count] : chain.transitions[i]) {
                rhs += (static_cast<double>(count) / chain.graph_n) * result.value[target];
            }
            residual = std::max(residual, std::abs(rhs - result.value[i]));
        }
        result.residual = residual;
        if (residual >= kResidualTolerance) {
            throw DomainError("float hitting-time solve residual " + std::to_string(residual) +
                              " exceeds tolerance");
        }
    }
    return result;
}

ConvergenceTime exact_convergence_time(const DirectedGraph& g, const Valuation& f,
                                       std::size_t cap, ChainMode mode,
                                       Arithmetic arithmetic) {
    ChainModel chain = build_chain_from(g, f, mode, cap);
    HittingTimes times = solve_hitting_times(chain, arithmetic);
    ConvergenceTime result;
    result.exact = times.exact;
    result.chain_states = chain.size();
    const StateIndex start = *chain.initial;
    result.value = times.value[start];
    if (times.exact) result.rational = times.rational[start];
    return result;
}

HittingTimeReport worst_case_convergence_time(const DirectedGraph& g, std::size_t cap,
                                              Arithmetic arithmetic) {
    ChainModel chain = build_chain(g, ChainMode::quotient, cap);
    HittingTimes times = solve_hitting_times(chain, arithmetic);

    HittingTimeReport report;
    report.exact = times.exact;
    report.value = times.value;
    report.rational = times.rational;
    report.chain_states = chain.size();
    std::size_t best = 0;
    if (times.exact) {
        for (std::size_t i = 1; i < chain.size(); ++i) {
            if (times.rational[i] > times.rational[best]) best = i;
        }
        report.worst_rational = times.rational[best];
    } else {
        for (std::size_t i = 1; i < chain.size(); ++i) {
            if (times.value[i] > times.value[best]) best = i;
        }
    }
    report.worst_state = best;
    report.worst_value = times.value[best];
    report.worst_valuation = chain.states[best];
    return report;
}

bool verify_path_to_constant(const DirectedGraph& g, const Valuation& f, std::size_t cap) {
    // The quotient chain reaches the canonical constant class iff the raw
    // chain reaches a constant valuation (updates commute with rank
    // compression), and it is far smaller.
    ChainModel chain = build_chain_from(g, f, ChainMode::quotient, cap);
    const Valuation target = Valuation::constant(g.n(), 1);
    for (const Valuation& state : chain.states) {
        if (state == target) return true;
    }
    return false;
}

std::string chain_to_json(const ChainModel& chain) {
    std::ostringstream out;
    out << "{\"mode\":\"" << (chain.mode == ChainMode::raw ? "raw" : "quotient") << "\"";
    out << ",\"n\":" << chain.graph_n;
    out << ",\"states\":[";
    for (StateIndex i = 0; i < chain.size(); ++i) {
        if (i) out << ',';
        out << '[';
        const Valuation& f = chain.states[i];
        for (Vertex v = 0; v < f.size(); ++v) {
            if (v) out << ',';
            out << f[v];
        }
        out << ']';
    }
    out << "],\"transitions\":[";
    bool first = true;
    for (StateIndex i = 0; i < chain.size(); ++i) {
        for (const auto& [target, count] : chain.transitions[i]) {
            if (!first) out << ',';
            first = false;
            out << '[' << i << ',' << target << ',' << count << ',' << chain.graph_n << ']';
        }
    }
    out << "],\"absorbing\":[";
    for (std::size_t i = 0; i < chain.absorbing.size(); ++i) {
        if (i) out << ',';
        out << chain.absorbing[i];
    }
    out << "]}";
    return out.str();
}

}  // namespace maxdyn
