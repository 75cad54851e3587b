#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maxdyn/graph.hpp"
#include "maxdyn/rng.hpp"
#include "maxdyn/stats.hpp"
#include "maxdyn/valuation.hpp"

namespace maxdyn {

struct McReport {
    std::uint64_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double q50 = 0.0, q90 = 0.0, q99 = 0.0;
    std::uint64_t truncated_count = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t max_rounds = 0;
    // With truncated trials the mean only bounds E[rounds] from below.
    bool mean_is_lower_bound = false;
};

// Independent trials with seeds derived from (master_seed, trial index);
// results are identical for any thread count. max_rounds = 0 uses 50 n^2.
McReport mc_convergence(const DirectedGraph& g, const Valuation& f, std::uint64_t trials,
                        std::uint64_t max_rounds, std::uint64_t master_seed,
                        unsigned threads = 1);

struct WorstCaseStrategy {
    bool enumerate = true;       // sweep all canonical classes
    std::uint64_t samples = 0;   // used when enumerate is false
    std::uint64_t class_cap = 50000;
};

struct WorstCaseSearch {
    Valuation maximizer;
    McReport report;
    std::uint64_t candidates = 0;
};

WorstCaseSearch empirical_worst_case(const DirectedGraph& g, const WorstCaseStrategy& strategy,
                                     std::uint64_t trials, std::uint64_t max_rounds,
                                     std::uint64_t seed, unsigned threads = 1);

struct TailReport {
    double radius = 0.0;          // a = (n/phi) ln(n) n^epsilon
    double phi = 0.0;
    double epsilon = 0.0;
    double mean = 0.0;
    double tail_fraction = 0.0;   // fraction of trials with |rounds - mean| > radius
    double threshold = 0.0;       // max(5/n^(2 eps), 5/sqrt(trials))
    bool pass = false;
    std::uint64_t trials = 0;
};

// Qualitative check of the concentration statement; the paper's constant is
// unspecified, so only the tail decay shape is tested.
TailReport concentration_check(const DirectedGraph& g, const Valuation& f,
                               std::uint64_t trials, double epsilon, std::uint64_t seed,
                               unsigned threads = 1, std::uint64_t max_rounds = 0);

struct CouplingRecord {
    double q = 0.0;
    std::vector<double> p_used;                 // p_j for the rounds actually played
    std::vector<std::pair<bool, bool>> rounds;  // (Q_j, P'_j)
    std::uint64_t q_first = 0;                  // Q
    std::uint64_t p_first = 0;                  // P' <= Q in every realization
};

// One coupled realization: P'_j = 1 whenever Q_j = 1, and otherwise fires
// with probability (p_j - q)/(1 - q). p_sequence extends by repeating its
// last element.
CouplingRecord coupling_trial(double q, std::span<const double> p_sequence, RngStream& rng);

struct CouplingStudy {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;  // realizations with P' > Q (must be 0)
    double mean_q = 0.0;
    double mean_p_prime = 0.0;
    double mean_p_direct = 0.0;
    TwoSampleChiSquare gof;  // P' sample against a direct P simulation
};

CouplingStudy coupling_study(double q, std::span<const double> p_sequence,
                             std::uint64_t trials, std::uint64_t seed);

struct ScalingRow {
    Vertex n = 0;
    std::uint64_t trials = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double per_n_log_n = 0.0;  // mean / (n ln n)
    double per_n_squared = 0.0;
    double per_reference = 0.0;  // mean / n(n-2) (path) or mean / (n H_{n-2}) (complete)
    std::uint64_t truncated_count = 0;
};

// Start valuation: value 2 on two adjacent vertices (the endpoint pair for
// paths), 1 elsewhere.
std::vector<ScalingRow> scaling_study(GraphFamily family, std::span<const Vertex> n_values,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned threads = 1);

// The two-adjacent-2s valuation used by the scaling study.
Valuation adjacent_pair_start(const DirectedGraph& g);

}  // namespace maxdyn
