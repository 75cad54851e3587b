#include "maxdyn/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "maxdyn/dynamics.hpp"
#include "maxdyn/errors.hpp"
#include "maxdyn/params.hpp"
#include "maxdyn/rational.hpp"

namespace maxdyn {

namespace {

std::vector<std::uint64_t> run_trials(const DirectedGraph& g, const Valuation& f,
                                      std::uint64_t trials, std::uint64_t max_rounds,
                                      std::uint64_t master_seed, unsigned threads,
                                      std::uint64_t& truncated_count) {
    std::vector<std::uint64_t> rounds(trials, 0);
    std::vector<std::uint8_t> truncated(trials, 0);
    auto worker = [&](unsigned tid, unsigned stride) {
        for (std::uint64_t i = tid; i < trials; i += stride) {
            RngStream rng(derive_seed(master_seed, i));
            bool was_truncated = false;
            rounds[i] = simulate_rounds(g, f, rng, max_rounds, was_truncated);
            truncated[i] = was_truncated ? 1 : 0;
        }
    };
    if (threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
        for (auto& th : pool) th.join();
    }
    truncated_count = 0;
    for (std::uint8_t t : truncated) truncated_count += t;
    return rounds;
}

double quantile_nearest_rank(const std::vector<std::uint64_t>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
    return static_cast<double>(sorted[idx]);
}

McReport summarize(std::vector<std::uint64_t> rounds, std::uint64_t truncated_count,
                   std::uint64_t master_seed, std::uint64_t max_rounds) {
    McReport report;
    report.trials = rounds.size();
    report.truncated_count = truncated_count;
    report.master_seed = master_seed;
    report.max_rounds = max_rounds;
    report.mean_is_lower_bound = truncated_count > 0;

    // Exact integer sums keep the aggregation independent of thread count.
    BigInt sum = 0, sum_sq = 0;
    for (std::uint64_t r : rounds) {
        sum += r;
        sum_sq += BigInt(r) * BigInt(r);
    }
    const double n = static_cast<double>(rounds.size());
    report.mean = sum.convert_to<double>() / n;
    if (rounds.size() > 1) {
        const BigInt num = sum_sq * BigInt(rounds.size()) - sum * sum;
        report.variance =
            num.convert_to<double>() / (n * (n - 1.0));
        report.std_error = std::sqrt(report.variance / n);
    }
    std::sort(rounds.begin(), rounds.end());
    report.q50 = quantile_nearest_rank(rounds, 0.50);
    report.q90 = quantile_nearest_rank(rounds, 0.90);
    report.q99 = quantile_nearest_rank(rounds, 0.99);
    return report;
}

}  // namespace

McReport mc_convergence(const DirectedGraph& g, const Valuation& f, std::uint64_t trials,
                        std::uint64_t max_rounds, std::uint64_t master_seed,
                        unsigned threads) {
    if (trials < 1) throw DomainError("mc_convergence needs at least one trial");
    validate_valuation(f, g.n());
    if (max_rounds == 0) max_rounds = default_max_rounds(g.n());
    std::uint64_t truncated_count = 0;
    auto rounds = run_trials(g, f, trials, max_rounds, master_seed, threads, truncated_count);
    return summarize(std::move(rounds), truncated_count, master_seed, max_rounds);
}

WorstCaseSearch empirical_worst_case(const DirectedGraph& g, const WorstCaseStrategy& strategy,
                                     std::uint64_t trials, std::uint64_t max_rounds,
                                     std::uint64_t seed, unsigned threads) {
    const Vertex n = g.n();
    std::vector<Valuation> candidates;
    if (strategy.enumerate) {
        std::uint64_t classes = canonical_class_count(n);
        if (classes > strategy.class_cap) {
            throw CapExceeded("empirical_worst_case: " + std::to_string(classes) +
                              " canonical classes exceed cap " +
                              std::to_string(strategy.class_cap));
        }
        for_each_canonical(n, [&](const Valuation& f) { candidates.push_back(f); }, n);
    } else {
        RngStream rng(derive_seed(seed, 0xDA7A));
        for (std::uint64_t i = 0; i < strategy.samples; ++i) {
            std::vector<Value> values(n);
            for (Vertex v = 0; v < n; ++v) values[v] = rng.next_below(n) + 1;
            candidates.emplace_back(std::move(values));
        }
        if (candidates.empty()) throw DomainError("empirical_worst_case: zero samples");
    }

    WorstCaseSearch best;
    best.candidates = candidates.size();
    bool have = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        McReport report = mc_convergence(g, candidates[i], trials, max_rounds,
                                         derive_seed(seed, i), threads);
        if (!have || report.mean > best.report.mean) {
            have = true;
            best.maximizer = candidates[i];
            best.report = report;
        }
    }
    return best;
}

TailReport concentration_check(const DirectedGraph& g, const Valuation& f,
                               std::uint64_t trials, double epsilon, std::uint64_t seed,
                               unsigned threads, std::uint64_t max_rounds) {
    if (epsilon <= 0.0) throw DomainError("concentration_check needs epsilon > 0");
    validate_valuation(f, g.n());
    if (max_rounds == 0) max_rounds = default_max_rounds(g.n());

    const double phi = rat_to_double(vertex_expansion_out(g).value);
    if (phi <= 0.0) throw NotStronglyConnected("concentration_check needs positive expansion");
    const double n = static_cast<double>(g.n());
    const double radius = (n / phi) * std::log(n) * std::pow(n, epsilon);

    std::uint64_t truncated_count = 0;
    auto rounds = run_trials(g, f, trials, max_rounds, seed, threads, truncated_count);
    double mean = 0.0;
    for (std::uint64_t r : rounds) mean += static_cast<double>(r);
    mean /= static_cast<double>(trials);

    std::uint64_t outside = 0;
    for (std::uint64_t r : rounds) {
        if (std::abs(static_cast<double>(r) - mean) > radius) ++outside;
    }

    TailReport report;
    report.radius = radius;
    report.phi = phi;
    report.epsilon = epsilon;
    report.mean = mean;
    report.trials = trials;
    report.tail_fraction = static_cast<double>(outside) / static_cast<double>(trials);
    report.threshold =
        std::max(5.0 / std::pow(n, 2.0 * epsilon), 5.0 / std::sqrt(static_cast<double>(trials)));
    report.pass = report.tail_fraction <= report.threshold;
    return report;
}

namespace {

double p_at(std::span<const double> p_sequence, std::uint64_t j) {
    if (p_sequence.empty()) throw DomainError("coupling needs a non-empty p sequence");
    return j < p_sequence.size() ? p_sequence[j] : p_sequence.back();
}

void validate_coupling(double q, std::span<const double> p_sequence) {
    if (!(q >= 0.0) || q >= 1.0) throw DomainError("coupling needs 0 <= q < 1");
    for (double p : p_sequence) {
        if (p < q || p > 1.0) throw DomainError("coupling needs q <= p_j <= 1");
    }
}

constexpr std::uint64_t kCouplingRoundCap = 100'000'000;

}  // namespace

CouplingRecord coupling_trial(double q, std::span<const double> p_sequence, RngStream& rng) {
    validate_coupling(q, p_sequence);
    CouplingRecord record;
    record.q = q;
    for (std::uint64_t j = 0;; ++j) {
        if (j >= kCouplingRoundCap) {
            throw DomainError("coupling trial did not terminate (q too small)");
        }
        const double pj = p_at(p_sequence, j);
        const bool q_fires = rng.next_unit() < q;
        // Imitate Q on success; otherwise an extra coin lifts the rate to p_j.
        bool p_fires = q_fires;
        if (!q_fires) {
            const double extra = (pj - q) / (1.0 - q);
            p_fires = rng.next_unit() < extra;
        }
        record.p_used.push_back(pj);
        record.rounds.emplace_back(q_fires, p_fires);
        if (p_fires && record.p_first == 0) record.p_first = j + 1;
        if (q_fires) {
            record.q_first = j + 1;
            break;
        }
    }
    return record;
}

CouplingStudy coupling_study(double q, std::span<const double> p_sequence,
                             std::uint64_t trials, std::uint64_t seed) {
    validate_coupling(q, p_sequence);
    if (trials < 1) throw DomainError("coupling_study needs at least one trial");
    CouplingStudy study;
    study.trials = trials;

    std::vector<std::uint64_t> p_prime_sample(trials), p_direct_sample(trials);
    double sum_q = 0.0, sum_p_prime = 0.0, sum_p_direct = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream rng(derive_seed(seed, 2 * i));
        CouplingRecord record = coupling_trial(q, p_sequence, rng);
        if (record.p_first == 0 || record.p_first > record.q_first) ++study.violations;
        p_prime_sample[i] = record.p_first;
        sum_q += static_cast<double>(record.q_first);
        sum_p_prime += static_cast<double>(record.p_first);

        // Independent direct simulation of the P process for the GOF check.
        RngStream direct(derive_seed(seed, 2 * i + 1));
        std::uint64_t j = 0;
        while (true) {
            if (j >= kCouplingRoundCap) {
                throw DomainError("direct P simulation did not terminate");
            }
            if (direct.next_unit() < p_at(p_sequence, j)) break;
            ++j;
        }
        p_direct_sample[i] = j + 1;
        sum_p_direct += static_cast<double>(j + 1);
    }
    study.mean_q = sum_q / static_cast<double>(trials);
    study.mean_p_prime = sum_p_prime / static_cast<double>(trials);
    study.mean_p_direct = sum_p_direct / static_cast<double>(trials);
    study.gof = two_sample_chi_square(p_prime_sample, p_direct_sample);
    return study;
}

Valuation adjacent_pair_start(const DirectedGraph& g) {
    for (Vertex u = 0; u < g.n(); ++u) {
        for (Vertex v : g.out(u)) {
            Valuation f = Valuation::constant(g.n(), 1);
            f.values[u] = 2;
            f.values[v] = 2;
            return f;
        }
    }
    throw DomainError("graph has no edges");
}

std::vector<ScalingRow> scaling_study(GraphFamily family, std::span<const Vertex> n_values,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned threads) {
    if (family == GraphFamily::dicycle) {
        throw DomainError("scaling_study covers the complete and path families");
    }
    std::vector<ScalingRow> rows;
    for (Vertex n : n_values) {
        DirectedGraph g = generate(family, n);
        Valuation start = adjacent_pair_start(g);
        McReport report =
            mc_convergence(g, start, trials, default_max_rounds(n), derive_seed(seed, n),
                           threads);
        ScalingRow row;
        row.n = n;
        row.trials = trials;
        row.mean = report.mean;
        row.std_error = report.std_error;
        row.truncated_count = report.truncated_count;
        const double dn = static_cast<double>(n);
        row.per_n_log_n = report.mean / (dn * std::log(dn));
        row.per_n_squared = report.mean / (dn * dn);
        const double reference =
            family == GraphFamily::path
                ? dn * (dn - 2.0)
                : dn * rat_to_double(harmonic(n >= 2 ? n - 2 : 0));
        row.per_reference = reference > 0 ? report.mean / reference : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace maxdyn
