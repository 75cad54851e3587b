// maxdyn: asynchronous maximum model on directed graphs — simulation, exact
// chain analysis, graph parameters, and Monte Carlo estimation.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxdyn/dynamics.hpp"
#include "maxdyn/errors.hpp"
#include "maxdyn/estimator.hpp"
#include "maxdyn/markov.hpp"
#include "maxdyn/params.hpp"
#include "maxdyn/rational.hpp"

using json = nlohmann::json;
using namespace maxdyn;

namespace {

struct GraphOptions {
    std::string family;
    Vertex n = 0;
    std::string edges_path;
    double p = 0.5;  // edge density for random-sc
};

struct CommonOptions {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string format = "text";
    std::string out_path;
    unsigned threads = 1;
};

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
    auto* family = cmd->add_option("--family", g.family, "graph family")
                       ->check(CLI::IsMember({"complete", "path", "dicycle", "random-sc"}));
    auto* edges = cmd->add_option("--edges", g.edges_path, "edge-list file");
    cmd->add_option("--n", g.n, "vertex count for --family");
    cmd->add_option("--p", g.p, "edge probability for --family random-sc");
    family->excludes(edges);
}

void add_common_options(CLI::App* cmd, CommonOptions& c,
                        const std::string& formats = "text,json") {
    auto* seed = cmd->add_option("--seed", c.seed, "master RNG seed (env MAXDYN_SEED)");
    cmd->parse_complete_callback([seed, &c]() { c.seed_given = seed->count() > 0; });
    std::vector<std::string> allowed;
    std::stringstream ss(formats);
    for (std::string item; std::getline(ss, item, ',');) allowed.push_back(item);
    c.format = allowed.front();
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(allowed));
    cmd->add_option("--out", c.out_path, "write output to a file instead of stdout");
    cmd->add_option("--threads", c.threads, "worker threads for trial loops")
        ->check(CLI::Range(1u, 256u));
}

std::uint64_t resolve_seed(const CommonOptions& c) {
    if (c.seed_given) return c.seed;
    if (const char* env = std::getenv("MAXDYN_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1;
}

DirectedGraph resolve_graph(const GraphOptions& g, std::uint64_t seed, json& config) {
    if (!g.edges_path.empty()) {
        config["edges"] = g.edges_path;
        return parse_edge_list_file(g.edges_path);
    }
    if (g.family.empty()) {
        throw CLI::ValidationError("--family or --edges is required");
    }
    config["family"] = g.family;
    config["n"] = g.n;
    if (g.family == "random-sc") {
        config["p"] = g.p;
        config["graph_seed"] = seed;
        RngStream rng(derive_seed(seed, 0x6772));
        return random_strongly_connected(g.n, g.p, rng);
    }
    if (g.family == "complete") return generate(GraphFamily::complete, g.n);
    if (g.family == "path") return generate(GraphFamily::path, g.n);
    return generate(GraphFamily::dicycle, g.n);
}

// literal "2,2,1,1" (or space separated) | FILE | constant:k | worst
Valuation resolve_valuation(const std::string& spec, const DirectedGraph& g,
                            std::size_t cap, json& config) {
    config["valuation_spec"] = spec;
    if (spec.rfind("constant:", 0) == 0) {
        Value k = std::strtoull(spec.c_str() + 9, nullptr, 10);
        return Valuation::constant(g.n(), k);
    }
    if (spec == "worst") {
        HittingTimeReport report = worst_case_convergence_time(g, cap);
        return report.worst_valuation;
    }
    if (spec.find_first_not_of("0123456789, \t") == std::string::npos &&
        spec.find_first_of("0123456789") != std::string::npos) {
        std::string text = spec;
        for (char& ch : text) {
            if (ch == ',') ch = ' ';
        }
        Valuation f = parse_valuation(text);
        validate_valuation(f, g.n());
        return f;
    }
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot read valuation file: " + spec);
    std::string line;
    std::getline(in, line);
    Valuation f = parse_valuation(line);
    validate_valuation(f, g.n());
    return f;
}

void emit(const CommonOptions& c, const std::string& payload) {
    if (c.out_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream out(c.out_path, std::ios::binary);
        if (!out) throw DomainError("cannot open output file: " + c.out_path);
        out << payload;
    }
}

json rat_json(const Rat& r) {
    return json{{"num", r.numerator().str()},
                {"den", r.denominator().str()},
                {"value", rat_to_double(r)}};
}

json vertex_set_json(const VertexSet& s) {
    json arr = json::array();
    for (Vertex v : s) arr.push_back(v);
    return arr;
}

std::string join_vertices(const VertexSet& s) {
    std::ostringstream out;
    bool first = true;
    for (Vertex v : s) {
        if (!first) out << ' ';
        first = false;
        out << v;
    }
    return out.str();
}

json mc_report_json(const McReport& r) {
    return json{{"trials", r.trials},
                {"mean", r.mean},
                {"variance", r.variance},
                {"std_error", r.std_error},
                {"q50", r.q50},
                {"q90", r.q90},
                {"q99", r.q99},
                {"truncated", r.truncated_count},
                {"mean_is_lower_bound", r.mean_is_lower_bound},
                {"master_seed", r.master_seed},
                {"max_rounds", r.max_rounds}};
}

std::string mc_report_text(const McReport& r) {
    std::ostringstream out;
    out << "trials " << r.trials << ", mean " << r.mean << " (se " << r.std_error
        << "), q50/q90/q99 " << r.q50 << "/" << r.q90 << "/" << r.q99;
    if (r.truncated_count) {
        out << ", truncated " << r.truncated_count << " (mean is a lower bound)";
    }
    return out.str();
}

int run_app(int argc, char** argv) {
    CLI::App app{"asynchronous maximum model toolkit"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "generate a graph as edge-list text");
    GraphOptions gen_graph;
    CommonOptions gen_common;
    add_graph_options(gen_cmd, gen_graph);
    add_common_options(gen_cmd, gen_common, "text");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "run one trajectory, JSON lines per round");
    GraphOptions sim_graph;
    CommonOptions sim_common;
    std::string sim_valuation;
    std::uint64_t sim_max_rounds = 0;
    Vertex sim_full_threshold = 16;
    std::size_t sim_cap = 50000;
    add_graph_options(sim_cmd, sim_graph);
    add_common_options(sim_cmd, sim_common, "jsonl");
    sim_cmd->add_option("--valuation", sim_valuation, "LIST | FILE | constant:k | worst")
        ->required();
    sim_cmd->add_option("--max-rounds", sim_max_rounds, "truncation budget (0: 50 n^2)");
    sim_cmd->add_option("--full-threshold", sim_full_threshold,
                        "keep full valuations when n <= this");
    sim_cmd->add_option("--cap", sim_cap, "chain cap for --valuation worst");

    // ---- exact ----
    auto* exact_cmd = app.add_subcommand("exact", "exact expected rounds to absorption");
    GraphOptions exact_graph;
    CommonOptions exact_common;
    std::string exact_valuation;
    std::string exact_mode = "quotient";
    std::string exact_arith = "auto";
    std::string exact_dump_chain;
    std::size_t exact_cap = 50000;
    add_graph_options(exact_cmd, exact_graph);
    add_common_options(exact_cmd, exact_common);
    exact_cmd->add_option("--valuation", exact_valuation, "LIST | FILE | constant:k | worst")
        ->required();
    exact_cmd->add_option("--cap", exact_cap, "chain state cap");
    exact_cmd->add_option("--mode", exact_mode, "chain mode")
        ->check(CLI::IsMember({"raw", "quotient"}));
    exact_cmd->add_option("--arithmetic", exact_arith, "solver arithmetic")
        ->check(CLI::IsMember({"auto", "rational", "float"}));
    exact_cmd->add_option("--dump-chain", exact_dump_chain, "write the chain as JSON");

    // ---- period ----
    auto* period_cmd = app.add_subcommand("period", "largest absorbing component of the chain");
    GraphOptions period_graph;
    CommonOptions period_common;
    std::size_t period_cap = 50000;
    std::string period_dump_chain;
    add_graph_options(period_cmd, period_graph);
    add_common_options(period_cmd, period_common);
    period_cmd->add_option("--cap", period_cap, "chain state cap");
    period_cmd->add_option("--dump-chain", period_dump_chain, "write the raw chain as JSON");

    // ---- params ----
    auto* params_cmd = app.add_subcommand("params", "vertex expansion, orbit and bounds");
    GraphOptions params_graph;
    CommonOptions params_common;
    Vertex params_cap = 20;
    std::string params_half = "floor";
    add_graph_options(params_cmd, params_graph);
    add_common_options(params_cmd, params_common);
    params_cmd->add_option("--cap", params_cap, "subset-search cap on n");
    params_cmd->add_option("--half-rule", params_half, "|A| <= n/2 reading at odd n")
        ->check(CLI::IsMember({"floor", "ceil"}));

    // ---- mc ----
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo convergence-time estimate");
    GraphOptions mc_graph;
    CommonOptions mc_common;
    std::string mc_valuation;
    std::uint64_t mc_trials = 10000, mc_max_rounds = 0;
    std::size_t mc_cap = 50000;
    add_graph_options(mc_cmd, mc_graph);
    add_common_options(mc_cmd, mc_common, "text,json,csv");
    mc_cmd->add_option("--valuation", mc_valuation, "LIST | FILE | constant:k | worst")
        ->required();
    mc_cmd->add_option("--trials", mc_trials, "independent trials");
    mc_cmd->add_option("--max-rounds", mc_max_rounds, "truncation budget (0: 50 n^2)");
    mc_cmd->add_option("--cap", mc_cap, "chain cap for --valuation worst");

    // ---- worst ----
    auto* worst_cmd =
        app.add_subcommand("worst", "empirical worst-case valuation by Monte Carlo");
    GraphOptions worst_graph;
    CommonOptions worst_common;
    std::string worst_strategy = "enumerate";
    std::uint64_t worst_samples = 64, worst_trials = 2000, worst_max_rounds = 0;
    std::size_t worst_class_cap = 50000;
    add_graph_options(worst_cmd, worst_graph);
    add_common_options(worst_cmd, worst_common);
    worst_cmd->add_option("--strategy", worst_strategy, "candidate source")
        ->check(CLI::IsMember({"enumerate", "sample"}));
    worst_cmd->add_option("--samples", worst_samples, "candidates for --strategy sample");
    worst_cmd->add_option("--trials", worst_trials, "trials per candidate");
    worst_cmd->add_option("--max-rounds", worst_max_rounds, "truncation budget");
    worst_cmd->add_option("--class-cap", worst_class_cap, "canonical class cap");

    // ---- scaling ----
    auto* scaling_cmd =
        app.add_subcommand("scaling", "normalized convergence-time table over n");
    CommonOptions scaling_common;
    std::string scaling_family = "path";
    std::string scaling_ns = "8,16,32,64";
    std::uint64_t scaling_trials = 2000;
    add_common_options(scaling_cmd, scaling_common, "csv,json,text");
    scaling_cmd->add_option("--family", scaling_family, "graph family")
        ->check(CLI::IsMember({"complete", "path"}));
    scaling_cmd->add_option("--n-values", scaling_ns, "comma-separated sizes");
    scaling_cmd->add_option("--trials", scaling_trials, "trials per size");

    // ---- schedule ----
    auto* schedule_cmd =
        app.add_subcommand("schedule", "constructive schedule to the constant valuation");
    GraphOptions schedule_graph;
    CommonOptions schedule_common;
    std::string schedule_valuation;
    std::size_t schedule_cap = 50000;
    add_graph_options(schedule_cmd, schedule_graph);
    add_common_options(schedule_cmd, schedule_common);
    schedule_cmd->add_option("--valuation", schedule_valuation,
                             "LIST | FILE | constant:k | worst")
        ->required();
    schedule_cmd->add_option("--cap", schedule_cap, "chain cap for --valuation worst");

    // ---- couple ----
    auto* couple_cmd =
        app.add_subcommand("couple", "coupled Bernoulli processes: dominance and GOF");
    CommonOptions couple_common;
    double couple_q = 0.1;
    std::string couple_p = "0.5";
    std::uint64_t couple_trials = 100000;
    add_common_options(couple_cmd, couple_common);
    couple_cmd->add_option("--q", couple_q, "base success probability (0 <= q < 1)");
    couple_cmd->add_option("--p", couple_p, "comma-separated per-round p_j >= q");
    couple_cmd->add_option("--trials", couple_trials, "trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // help text, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    if (gen_cmd->parsed()) {
        json config{{"command", "gen"}};
        std::uint64_t seed = resolve_seed(gen_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(gen_graph, seed, config);
        std::string payload = "# maxdyn gen " + config.dump() + "\n" + format_edge_list(g);
        emit(gen_common, payload);
        return 0;
    }

    if (sim_cmd->parsed()) {
        json config{{"command", "simulate"}};
        std::uint64_t seed = resolve_seed(sim_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(sim_graph, seed, config);
        Valuation f = resolve_valuation(sim_valuation, g, sim_cap, config);
        config["valuation"] = f.values;
        config["max_rounds"] = sim_max_rounds ? sim_max_rounds : default_max_rounds(g.n());
        config["full_threshold"] = sim_full_threshold;
        SimulateOptions options;
        options.max_rounds = sim_max_rounds;
        options.full_valuation_threshold = sim_full_threshold;
        RngStream rng(seed);
        Trajectory t = simulate(g, f, rng, options);
        std::ostringstream payload;
        payload << trajectory_to_jsonl(t, json{{"config", config}}.dump());
        json footer{{"converged_at",
                     t.converged_at ? json(*t.converged_at) : json(nullptr)},
                    {"truncated", t.truncated},
                    {"final", t.final.values}};
        payload << footer.dump() << '\n';
        emit(sim_common, payload.str());
        return 0;
    }

    if (exact_cmd->parsed()) {
        json config{{"command", "exact"},
                    {"cap", exact_cap},
                    {"mode", exact_mode},
                    {"arithmetic", exact_arith}};
        std::uint64_t seed = resolve_seed(exact_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(exact_graph, seed, config);
        ChainMode mode = exact_mode == "raw" ? ChainMode::raw : ChainMode::quotient;
        Arithmetic arith = exact_arith == "rational" ? Arithmetic::exact_rational
                           : exact_arith == "float"  ? Arithmetic::float64
                                                     : Arithmetic::automatic;
        if (!exact_dump_chain.empty()) {
            std::ofstream out(exact_dump_chain);
            out << chain_to_json(build_chain(g, mode, exact_cap));
        }
        json result;
        std::string text;
        if (exact_valuation == "worst") {
            HittingTimeReport report = worst_case_convergence_time(g, exact_cap, arith);
            result["worst_value"] = report.worst_value;
            if (report.exact) result["worst_exact"] = rat_json(report.worst_rational);
            result["worst_valuation"] = report.worst_valuation.values;
            result["chain_states"] = report.chain_states;
            std::ostringstream line;
            line << report.worst_value;
            if (report.exact) line << " (= " << rat_to_string(report.worst_rational) << ")";
            line << " attained by " << format_valuation(report.worst_valuation);
            text = line.str();
        } else {
            Valuation f = resolve_valuation(exact_valuation, g, exact_cap, config);
            config["valuation"] = f.values;
            ConvergenceTime t = exact_convergence_time(g, f, exact_cap, mode, arith);
            result["value"] = t.value;
            if (t.exact) result["exact"] = rat_json(t.rational);
            result["chain_states"] = t.chain_states;
            std::ostringstream line;
            line << t.value;
            if (t.exact) line << " (= " << rat_to_string(t.rational) << ")";
            text = line.str();
        }
        if (exact_common.format == "json") {
            emit(exact_common, json{{"config", config}, {"result", result}}.dump());
        } else {
            emit(exact_common, "config: " + config.dump() + "\n" + text);
        }
        return 0;
    }

    if (period_cmd->parsed()) {
        json config{{"command", "period"}, {"cap", period_cap}};
        std::uint64_t seed = resolve_seed(period_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(period_graph, seed, config);
        if (!period_dump_chain.empty()) {
            std::ofstream out(period_dump_chain);
            out << chain_to_json(build_chain(g, ChainMode::raw, period_cap));
        }
        std::size_t p = period(g, period_cap);
        if (period_common.format == "json") {
            emit(period_common, json{{"config", config}, {"result", {{"period", p}}}}.dump());
        } else {
            emit(period_common, "config: " + config.dump() + "\n" + std::to_string(p));
        }
        return 0;
    }

    if (params_cmd->parsed()) {
        json config{{"command", "params"}, {"cap", params_cap}, {"half_rule", params_half}};
        std::uint64_t seed = resolve_seed(params_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(params_graph, seed, config);
        HalfRule rule = params_half == "ceil" ? HalfRule::ceil_half : HalfRule::floor_half;
        ParamReport report = bound_report(g, params_cap, rule);
        json result{{"n", report.n},
                    {"phi_out", rat_json(report.phi_out)},
                    {"phi_in", rat_json(report.phi_in)},
                    {"phi_prime", rat_json(report.phi_prime)},
                    {"witness_out", vertex_set_json(report.witness_out)},
                    {"witness_in", vertex_set_json(report.witness_in)},
                    {"strongly_connected", report.strongly_connected},
                    {"orbit", report.orbit_value},
                    {"orbit_witness", report.orbit_witness},
                    {"min_out_degree", report.min_out_degree},
                    {"bound_undirected", report.bound_undirected},
                    {"bound_strongly_connected", report.bound_strongly_connected}};
        if (params_common.format == "json") {
            emit(params_common, json{{"config", config}, {"result", result}}.dump());
        } else {
            std::ostringstream out;
            out << "config: " << config.dump() << '\n';
            out << "n " << report.n << ", phi_out " << rat_to_string(report.phi_out)
                << " (witness {" << join_vertices(report.witness_out) << "})";
            out << ", phi_in " << rat_to_string(report.phi_in) << ", phi' "
                << rat_to_string(report.phi_prime);
            if (report.strongly_connected) out << ", orbit " << report.orbit_value;
            out << ", min out-degree " << report.min_out_degree << '\n';
            out << "bound (n/phi) ln n = " << report.bound_undirected
                << ", bound n b^2 + (n/phi') ln n = " << report.bound_strongly_connected;
            emit(params_common, out.str());
        }
        return 0;
    }

    if (mc_cmd->parsed()) {
        json config{{"command", "mc"}, {"trials", mc_trials}, {"threads", mc_common.threads}};
        std::uint64_t seed = resolve_seed(mc_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(mc_graph, seed, config);
        Valuation f = resolve_valuation(mc_valuation, g, mc_cap, config);
        config["valuation"] = f.values;
        config["max_rounds"] = mc_max_rounds ? mc_max_rounds : default_max_rounds(g.n());
        McReport report =
            mc_convergence(g, f, mc_trials, mc_max_rounds, seed, mc_common.threads);
        if (mc_common.format == "json") {
            emit(mc_common, json{{"config", config}, {"result", mc_report_json(report)}}.dump());
        } else if (mc_common.format == "csv") {
            const double dn = g.n();
            std::ostringstream out;
            out << "# config: " << config.dump() << '\n';
            out << "n,trials,mean,se,q50,q90,q99,truncated,per_n_log_n,per_n_squared\n";
            out << g.n() << ',' << report.trials << ',' << report.mean << ','
                << report.std_error << ',' << report.q50 << ',' << report.q90 << ','
                << report.q99 << ',' << report.truncated_count << ','
                << (dn > 1 ? report.mean / (dn * std::log(dn)) : 0.0) << ','
                << report.mean / (dn * dn) << '\n';
            emit(mc_common, out.str());
        } else {
            emit(mc_common, "config: " + config.dump() + "\n" + mc_report_text(report));
        }
        return 0;
    }

    if (worst_cmd->parsed()) {
        json config{{"command", "worst"},
                    {"strategy", worst_strategy},
                    {"trials", worst_trials},
                    {"threads", worst_common.threads}};
        std::uint64_t seed = resolve_seed(worst_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(worst_graph, seed, config);
        WorstCaseStrategy strategy;
        strategy.enumerate = worst_strategy == "enumerate";
        strategy.samples = worst_samples;
        strategy.class_cap = worst_class_cap;
        if (!strategy.enumerate) config["samples"] = worst_samples;
        WorstCaseSearch search = empirical_worst_case(g, strategy, worst_trials,
                                                      worst_max_rounds, seed,
                                                      worst_common.threads);
        json result{{"maximizer", search.maximizer.values},
                    {"candidates", search.candidates},
                    {"report", mc_report_json(search.report)}};
        if (worst_common.format == "json") {
            emit(worst_common, json{{"config", config}, {"result", result}}.dump());
        } else {
            emit(worst_common, "config: " + config.dump() + "\nmaximizer " +
                                   format_valuation(search.maximizer) + "\n" +
                                   mc_report_text(search.report));
        }
        return 0;
    }

    if (scaling_cmd->parsed()) {
        json config{{"command", "scaling"},
                    {"family", scaling_family},
                    {"n_values", scaling_ns},
                    {"trials", scaling_trials},
                    {"threads", scaling_common.threads}};
        std::uint64_t seed = resolve_seed(scaling_common);
        config["seed"] = seed;
        std::vector<Vertex> ns;
        std::stringstream ss(scaling_ns);
        for (std::string item; std::getline(ss, item, ',');) {
            ns.push_back(static_cast<Vertex>(std::strtoul(item.c_str(), nullptr, 10)));
        }
        GraphFamily family =
            scaling_family == "path" ? GraphFamily::path : GraphFamily::complete;
        auto rows = scaling_study(family, ns, scaling_trials, seed, scaling_common.threads);
        if (scaling_common.format == "json") {
            json arr = json::array();
            for (const auto& row : rows) {
                arr.push_back(json{{"n", row.n},
                                   {"trials", row.trials},
                                   {"mean", row.mean},
                                   {"se", row.std_error},
                                   {"per_n_log_n", row.per_n_log_n},
                                   {"per_n_squared", row.per_n_squared},
                                   {"per_reference", row.per_reference},
                                   {"truncated", row.truncated_count}});
            }
            emit(scaling_common, json{{"config", config}, {"result", arr}}.dump());
        } else {
            std::ostringstream out;
            out << "# config: " << config.dump() << '\n';
            out << "n,trials,mean,se,per_n_log_n,per_n_squared,per_reference,truncated\n";
            for (const auto& row : rows) {
                out << row.n << ',' << row.trials << ',' << row.mean << ',' << row.std_error
                    << ',' << row.per_n_log_n << ',' << row.per_n_squared << ','
                    << row.per_reference << ',' << row.truncated_count << '\n';
            }
            emit(scaling_common, out.str());
        }
        return 0;
    }

    if (schedule_cmd->parsed()) {
        json config{{"command", "schedule"}};
        std::uint64_t seed = resolve_seed(schedule_common);
        config["seed"] = seed;
        DirectedGraph g = resolve_graph(schedule_graph, seed, config);
        Valuation f = resolve_valuation(schedule_valuation, g, schedule_cap, config);
        config["valuation"] = f.values;
        std::vector<Vertex> schedule = constructive_schedule(g, f);
        Trajectory t = replay_schedule(g, f, schedule);
        json result{{"schedule", schedule},
                    {"steps", schedule.size()},
                    {"final", t.final.values},
                    {"reaches_constant",
                     t.final == Valuation::constant(g.n(), max_value(f))}};
        if (schedule_common.format == "json") {
            emit(schedule_common, json{{"config", config}, {"result", result}}.dump());
        } else {
            std::ostringstream out;
            out << "config: " << config.dump() << '\n';
            out << "schedule:";
            for (Vertex v : schedule) out << ' ' << v;
            out << "\nfinal: " << format_valuation(t.final);
            emit(schedule_common, out.str());
        }
        return 0;
    }

    if (couple_cmd->parsed()) {
        json config{{"command", "couple"},
                    {"q", couple_q},
                    {"p", couple_p},
                    {"trials", couple_trials}};
        std::uint64_t seed = resolve_seed(couple_common);
        config["seed"] = seed;
        std::vector<double> p_values;
        std::stringstream ss(couple_p);
        for (std::string item; std::getline(ss, item, ',');) {
            p_values.push_back(std::strtod(item.c_str(), nullptr));
        }
        CouplingStudy study = coupling_study(couple_q, p_values, couple_trials, seed);
        json result{{"trials", study.trials},
                    {"violations", study.violations},
                    {"mean_q", study.mean_q},
                    {"mean_p_prime", study.mean_p_prime},
                    {"mean_p_direct", study.mean_p_direct},
                    {"gof",
                     {{"statistic", study.gof.statistic},
                      {"df", study.gof.df},
                      {"p_value", study.gof.p_value},
                      {"bins", study.gof.bins}}}};
        if (couple_common.format == "json") {
            emit(couple_common, json{{"config", config}, {"result", result}}.dump());
        } else {
            std::ostringstream out;
            out << "config: " << config.dump() << '\n';
            out << "violations " << study.violations << " of " << study.trials
                << ", mean Q " << study.mean_q << ", mean P' " << study.mean_p_prime
                << ", GOF p " << study.gof.p_value;
            emit(couple_common, out.str());
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
