#include "maxdyn/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "maxdyn/errors.hpp"

namespace maxdyn {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VertexSet::contains(Vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
}

bool VertexSet::intersects(const VertexSet& other) const {
    auto it = members_.begin();
    auto jt = other.members_.begin();
    while (it != members_.end() && jt != other.members_.end()) {
        if (*it == *jt) return true;
        if (*it < *jt) ++it; else ++jt;
    }
    return false;
}

VertexSet VertexSet::unite(const VertexSet& other) const {
    std::vector<Vertex> out;
    out.reserve(members_.size() + other.members_.size());
    std::set_union(members_.begin(), members_.end(),
                   other.members_.begin(), other.members_.end(), std::back_inserter(out));
    VertexSet r;
    r.members_ = std::move(out);
    return r;
}

VertexSet VertexSet::difference(const VertexSet& other) const {
    std::vector<Vertex> out;
    std::set_difference(members_.begin(), members_.end(),
                        other.members_.begin(), other.members_.end(), std::back_inserter(out));
    VertexSet r;
    r.members_ = std::move(out);
    return r;
}

DirectedGraph DirectedGraph::from_edge_list(Vertex n,
                                            const std::vector<std::pair<Vertex, Vertex>>& edges) {
    if (n == 0) throw DomainError("graph must have at least one vertex");
    DirectedGraph g;
    g.n_ = n;
    g.out_.resize(n);
    g.in_.resize(n);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) {
            throw DomainError("edge endpoint out of range: (" + std::to_string(u) + "," +
                              std::to_string(v) + ") with n=" + std::to_string(n));
        }
        if (u == v) {
            throw DomainError("self-loop rejected at vertex " + std::to_string(u));
        }
        g.out_[u].push_back(v);
    }
    // Collapse duplicates: the dynamics depend only on neighbourhood membership.
    for (auto& adj : g.out_) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v : g.out_[u]) g.in_[v].push_back(u);
        g.edge_count_ += g.out_[u].size();
    }
    for (auto& adj : g.in_) std::sort(adj.begin(), adj.end());
    return g;
}

bool DirectedGraph::has_edge(Vertex u, Vertex v) const {
    const auto& adj = out_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> DirectedGraph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> result;
    result.reserve(edge_count_);
    for (Vertex u = 0; u < n_; ++u) {
        for (Vertex v : out_[u]) result.emplace_back(u, v);
    }
    return result;
}

const char* family_name(GraphFamily family) {
    switch (family) {
        case GraphFamily::complete: return "complete";
        case GraphFamily::path: return "path";
        case GraphFamily::dicycle: return "dicycle";
    }
    return "?";
}

DirectedGraph generate(GraphFamily family, Vertex n) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    switch (family) {
        case GraphFamily::complete:
            if (n < 1) throw DomainError("complete graph needs n >= 1");
            for (Vertex u = 0; u < n; ++u)
                for (Vertex v = 0; v < n; ++v)
                    if (u != v) edges.emplace_back(u, v);
            break;
        case GraphFamily::path:
            if (n < 2) throw DomainError("path graph needs n >= 2");
            for (Vertex u = 0; u + 1 < n; ++u) {
                edges.emplace_back(u, u + 1);
                edges.emplace_back(u + 1, u);
            }
            break;
        case GraphFamily::dicycle:
            if (n < 3) throw DomainError("directed cycle needs n >= 3 to stay simple");
            for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
            break;
    }
    return DirectedGraph::from_edge_list(n, edges);
}

DirectedGraph random_strongly_connected(Vertex n, double p, RngStream& rng,
                                        unsigned max_attempts) {
    if (n == 0) throw DomainError("graph must have at least one vertex");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("edge probability must be in (0, 1]");
    if (n == 1) return DirectedGraph::from_edge_list(1, {});
    for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = 0; v < n; ++v)
                if (u != v && rng.next_unit() < p) edges.emplace_back(u, v);
        DirectedGraph g = DirectedGraph::from_edge_list(n, edges);
        if (is_strongly_connected(g)) return g;
    }
    throw DomainError("failed to sample a strongly connected digraph (n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
}

DirectedGraph dual(const DirectedGraph& g) {
    std::vector<std::pair<Vertex, Vertex>> reversed;
    reversed.reserve(g.edge_count());
    for (auto [u, v] : g.edges()) reversed.emplace_back(v, u);
    return DirectedGraph::from_edge_list(g.n(), reversed);
}

bool is_undirected(const DirectedGraph& g) {
    for (Vertex u = 0; u < g.n(); ++u) {
        for (Vertex v : g.out(u)) {
            if (!g.has_edge(v, u)) return false;
        }
    }
    return true;
}

VertexSet boundary(const DirectedGraph& g, const VertexSet& s) {
    if (s.empty()) throw DomainError("boundary of the empty set is undefined");
    std::vector<Vertex> out;
    for (Vertex u : s) {
        if (u >= g.n()) throw DomainError("boundary: vertex out of range");
        for (Vertex v : g.out(u)) {
            if (!s.contains(v)) out.push_back(v);
        }
    }
    return VertexSet(std::move(out));
}

std::vector<VertexSet> k_boundary_partition(const DirectedGraph& g, const VertexSet& s) {
    if (s.empty()) throw DomainError("k-boundary partition of the empty set is undefined");
    if (!is_strongly_connected(g)) throw NotStronglyConnected();

    // BFS layers are equivalent to the recursive boundary definition; the
    // recursion is kept as a test oracle only.
    std::vector<int> level(g.n(), -1);
    std::queue<Vertex> queue;
    for (Vertex v : s) {
        level[v] = 0;
        queue.push(v);
    }
    int max_level = 0;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop();
        for (Vertex v : g.out(u)) {
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                max_level = std::max(max_level, level[v]);
                queue.push(v);
            }
        }
    }
    std::vector<std::vector<Vertex>> layers(static_cast<std::size_t>(max_level) + 1);
    for (Vertex v = 0; v < g.n(); ++v) layers[static_cast<std::size_t>(level[v])].push_back(v);
    std::vector<VertexSet> result;
    result.reserve(layers.size());
    for (auto& layer : layers) result.emplace_back(std::move(layer));
    return result;
}

namespace {

// Iterative Tarjan; recursion would overflow on chain graphs with ~10^5 states.
struct TarjanState {
    const DirectedGraph& g;
    std::vector<int> index;
    std::vector<int> lowlink;
    std::vector<bool> on_stack;
    std::vector<Vertex> stack;
    std::vector<std::vector<Vertex>> components;
    int next_index = 0;

    explicit TarjanState(const DirectedGraph& graph)
        : g(graph), index(graph.n(), -1), lowlink(graph.n(), 0), on_stack(graph.n(), false) {}

    void run(Vertex root) {
        struct Frame {
            Vertex v;
            std::size_t child;
        };
        std::vector<Frame> frames{{root, 0}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& succ = g.out(f.v);
            if (f.child < succ.size()) {
                Vertex w = succ[f.child++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    std::vector<Vertex> comp;
                    Vertex w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp.push_back(w);
                    } while (w != f.v);
                    components.push_back(std::move(comp));
                }
                Vertex done = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    lowlink[frames.back().v] =
                        std::min(lowlink[frames.back().v], lowlink[done]);
                }
            }
        }
    }
};

}  // namespace

SccDecomposition scc(const DirectedGraph& g) {
    TarjanState tarjan(g);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (tarjan.index[v] == -1) tarjan.run(v);
    }
    SccDecomposition result;
    result.component_of.resize(g.n());
    result.components.reserve(tarjan.components.size());
    for (std::size_t c = 0; c < tarjan.components.size(); ++c) {
        for (Vertex v : tarjan.components[c]) result.component_of[v] = c;
        result.components.emplace_back(std::move(tarjan.components[c]));
    }
    for (Vertex u = 0; u < g.n(); ++u) {
        for (Vertex v : g.out(u)) {
            std::size_t cu = result.component_of[u];
            std::size_t cv = result.component_of[v];
            if (cu != cv) result.condensation_edges.emplace_back(cu, cv);
        }
    }
    std::sort(result.condensation_edges.begin(), result.condensation_edges.end());
    result.condensation_edges.erase(
        std::unique(result.condensation_edges.begin(), result.condensation_edges.end()),
        result.condensation_edges.end());
    return result;
}

bool is_strongly_connected(const DirectedGraph& g) {
    return scc(g).components.size() == 1;
}

DirectedGraph parse_edge_list(std::istream& in) {
    std::string line;
    std::vector<std::string> tokens;
    auto next_tokens = [&]() -> bool {
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            tokens.clear();
            std::string tok;
            while (ls >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    };
    auto parse_u32 = [](const std::string& tok) -> Vertex {
        try {
            std::size_t pos = 0;
            unsigned long value = std::stoul(tok, &pos);
            if (pos != tok.size() || value > 0xFFFFFFFFull) throw std::invalid_argument(tok);
            return static_cast<Vertex>(value);
        } catch (const std::exception&) {
            throw ParseError("edge list: invalid integer '" + tok + "'");
        }
    };

    if (!next_tokens() || tokens.size() != 2) {
        throw ParseError("edge list: expected header line 'n m'");
    }
    Vertex n = parse_u32(tokens[0]);
    std::size_t m = parse_u32(tokens[1]);
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!next_tokens() || tokens.size() != 2) {
            throw ParseError("edge list: expected " + std::to_string(m) + " edge lines");
        }
        edges.emplace_back(parse_u32(tokens[0]), parse_u32(tokens[1]));
    }
    return DirectedGraph::from_edge_list(n, edges);
}

DirectedGraph parse_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list file: " + path);
    return parse_edge_list(in);
}

std::string format_edge_list(const DirectedGraph& g) {
    std::ostringstream out;
    out << g.n() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

}  // namespace maxdyn
