#include "maxdyn/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>

#include "maxdyn/errors.hpp"

namespace maxdyn {

namespace {

std::vector<Vertex> mask_members(std::uint32_t mask) {
    std::vector<Vertex> members;
    for (Vertex v = 0; mask; ++v, mask >>= 1) {
        if (mask & 1u) members.push_back(v);
    }
    return members;
}

}  // namespace

ExpansionResult vertex_expansion_out(const DirectedGraph& g, Vertex cap, HalfRule rule) {
    const Vertex n = g.n();
    if (n > cap || n > 30) {
        throw CapExceeded("vertex expansion: n=" + std::to_string(n) +
                          " exceeds the exhaustive-search cap " +
                          std::to_string(std::min<Vertex>(cap, 30)));
    }
    const Vertex size_limit = rule == HalfRule::floor_half ? n / 2 : (n + 1) / 2;
    if (size_limit == 0) {
        // n = 1: no admissible subset; the minimum over an empty range is
        // conventionally reported as 0 with an empty witness.
        return {Rat(0), VertexSet()};
    }

    std::vector<std::uint32_t> nbhd(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex u : g.out(v)) nbhd[v] |= (1u << u);
    }

    bool have = false;
    std::uint64_t best_gamma = 0, best_size = 1;  // best ratio as gamma/size
    std::uint32_t best_mask = 0;

    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const auto size = static_cast<std::uint32_t>(std::popcount(mask));
        if (size > size_limit) continue;
        std::uint32_t reach = 0;
        for (std::uint32_t rest = mask; rest;) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            reach |= nbhd[static_cast<Vertex>(v)];
        }
        const auto gamma = static_cast<std::uint64_t>(std::popcount(reach & ~mask));
        // Compare gamma/size against the incumbent by cross-multiplication.
        if (have) {
            const std::uint64_t lhs = gamma * best_size;
            const std::uint64_t rhs = best_gamma * size;
            if (lhs > rhs) continue;
            if (lhs == rhs) {
                if (size > best_size) continue;
                if (size == best_size &&
                    mask_members(mask) >= mask_members(best_mask)) {
                    continue;
                }
            }
        }
        have = true;
        best_gamma = gamma;
        best_size = size;
        best_mask = mask;
    }
    return {Rat(BigInt(best_gamma), BigInt(best_size)), VertexSet(mask_members(best_mask))};
}

ExpansionResult vertex_expansion_in(const DirectedGraph& g, Vertex cap, HalfRule rule) {
    return vertex_expansion_out(dual(g), cap, rule);
}

namespace {

std::vector<int> bfs_distances(const DirectedGraph& g, Vertex source) {
    std::vector<int> dist(g.n(), -1);
    std::queue<Vertex> queue;
    dist[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop();
        for (Vertex u : g.out(v)) {
            if (dist[u] == -1) {
                dist[u] = dist[v] + 1;
                queue.push(u);
            }
        }
    }
    return dist;
}

}  // namespace

OrbitResult orbit(const DirectedGraph& g) {
    if (!is_strongly_connected(g)) throw NotStronglyConnected();
    if (g.n() < 2) throw DomainError("orbit needs n >= 2");
    const DirectedGraph reversed = dual(g);
    OrbitResult result{0, 0};
    for (Vertex v = 0; v < g.n(); ++v) {
        // shortest cycle through v: hop to a neighbour, shortest way back
        std::vector<int> back = bfs_distances(reversed, v);  // dist(u -> v) in g
        Vertex shortest = 0;
        for (Vertex u : g.out(v)) {
            if (back[u] < 0) continue;
            Vertex len = static_cast<Vertex>(back[u]) + 1;
            if (shortest == 0 || len < shortest) shortest = len;
        }
        if (shortest == 0) throw NotStronglyConnected();
        if (shortest > result.value) result = {shortest, v};
    }
    return result;
}

Rat harmonic(std::uint64_t n) {
    Rat sum(0);
    for (std::uint64_t i = 1; i <= n; ++i) sum += Rat(BigInt(1), BigInt(i));
    return sum;
}

Rat gamblers_ruin_closed(std::uint64_t n, std::uint64_t b) {
    if (n < 2 || b < 2) throw DomainError("gamblers ruin needs n >= 2 and b >= 2");
    return Rat(BigInt(n) * BigInt(b) * BigInt(b - 1), BigInt(2));
}

std::vector<Rat> gamblers_ruin_solve(std::uint64_t n, std::uint64_t b) {
    if (n < 2 || b < 2) throw DomainError("gamblers ruin needs n >= 2 and b >= 2");
    // States e_1..e_{b-1} with e_b = 0. Multiplying the conditioning
    // equations by n:
    //   e_1 - e_2 = n                     (reflecting end: no ruin from 1)
    //   2 e_s - e_{s-1} - e_{s+1} = n     (2 <= s <= b-1)
    // Tridiagonal; solved by forward elimination and back substitution.
    const std::size_t m = b - 1;
    const Rat rhs{BigInt(n)};
    std::vector<Rat> diag(m), upper(m), lower(m), c(m, rhs);
    diag[0] = Rat(1);
    upper[0] = Rat(-1);
    for (std::size_t i = 1; i < m; ++i) {
        diag[i] = Rat(2);
        upper[i] = Rat(-1);
        lower[i] = Rat(-1);
    }
    for (std::size_t i = 1; i < m; ++i) {
        Rat factor = lower[i] / diag[i - 1];
        diag[i] -= factor * upper[i - 1];
        c[i] -= factor * c[i - 1];
    }
    std::vector<Rat> e(b, Rat(0));  // e[k] = e_{k+1}; e[b-1] = e_b = 0
    e[m - 1] = c[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
        e[i] = (c[i] - upper[i] * e[i + 1]) / diag[i];
    }
    return e;
}

ParamReport bound_report(const DirectedGraph& g, Vertex cap, HalfRule rule) {
    ParamReport report;
    report.n = g.n();
    ExpansionResult out = vertex_expansion_out(g, cap, rule);
    ExpansionResult in = vertex_expansion_in(g, cap, rule);
    report.phi_out = out.value;
    report.phi_in = in.value;
    report.phi_prime = std::min(out.value, in.value);
    report.witness_out = out.witness;
    report.witness_in = in.witness;
    report.strongly_connected = is_strongly_connected(g);
    if (report.strongly_connected && g.n() >= 2) {
        OrbitResult b = orbit(g);
        report.orbit_value = b.value;
        report.orbit_witness = b.witness;
    }
    report.min_out_degree = g.n() ? static_cast<Vertex>(g.out(0).size()) : 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        report.min_out_degree =
            std::min(report.min_out_degree, static_cast<Vertex>(g.out(v).size()));
    }

    const double n = g.n();
    const double log_n = std::log(n);
    const double phi = rat_to_double(report.phi_out);
    const double phi_prime = rat_to_double(report.phi_prime);
    const double inf = std::numeric_limits<double>::infinity();
    report.bound_undirected = phi > 0 ? (n / phi) * log_n : inf;
    report.bound_strongly_connected =
        phi_prime > 0 ? n * report.orbit_value * report.orbit_value + (n / phi_prime) * log_n
                      : inf;
    return report;
}

}  // namespace maxdyn
