#include "maxdyn/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "maxdyn/errors.hpp"
#include "maxdyn/rational.hpp"

namespace maxdyn {

Valuation Valuation::constant(Vertex n, Value k) {
    if (n < 1) throw DomainError("constant valuation needs n >= 1");
    if (k < 1) throw DomainError("valuation values must be positive");
    return Valuation(std::vector<Value>(n, k));
}

void validate_valuation(const Valuation& f, Vertex n) {
    if (f.values.empty()) throw DomainError("valuation must not be empty");
    if (n != 0 && f.size() != n) {
        throw DomainError("valuation length " + std::to_string(f.size()) +
                          " does not match graph size " + std::to_string(n));
    }
    for (Value v : f.values) {
        if (v < 1) throw DomainError("valuation values must be positive");
    }
}

Value max_value(const Valuation& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

VertexSet argmax_set(const Valuation& f) {
    Value m = max_value(f);
    std::vector<Vertex> out;
    for (Vertex v = 0; v < f.size(); ++v) {
        if (f[v] == m) out.push_back(v);
    }
    return VertexSet(std::move(out));
}

Valuation canonicalize(const Valuation& f) {
    std::vector<Value> distinct = f.values;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<Value> out(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        auto it = std::lower_bound(distinct.begin(), distinct.end(), f.values[i]);
        out[i] = static_cast<Value>(it - distinct.begin()) + 1;
    }
    return Valuation(std::move(out));
}

bool is_canonical(const Valuation& f) {
    if (f.values.empty()) return false;
    Value m = max_value(f);
    if (m > f.size()) return false;
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (Value v : f.values) {
        if (v < 1 || v > m) return false;
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool order_equivalent(const DirectedGraph& g, const Valuation& f, const Valuation& h,
                      std::uint64_t automorphism_budget) {
    const Vertex n = g.n();
    validate_valuation(f, n);
    validate_valuation(h, n);

    std::uint64_t permutations = 1;
    for (Vertex i = 2; i <= n; ++i) {
        if (permutations > automorphism_budget / i) {
            throw BudgetExceeded("order_equivalent: " + std::to_string(n) +
                                 "! permutations exceed budget " +
                                 std::to_string(automorphism_budget));
        }
        permutations *= i;
    }

    // Pairwise comparisons agree under alpha iff the rank compressions
    // satisfy rank_f(v) == rank_h(alpha(v)) for every vertex.
    const Valuation cf = canonicalize(f);
    const Valuation ch = canonicalize(h);
    if (max_value(cf) != max_value(ch)) return false;

    std::vector<Vertex> alpha(n);
    std::iota(alpha.begin(), alpha.end(), 0);
    do {
        bool ok = true;
        for (Vertex v = 0; v < n && ok; ++v) {
            if (cf[v] != ch[alpha[v]]) ok = false;
        }
        for (Vertex u = 0; u < n && ok; ++u) {
            for (Vertex v : g.out(u)) {
                if (!g.has_edge(alpha[u], alpha[v])) {
                    ok = false;
                    break;
                }
            }
        }
        // Edge counts match, so edge-preservation of a bijection implies
        // the reverse direction too.
        if (ok) return true;
    } while (std::next_permutation(alpha.begin(), alpha.end()));
    return false;
}

std::uint64_t canonical_class_count(Vertex n) {
    // Ordered Bell numbers: a(n) = sum_k C(n,k) a(n-k), a(0) = 1.
    // Computed in arbitrary precision and saturated to uint64 (a(20) > 2^64).
    std::vector<BigInt> a(n + 1, 0);
    a[0] = 1;
    for (Vertex i = 1; i <= n; ++i) {
        BigInt binom = 1;
        for (Vertex k = 1; k <= i; ++k) {
            binom = binom * (i - k + 1) / k;
            a[i] += binom * a[i - k];
        }
    }
    const BigInt cap = BigInt(~0ull);
    return a[n] > cap ? ~0ull : a[n].convert_to<std::uint64_t>();
}

namespace {

void enumerate_rec(Vertex n, std::vector<Value>& prefix, Value current_max,
                   Vertex missing_below_max, const std::function<void(const Valuation&)>& fn) {
    const Vertex i = static_cast<Vertex>(prefix.size());
    if (i == n) {
        if (missing_below_max == 0) fn(Valuation(prefix));
        return;
    }
    const Vertex slots_left = n - i;
    for (Value v = 1; v <= static_cast<Value>(n); ++v) {
        Value new_max = std::max(current_max, v);
        // values in [1, new_max] still unused after placing v
        Vertex new_missing = missing_below_max;
        if (v > current_max) {
            new_missing += static_cast<Vertex>(v - current_max - 1);
        } else if (v <= current_max) {
            // may fill one of the missing ranks; recompute by membership
            bool was_missing = true;
            for (Value u : prefix) {
                if (u == v) {
                    was_missing = false;
                    break;
                }
            }
            if (!was_missing)
                new_missing = missing_below_max;
            else
                new_missing = missing_below_max - 1;
        }
        if (new_missing > slots_left - 1) continue;  // cannot close the gaps
        prefix.push_back(v);
        enumerate_rec(n, prefix, new_max, new_missing, fn);
        prefix.pop_back();
    }
}

}  // namespace

void for_each_canonical(Vertex n, const std::function<void(const Valuation&)>& fn, Vertex cap) {
    if (n < 1) throw DomainError("enumerate_canonical needs n >= 1");
    if (n > cap) {
        throw CapExceeded("enumerate_canonical: n=" + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
    }
    std::vector<Value> prefix;
    prefix.reserve(n);
    enumerate_rec(n, prefix, 0, 0, fn);
}

std::vector<Valuation> enumerate_canonical(Vertex n, Vertex cap) {
    std::vector<Valuation> out;
    for_each_canonical(n, [&](const Valuation& f) { out.push_back(f); }, cap);
    return out;
}

std::uint64_t digest(const Valuation& f) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Value v : f.values) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xFF;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

Valuation parse_valuation(const std::string& text) {
    std::istringstream in(text);
    std::vector<Value> values;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            values.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("valuation: invalid integer '" + tok + "'");
        }
    }
    Valuation f(std::move(values));
    validate_valuation(f);
    return f;
}

std::string format_valuation(const Valuation& f) {
    std::ostringstream out;
    for (Vertex v = 0; v < f.size(); ++v) {
        if (v) out << ' ';
        out << f[v];
    }
    return out.str();
}

}  // namespace maxdyn
