#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "maxdyn/graph.hpp"

namespace maxdyn {

using Value = std::uint64_t;

// Per-vertex positive integers. Raw inputs may use any positive 64-bit
// values; the order-preserving rank compression below maps them into
// {1..k} without changing the dynamics.
struct Valuation {
    std::vector<Value> values;

    Valuation() = default;
    explicit Valuation(std::vector<Value> v) : values(std::move(v)) {}

    static Valuation constant(Vertex n, Value k);

    Vertex size() const { return static_cast<Vertex>(values.size()); }
    Value operator[](Vertex v) const { return values[v]; }

    friend bool operator==(const Valuation&, const Valuation&) = default;
    friend auto operator<=>(const Valuation& a, const Valuation& b) {
        return a.values <=> b.values;
    }
};

// Throws DomainError unless all entries are >= 1 and the length matches n
// (n = 0 skips the length check).
void validate_valuation(const Valuation& f, Vertex n = 0);

Value max_value(const Valuation& f);

// Indices of the vertices holding the maximum value.
VertexSet argmax_set(const Valuation& f);

// Rank compression: output[v] = 1 + number of distinct values below f[v].
// Order-preserving, idempotent, and the canonical representative of f's
// order class.
Valuation canonicalize(const Valuation& f);

// Values lie in [1, n] and the set of distinct values is {1..k} with no gaps.
bool is_canonical(const Valuation& f);

// The order class of a valuation, keyed by its canonical representative. Two
// valuations compare pairwise identically iff their classes are equal.
class OrderClass {
public:
    static OrderClass of(const Valuation& f) { return OrderClass(canonicalize(f)); }
    const Valuation& canonical() const { return canonical_; }
    friend bool operator==(const OrderClass&, const OrderClass&) = default;

private:
    explicit OrderClass(Valuation canonical) : canonical_(std::move(canonical)) {}
    Valuation canonical_;
};

// True iff some graph automorphism of g maps f onto h preserving all pairwise
// value comparisons. Brute force over vertex permutations; refuses to start
// when n! exceeds automorphism_budget.
bool order_equivalent(const DirectedGraph& g, const Valuation& f, const Valuation& h,
                      std::uint64_t automorphism_budget = 50'000'000);

// Number of canonical valuations of length n (the ordered Bell number).
std::uint64_t canonical_class_count(Vertex n);

// Yields every canonical valuation of length n once, in lexicographic order
// (no canonical order exists for order classes; lexicographic is this
// project's fixed choice). cap bounds n (CapExceeded beyond).
void for_each_canonical(Vertex n, const std::function<void(const Valuation&)>& fn,
                        Vertex cap = 6);
std::vector<Valuation> enumerate_canonical(Vertex n, Vertex cap = 6);

// 64-bit FNV-1a digest, used when trajectories do not keep full valuations.
std::uint64_t digest(const Valuation& f);

// Text format: whitespace-separated positive integers on one line.
Valuation parse_valuation(const std::string& text);
std::string format_valuation(const Valuation& f);

}  // namespace maxdyn
