#pragma once

#include <stdexcept>
#include <string>

namespace maxdyn {

// Base for all recoverable domain errors. The CLI maps these to exit code 1,
// as opposed to usage errors (exit code 2).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotStronglyConnected : DomainError {
    explicit NotStronglyConnected(const std::string& what = "graph is not strongly connected")
        : DomainError(what) {}
};

struct NotUndirected : DomainError {
    explicit NotUndirected(const std::string& what = "graph is not undirected (edges not paired)")
        : DomainError(what) {}
};

struct CapExceeded : DomainError {
    using DomainError::DomainError;
};

struct BudgetExceeded : DomainError {
    using DomainError::DomainError;
};

// Some chain state cannot reach an absorbing state; the expected hitting
// time from there is infinite and is reported rather than computed.
struct NonAbsorbingReachability : DomainError {
    using DomainError::DomainError;
};

struct ParseError : DomainError {
    using DomainError::DomainError;
};

}  // namespace maxdyn
