#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "cochange/analysis/method_record.hpp"

namespace cochange::analysis {

struct CallEdge {
    MethodId caller;
    MethodId callee;
    int count = 0;

    friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

/// Resolves each call site `g(args)` to every project method named `g`
/// whose arity accepts the argument count (varargs included). Calls to
/// names outside `methods` produce no edge, and self-calls are dropped.
/// Edges are sorted by (caller, callee).
std::vector<CallEdge> build_call_graph(std::span<const MethodRecord> methods);

/// Symmetric lookup over a call graph.
class CallGraph {
public:
    CallGraph() = default;
    explicit CallGraph(std::span<const CallEdge> edges);

    /// count(a -> b) + count(b -> a)
    [[nodiscard]] int calls_between(const MethodId& a, const MethodId& b) const;
    [[nodiscard]] bool linked(const MethodId& a, const MethodId& b) const { return calls_between(a, b) > 0; }

private:
    std::map<std::pair<MethodId, MethodId>, int> counts_;
};

}  // namespace cochange::analysis
