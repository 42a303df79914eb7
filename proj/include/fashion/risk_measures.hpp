#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "fashion/attack_graph.hpp"
#include "fashion/exact_risk.hpp"

namespace fashion {

// Least-fixpoint reachability under theta = 0 binarization. sigma is always
// reachable and feeds the start capabilities; an edge is traversable when its
// tail is reachable and the edge is not severed; OR nodes (capabilities,
// OR exploits) fire on one traversable in-edge, AND exploits need all of
// their in-edges traversable.
struct ReachResult {
    std::vector<NodeId> reachable; // sorted; includes kSigmaNode
    double value = 0.0;            // sum of impacts over reachable capabilities

    bool contains(NodeId n) const {
        return std::binary_search(reachable.begin(), reachable.end(), n);
    }
};

inline ReachResult reach(const AttackGraph& g, const EdgeSet& severed = {}) {
    const int n = g.node_count();
    std::vector<int> needed(static_cast<std::size_t>(n), 0);
    std::vector<int> satisfied(static_cast<std::size_t>(n), 0);
    std::vector<char> reached(static_cast<std::size_t>(n), 0);

    for (NodeId v = 0; v < n; ++v) {
        if (g.is_exploit(v) && g.exploit(v).logic == ExploitLogic::And)
            needed[static_cast<std::size_t>(v)] = static_cast<int>(g.predecessors(v).size());
        else
            needed[static_cast<std::size_t>(v)] = 1;
    }

    std::vector<NodeId> work;
    for (int s : g.start()) {
        NodeId v = g.capability_node(s);
        if (!reached[static_cast<std::size_t>(v)]) {
            reached[static_cast<std::size_t>(v)] = 1;
            work.push_back(v);
        }
    }
    while (!work.empty()) {
        NodeId u = work.back();
        work.pop_back();
        for (NodeId v : g.successors(u)) {
            if (severed.contains(u, v)) continue;
            if (reached[static_cast<std::size_t>(v)]) continue;
            if (++satisfied[static_cast<std::size_t>(v)] >= needed[static_cast<std::size_t>(v)]) {
                reached[static_cast<std::size_t>(v)] = 1;
                work.push_back(v);
            }
        }
    }

    ReachResult out;
    out.reachable.push_back(kSigmaNode);
    for (NodeId v = 0; v < n; ++v)
        if (reached[static_cast<std::size_t>(v)]) out.reachable.push_back(v);
    for (NodeId v : out.reachable)
        if (v != kSigmaNode && g.is_capability(v)) out.value += g.capability(v).impact;
    return out;
}

// Most effective attack path: maximum over sigma -> mu paths of the product
// of head-node weights (p(ex) for exploits, 1 for capabilities), with severed
// edges contributing epsilon instead. Computed as a shortest path under
// -log weights; returns 0 when mu is unreachable.
inline double path(const AttackGraph& g, const EdgeSet& severed, double epsilon) {
    if (!g.augmented())
        throw GraphError(GraphError::Code::NotAugmented,
                         "path requires a graph augmented with sigma/mu targets");
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw RiskError("epsilon must lie in (0,1)");

    const int n = g.node_count();
    const int sigma = n; // extra slot for the virtual start
    std::vector<double> dist(static_cast<std::size_t>(n) + 1,
                             std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<std::size_t>(sigma)] = 0.0;
    heap.push({0.0, sigma});

    auto edge_cost = [&](NodeId from, NodeId to) {
        double w = severed.contains(from, to)
                       ? epsilon
                       : (g.is_exploit(to) ? g.exploit(to).probability : 1.0);
        return -std::log(w);
    };

    const NodeId mu = *g.mu();
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        if (u == mu) break;
        if (u == sigma) {
            for (int s : g.start()) {
                NodeId v = g.capability_node(s);
                if (d < dist[static_cast<std::size_t>(v)]) {
                    dist[static_cast<std::size_t>(v)] = d; // weight 1 into a capability
                    heap.push({d, static_cast<int>(v)});
                }
            }
            continue;
        }
        for (NodeId v : g.successors(static_cast<NodeId>(u))) {
            double nd = d + edge_cost(static_cast<NodeId>(u), v);
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                heap.push({nd, static_cast<int>(v)});
            }
        }
    }
    double d = dist[static_cast<std::size_t>(mu)];
    if (!std::isfinite(d)) return 0.0;
    return std::exp(-d);
}

// Reach value normalized by the total impact in the graph, in [0,1].
inline double reach_normalized(const AttackGraph& g, const EdgeSet& severed = {}) {
    double total = 0.0;
    for (const Capability& c : g.capabilities()) total += c.impact;
    if (total <= 0.0) return 0.0;
    return reach(g, severed).value / total;
}

// Convex combination of the two linearizable measures.
inline double hybrid(const AttackGraph& g, const EdgeSet& severed, double beta, double epsilon) {
    return beta * reach_normalized(g, severed) + (1.0 - beta) * path(g, severed, epsilon);
}

} // namespace fashion
