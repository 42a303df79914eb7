#pragma once

// Independent reference implementations used only by tests: brute-force
// inclusion-exclusion, Monte-Carlo reachability, and exhaustive path
// enumeration. Deliberately slow and simple.

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fashion/attack_graph.hpp"
#include "fashion/rng.hpp"

namespace oracles {

using namespace fashion;

// Explicit inclusion-exclusion sum over all non-empty subsets.
inline double bayes_subset_sum(const std::vector<double>& p) {
    const std::size_t n = p.size();
    double total = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double term = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) term *= p[i];
        total += (std::popcount(mask) % 2 == 1) ? term : -term;
    }
    return total;
}

// Per-node reachability frequency: each exploit succeeds independently with
// its probability, then least-fixpoint reachability is computed.
inline std::vector<double> monte_carlo_scores(const AttackGraph& g, int samples,
                                              std::uint64_t seed) {
    Rng rng(seed);
    const int n = g.node_count();
    std::vector<long long> hits(static_cast<std::size_t>(n), 0);
    std::vector<int> needed(static_cast<std::size_t>(n), 1);
    for (NodeId v = 0; v < n; ++v)
        if (g.is_exploit(v) && g.exploit(v).logic == ExploitLogic::And)
            needed[static_cast<std::size_t>(v)] = static_cast<int>(g.predecessors(v).size());

    std::vector<char> success(static_cast<std::size_t>(g.exploit_count()), 0);
    std::vector<int> satisfied(static_cast<std::size_t>(n), 0);
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> work;

    for (int s = 0; s < samples; ++s) {
        for (int j = 0; j < g.exploit_count(); ++j)
            success[static_cast<std::size_t>(j)] =
                rng.bernoulli(g.exploits()[static_cast<std::size_t>(j)].probability);
        std::fill(satisfied.begin(), satisfied.end(), 0);
        std::fill(reached.begin(), reached.end(), 0);
        work.clear();
        for (int c : g.start()) {
            reached[static_cast<std::size_t>(c)] = 1;
            work.push_back(g.capability_node(c));
        }
        while (!work.empty()) {
            NodeId u = work.back();
            work.pop_back();
            for (NodeId v : g.successors(u)) {
                if (reached[static_cast<std::size_t>(v)]) continue;
                if (++satisfied[static_cast<std::size_t>(v)] < needed[static_cast<std::size_t>(v)]) continue;
                if (g.is_exploit(v) && !success[static_cast<std::size_t>(g.exploit_index(v))]) continue;
                reached[static_cast<std::size_t>(v)] = 1;
                work.push_back(v);
            }
        }
        for (NodeId v = 0; v < n; ++v) hits[static_cast<std::size_t>(v)] += reached[static_cast<std::size_t>(v)];
    }
    std::vector<double> freq(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v)
        freq[static_cast<std::size_t>(v)] =
            static_cast<double>(hits[static_cast<std::size_t>(v)]) / samples;
    return freq;
}

// Maximum product over all simple sigma -> mu paths, severed edges replaced
// by epsilon; exhaustive depth-first enumeration.
inline double brute_force_path(const AttackGraph& g, const EdgeSet& severed, double epsilon) {
    const NodeId mu = *g.mu();
    double best = 0.0;
    std::vector<char> visited(static_cast<std::size_t>(g.node_count()), 0);

    auto weight = [&](NodeId from, NodeId to) {
        if (severed.contains(from, to)) return epsilon;
        return g.is_exploit(to) ? g.exploit(to).probability : 1.0;
    };
    auto dfs = [&](auto&& self, NodeId u, double prod) -> void {
        if (u == mu) {
            best = std::max(best, prod);
            return;
        }
        for (NodeId v : g.successors(u)) {
            if (visited[static_cast<std::size_t>(v)]) continue;
            visited[static_cast<std::size_t>(v)] = 1;
            self(self, v, prod * weight(u, v));
            visited[static_cast<std::size_t>(v)] = 0;
        }
    };
    for (int s : g.start()) {
        NodeId v = g.capability_node(s);
        std::fill(visited.begin(), visited.end(), 0);
        visited[static_cast<std::size_t>(v)] = 1;
        dfs(dfs, v, 1.0);
    }
    return best;
}

} // namespace oracles
