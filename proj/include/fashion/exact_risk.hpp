#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fashion/attack_graph.hpp"

namespace fashion {

struct RiskError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Independent-union probability: 0 on empty input, else 1 - prod(1 - p_i).
// Equals the inclusion-exclusion subset sum over the inputs.
inline double bayes(std::span<const double> probs) {
    if (probs.empty()) return 0.0;
    double none = 1.0;
    for (double p : probs) {
        if (!(p >= 0.0) || p > 1.0) throw RiskError("bayes input outside [0,1]");
        none *= 1.0 - p;
    }
    return 1.0 - none;
}

inline double bayes(const std::vector<double>& probs) {
    return bayes(std::span<const double>(probs.data(), probs.size()));
}

// Cumulative reachability scores per node id.
struct CumulativeScores {
    std::vector<double> p;
    double at(NodeId n) const { return p[static_cast<std::size_t>(n)]; }
};

namespace detail {

// Bayesian propagation with cycle handling. Cycles with no entry point score
// zero; entry points of a cycle are scored on a reduced graph where their own
// out-edges are dropped; once every entry is fixed, the remainder of the
// cycle is evaluated with the entries' in-edges dropped. Dropping an in-edge
// of an AND exploit pins the exploit to zero (it can never fire without that
// prerequisite); dropping an in-edge of an OR node just shrinks its
// predecessor set. Severed edges are handled with the same two rules.
class RiskEvaluator {
public:
    explicit RiskEvaluator(const AttackGraph& g) : g_(g), n_(g.node_count()) {
        in_.resize(static_cast<std::size_t>(n_));
        out_.resize(static_cast<std::size_t>(n_));
        const auto& edges = g.edges();
        for (std::size_t idx = 0; idx < edges.size(); ++idx) {
            out_[static_cast<std::size_t>(edges[idx].first)].push_back(static_cast<int>(idx));
            in_[static_cast<std::size_t>(edges[idx].second)].push_back(static_cast<int>(idx));
        }
        depth_limit_ = n_ + static_cast<int>(edges.size()) + 2;
    }

    std::vector<double> run(const EdgeSet& severed) const {
        std::vector<char> present(g_.edges().size(), 1);
        std::vector<double> pinned(static_cast<std::size_t>(n_), -1.0);
        for (std::size_t idx = 0; idx < g_.edges().size(); ++idx)
            if (severed.contains(g_.edges()[idx])) drop_edge(static_cast<int>(idx), present, pinned);
        return eval(present, pinned, 0);
    }

private:
    void drop_edge(int idx, std::vector<char>& present, std::vector<double>& pinned) const {
        present[static_cast<std::size_t>(idx)] = 0;
        NodeId head = g_.edges()[static_cast<std::size_t>(idx)].second;
        if (g_.is_exploit(head) && g_.exploit(head).logic == ExploitLogic::And &&
            pinned[static_cast<std::size_t>(head)] < 0.0)
            pinned[static_cast<std::size_t>(head)] = 0.0;
    }

    double node_value(NodeId v, const std::vector<double>& score,
                      const std::vector<char>& present) const {
        std::vector<double> pred_scores;
        for (int idx : in_[static_cast<std::size_t>(v)])
            if (present[static_cast<std::size_t>(idx)])
                pred_scores.push_back(score[static_cast<std::size_t>(g_.edges()[static_cast<std::size_t>(idx)].first)]);
        if (g_.is_capability(v)) {
            if (g_.is_start_capability(g_.capability_index(v))) return 1.0;
            return bayes(pred_scores);
        }
        const Exploit& ex = g_.exploit(v);
        if (ex.logic == ExploitLogic::And) {
            double prod = ex.probability;
            for (double s : pred_scores) prod *= s;
            return pred_scores.empty() ? 0.0 : prod;
        }
        return ex.probability * bayes(pred_scores);
    }

    // Tarjan over the present-edge subgraph; emits components in reverse
    // topological order, deterministically (roots and neighbors by id).
    std::vector<std::vector<NodeId>> sccs(const std::vector<char>& present) const {
        std::vector<int> index(static_cast<std::size_t>(n_), -1), low(static_cast<std::size_t>(n_), 0);
        std::vector<char> on_stack(static_cast<std::size_t>(n_), 0);
        std::vector<NodeId> stack;
        std::vector<std::vector<NodeId>> comps;
        int next_index = 0;

        struct Frame { NodeId v; std::size_t edge_pos; };
        for (NodeId root = 0; root < n_; ++root) {
            if (index[static_cast<std::size_t>(root)] != -1) continue;
            std::vector<Frame> frames{{root, 0}};
            index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
            stack.push_back(root);
            on_stack[static_cast<std::size_t>(root)] = 1;
            while (!frames.empty()) {
                Frame& f = frames.back();
                const auto& outs = out_[static_cast<std::size_t>(f.v)];
                bool descended = false;
                while (f.edge_pos < outs.size()) {
                    int idx = outs[f.edge_pos];
                    ++f.edge_pos;
                    if (!present[static_cast<std::size_t>(idx)]) continue;
                    NodeId w = g_.edges()[static_cast<std::size_t>(idx)].second;
                    if (index[static_cast<std::size_t>(w)] == -1) {
                        index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
                        stack.push_back(w);
                        on_stack[static_cast<std::size_t>(w)] = 1;
                        frames.push_back({w, 0});
                        descended = true;
                        break;
                    }
                    if (on_stack[static_cast<std::size_t>(w)])
                        low[static_cast<std::size_t>(f.v)] =
                            std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
                }
                if (descended) continue;
                if (low[static_cast<std::size_t>(f.v)] == index[static_cast<std::size_t>(f.v)]) {
                    std::vector<NodeId> comp;
                    NodeId w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp.push_back(w);
                    } while (w != f.v);
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                NodeId done = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[static_cast<std::size_t>(frames.back().v)] =
                        std::min(low[static_cast<std::size_t>(frames.back().v)],
                                 low[static_cast<std::size_t>(done)]);
            }
        }
        std::reverse(comps.begin(), comps.end()); // topological order
        return comps;
    }

    bool has_self_loop(NodeId v, const std::vector<char>& present) const {
        for (int idx : out_[static_cast<std::size_t>(v)])
            if (present[static_cast<std::size_t>(idx)] &&
                g_.edges()[static_cast<std::size_t>(idx)].second == v)
                return true;
        return false;
    }

    std::vector<double> eval(const std::vector<char>& present, const std::vector<double>& pinned,
                             int depth) const {
        if (depth > depth_limit_)
            throw std::logic_error("attack graph cycle recursion exceeded its depth bound");
        std::vector<double> score(static_cast<std::size_t>(n_), 0.0);
        std::vector<char> in_comp(static_cast<std::size_t>(n_), 0);
        auto comps = sccs(present);
        for (const auto& comp : comps) {
            if (comp.size() == 1 && !has_self_loop(comp[0], present)) {
                NodeId v = comp[0];
                score[static_cast<std::size_t>(v)] = pinned[static_cast<std::size_t>(v)] >= 0.0
                                                         ? pinned[static_cast<std::size_t>(v)]
                                                         : node_value(v, score, present);
                continue;
            }
            // Cyclic component.
            for (NodeId v : comp) in_comp[static_cast<std::size_t>(v)] = 1;
            std::vector<NodeId> entries;
            for (NodeId v : comp) {
                bool entry = pinned[static_cast<std::size_t>(v)] >= 0.0 ||
                             (g_.is_capability(v) && g_.is_start_capability(g_.capability_index(v)));
                if (!entry) {
                    for (int idx : in_[static_cast<std::size_t>(v)]) {
                        if (!present[static_cast<std::size_t>(idx)]) continue;
                        if (!in_comp[static_cast<std::size_t>(g_.edges()[static_cast<std::size_t>(idx)].first)]) {
                            entry = true;
                            break;
                        }
                    }
                }
                if (entry) entries.push_back(v);
            }
            for (NodeId v : comp) in_comp[static_cast<std::size_t>(v)] = 0;

            if (entries.empty()) continue; // unreachable cycle: all nodes stay 0

            std::vector<std::pair<NodeId, double>> entry_scores;
            for (NodeId x : entries) {
                if (pinned[static_cast<std::size_t>(x)] >= 0.0) {
                    entry_scores.emplace_back(x, pinned[static_cast<std::size_t>(x)]);
                } else if (g_.is_capability(x) && g_.is_start_capability(g_.capability_index(x))) {
                    entry_scores.emplace_back(x, 1.0);
                } else {
                    std::vector<char> sub_present = present;
                    std::vector<double> sub_pinned = pinned;
                    for (int idx : out_[static_cast<std::size_t>(x)])
                        if (sub_present[static_cast<std::size_t>(idx)])
                            drop_edge(idx, sub_present, sub_pinned);
                    auto sub = eval(sub_present, sub_pinned, depth + 1);
                    entry_scores.emplace_back(x, sub[static_cast<std::size_t>(x)]);
                }
            }

            // Entries fixed: evaluate everything else with their in-edges gone.
            std::vector<char> rest_present = present;
            std::vector<double> rest_pinned = pinned;
            for (const auto& [x, px] : entry_scores) rest_pinned[static_cast<std::size_t>(x)] = px;
            for (const auto& [x, px] : entry_scores)
                for (int idx : in_[static_cast<std::size_t>(x)])
                    if (rest_present[static_cast<std::size_t>(idx)])
                        drop_edge(idx, rest_present, rest_pinned);
            return eval(rest_present, rest_pinned, depth + 1);
        }
        return score;
    }

    const AttackGraph& g_;
    int n_;
    std::vector<std::vector<int>> in_, out_;
    int depth_limit_;
};

} // namespace detail

// Cumulative score for every node under Bayesian propagation, severed edges
// treated as cut. Deterministic: repeated runs give bit-identical scores.
inline CumulativeScores arisk(const AttackGraph& g, const EdgeSet& severed = {}) {
    detail::RiskEvaluator ev(g);
    return CumulativeScores{ev.run(severed)};
}

// Risk(G) = sum over capabilities of P(c) * impact(c).
inline double risk(const AttackGraph& g, const EdgeSet& severed = {}) {
    CumulativeScores scores = arisk(g, severed);
    double total = 0.0;
    for (int i = 0; i < g.capability_count(); ++i)
        total += scores.p[static_cast<std::size_t>(i)] * g.capabilities()[static_cast<std::size_t>(i)].impact;
    return total;
}

} // namespace fashion
