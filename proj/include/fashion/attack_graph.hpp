#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fashion {

// Node ids: capabilities occupy [0, capability_count), exploits occupy
// [capability_count, node_count). The attacker's artificial entry point sigma
// is never materialized as a node; it is addressed by kSigmaNode and its only
// edges run to the start capabilities. The artificial target mu, when present
// (see augment_with_targets), is an ordinary capability node with impact 0.
using NodeId = int;
inline constexpr NodeId kSigmaNode = -1;

using Edge = std::pair<NodeId, NodeId>;

// Sorted unique edge set with binary-search membership.
class EdgeSet {
public:
    EdgeSet() = default;
    EdgeSet(std::initializer_list<Edge> edges) : edges_(edges) { normalize(); }
    explicit EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) { normalize(); }

    void insert(Edge e) {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || *it != e) edges_.insert(it, e);
    }
    bool contains(Edge e) const {
        return std::binary_search(edges_.begin(), edges_.end(), e);
    }
    bool contains(NodeId from, NodeId to) const { return contains(Edge{from, to}); }
    bool empty() const { return edges_.empty(); }
    std::size_t size() const { return edges_.size(); }
    const std::vector<Edge>& items() const { return edges_; }

private:
    void normalize() {
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    }
    std::vector<Edge> edges_;
};

struct Capability {
    std::string device;
    int privilege = 0; // 0 = network reachability, 1 = user, 2 = root
    std::optional<std::string> traffic_type; // present iff privilege == 0
    double impact = 0.0;
};

enum class ExploitKind { NetworkReachability, Vulnerability };
enum class ExploitLogic { And, Or };

struct Exploit {
    ExploitKind kind = ExploitKind::Vulnerability;
    ExploitLogic logic = ExploitLogic::Or;
    double probability = 1.0; // in (0, 1]
    std::optional<std::string> traffic_type;  // network exploits only
    std::optional<std::string> target_device; // network exploits only
};

struct GraphError : std::runtime_error {
    enum class Code {
        BipartiteViolation,
        DanglingEdge,
        EmptyStart,
        UnknownNode,
        InvalidCapability,
        InvalidExploit,
        NotAugmented,
    };
    GraphError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Code code;
};

class AttackGraph {
public:
    // Edges are given in node-id space: capability i has node id i, exploit j
    // has node id capabilities.size() + j. `prereq_edges` run capability ->
    // exploit, `grant_edges` exploit -> capability; anything else is a
    // BipartiteViolation. `start` holds capability indexes.
    static AttackGraph build(std::vector<Capability> capabilities,
                             std::vector<Exploit> exploits,
                             const std::vector<Edge>& prereq_edges,
                             const std::vector<Edge>& grant_edges,
                             std::vector<int> start);

    int capability_count() const { return static_cast<int>(capabilities_.size()); }
    int exploit_count() const { return static_cast<int>(exploits_.size()); }
    int node_count() const { return capability_count() + exploit_count(); }

    NodeId capability_node(int cap_index) const { return cap_index; }
    NodeId exploit_node(int ex_index) const { return capability_count() + ex_index; }
    bool is_capability(NodeId n) const { return n >= 0 && n < capability_count(); }
    bool is_exploit(NodeId n) const { return n >= capability_count() && n < node_count(); }
    int capability_index(NodeId n) const { return n; }
    int exploit_index(NodeId n) const { return n - capability_count(); }

    const std::vector<Capability>& capabilities() const { return capabilities_; }
    const std::vector<Exploit>& exploits() const { return exploits_; }
    const Capability& capability(NodeId n) const { return capabilities_[static_cast<std::size_t>(n)]; }
    const Exploit& exploit(NodeId n) const { return exploits_[static_cast<std::size_t>(exploit_index(n))]; }

    // All edges (prereq then grant semantics folded into one sorted list).
    const std::vector<Edge>& edges() const { return edges_; }

    // Sorted capability indexes the attacker holds initially.
    const std::vector<int>& start() const { return start_; }
    bool is_start_capability(int cap_index) const {
        return std::binary_search(start_.begin(), start_.end(), cap_index);
    }

    // Set on graphs returned by augment_with_targets.
    std::optional<NodeId> mu() const { return mu_; }
    bool augmented() const { return mu_.has_value(); }

    std::span<const NodeId> predecessors(NodeId n) const {
        if (n == kSigmaNode) return {};
        check_node(n);
        return {preds_.data() + pred_offsets_[static_cast<std::size_t>(n)],
                preds_.data() + pred_offsets_[static_cast<std::size_t>(n) + 1]};
    }
    std::span<const NodeId> successors(NodeId n) const {
        if (n == kSigmaNode) return {sigma_succs_.data(), sigma_succs_.size()};
        check_node(n);
        return {succs_.data() + succ_offsets_[static_cast<std::size_t>(n)],
                succs_.data() + succ_offsets_[static_cast<std::size_t>(n) + 1]};
    }

    // Max-normalized impacts for every positive-impact capability, keyed by
    // capability index: lambda_c = impact(c) / max impact. Empty when no
    // capability has positive impact.
    std::map<int, double> normalized_impacts() const;

    // Returns a copy of this graph extended with the artificial target mu:
    // one auxiliary OR exploit per capability listed in `lambda` (probability
    // lambda_c), each granting mu. Lambda values must lie in (0,1].
    AttackGraph augment_with_targets(const std::map<int, double>& lambda) const;

private:
    void check_node(NodeId n) const {
        if (n < 0 || n >= node_count())
            throw GraphError(GraphError::Code::UnknownNode,
                             "unknown node id " + std::to_string(n));
    }
    void rebuild_adjacency();

    std::vector<Capability> capabilities_;
    std::vector<Exploit> exploits_;
    std::vector<Edge> edges_; // sorted
    std::vector<int> start_;  // sorted capability indexes
    std::optional<NodeId> mu_;

    // CSR adjacency over node ids, neighbor lists sorted.
    std::vector<std::size_t> pred_offsets_, succ_offsets_;
    std::vector<NodeId> preds_, succs_;
    std::vector<NodeId> sigma_succs_; // start capability nodes
};

inline AttackGraph AttackGraph::build(std::vector<Capability> capabilities,
                                      std::vector<Exploit> exploits,
                                      const std::vector<Edge>& prereq_edges,
                                      const std::vector<Edge>& grant_edges,
                                      std::vector<int> start) {
    AttackGraph g;
    const int nc = static_cast<int>(capabilities.size());
    const int ne = static_cast<int>(exploits.size());

    for (int i = 0; i < nc; ++i) {
        const Capability& c = capabilities[static_cast<std::size_t>(i)];
        if (c.impact < 0.0)
            throw GraphError(GraphError::Code::InvalidCapability,
                             "capability " + std::to_string(i) + " has negative impact");
        if (c.privilege < 0 || c.privilege > 2)
            throw GraphError(GraphError::Code::InvalidCapability,
                             "capability " + std::to_string(i) + " privilege outside {0,1,2}");
        if ((c.privilege == 0) != c.traffic_type.has_value())
            throw GraphError(GraphError::Code::InvalidCapability,
                             "capability " + std::to_string(i) +
                                 ": traffic type present iff privilege 0");
    }
    for (int j = 0; j < ne; ++j) {
        const Exploit& e = exploits[static_cast<std::size_t>(j)];
        if (!(e.probability > 0.0) || e.probability > 1.0)
            throw GraphError(GraphError::Code::InvalidExploit,
                             "exploit " + std::to_string(j) + " probability outside (0,1]");
        if (e.kind == ExploitKind::NetworkReachability) {
            if (e.logic != ExploitLogic::Or)
                throw GraphError(GraphError::Code::InvalidExploit,
                                 "network exploit " + std::to_string(j) + " must be OR");
            if (!e.traffic_type || !e.target_device)
                throw GraphError(GraphError::Code::InvalidExploit,
                                 "network exploit " + std::to_string(j) +
                                     " needs traffic type and target device");
        }
    }

    if (start.empty())
        throw GraphError(GraphError::Code::EmptyStart, "start set is empty");
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    for (int s : start)
        if (s < 0 || s >= nc)
            throw GraphError(GraphError::Code::DanglingEdge,
                             "start references unknown capability " + std::to_string(s));

    const int nn = nc + ne;
    auto is_cap = [nc](NodeId v) { return v >= 0 && v < nc; };
    auto in_range = [nn](NodeId v) { return v >= 0 && v < nn; };

    std::vector<Edge> edges;
    edges.reserve(prereq_edges.size() + grant_edges.size());
    for (const Edge& e : prereq_edges) {
        if (!in_range(e.first) || !in_range(e.second))
            throw GraphError(GraphError::Code::DanglingEdge, "prerequisite edge out of range");
        if (!is_cap(e.first) || is_cap(e.second))
            throw GraphError(GraphError::Code::BipartiteViolation,
                             "prerequisite edges must run capability -> exploit");
        edges.push_back(e);
    }
    for (const Edge& e : grant_edges) {
        if (!in_range(e.first) || !in_range(e.second))
            throw GraphError(GraphError::Code::DanglingEdge, "grant edge out of range");
        if (is_cap(e.first) || !is_cap(e.second))
            throw GraphError(GraphError::Code::BipartiteViolation,
                             "grant edges must run exploit -> capability");
        edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Every exploit needs at least one prerequisite and one granted capability.
    std::vector<char> has_pre(static_cast<std::size_t>(ne), 0), has_grant(static_cast<std::size_t>(ne), 0);
    for (const Edge& e : edges) {
        if (e.second >= nc) has_pre[static_cast<std::size_t>(e.second - nc)] = 1;
        if (e.first >= nc) has_grant[static_cast<std::size_t>(e.first - nc)] = 1;
    }
    for (int j = 0; j < ne; ++j) {
        if (!has_pre[static_cast<std::size_t>(j)])
            throw GraphError(GraphError::Code::DanglingEdge,
                             "exploit " + std::to_string(j) + " has no prerequisite");
        if (!has_grant[static_cast<std::size_t>(j)])
            throw GraphError(GraphError::Code::DanglingEdge,
                             "exploit " + std::to_string(j) + " grants nothing");
    }

    g.capabilities_ = std::move(capabilities);
    g.exploits_ = std::move(exploits);
    g.edges_ = std::move(edges);
    g.start_ = std::move(start);
    g.rebuild_adjacency();
    return g;
}

inline void AttackGraph::rebuild_adjacency() {
    const std::size_t n = static_cast<std::size_t>(node_count());
    pred_offsets_.assign(n + 1, 0);
    succ_offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
        ++succ_offsets_[static_cast<std::size_t>(e.first) + 1];
        ++pred_offsets_[static_cast<std::size_t>(e.second) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        pred_offsets_[i + 1] += pred_offsets_[i];
        succ_offsets_[i + 1] += succ_offsets_[i];
    }
    preds_.assign(edges_.size(), 0);
    succs_.assign(edges_.size(), 0);
    std::vector<std::size_t> pfill(pred_offsets_.begin(), pred_offsets_.end() - 1);
    std::vector<std::size_t> sfill(succ_offsets_.begin(), succ_offsets_.end() - 1);
    for (const Edge& e : edges_) { // edges_ sorted => neighbor lists sorted
        succs_[sfill[static_cast<std::size_t>(e.first)]++] = e.second;
        preds_[pfill[static_cast<std::size_t>(e.second)]++] = e.first;
    }
    sigma_succs_.clear();
    for (int s : start_) sigma_succs_.push_back(capability_node(s));
}

inline std::map<int, double> AttackGraph::normalized_impacts() const {
    double max_impact = 0.0;
    for (const Capability& c : capabilities_) max_impact = std::max(max_impact, c.impact);
    std::map<int, double> lambda;
    if (max_impact <= 0.0) return lambda;
    for (int i = 0; i < capability_count(); ++i) {
        double impact = capabilities_[static_cast<std::size_t>(i)].impact;
        if (impact > 0.0) lambda[i] = impact / max_impact;
    }
    return lambda;
}

inline AttackGraph AttackGraph::augment_with_targets(const std::map<int, double>& lambda) const {
    if (augmented())
        throw GraphError(GraphError::Code::InvalidCapability, "graph already has a target node");
    std::vector<Capability> caps = capabilities_;
    std::vector<Exploit> exs = exploits_;
    const int nc_old = capability_count();

    Capability mu_cap;
    mu_cap.device = "mu";
    mu_cap.privilege = 2;
    mu_cap.impact = 0.0;
    caps.push_back(mu_cap);
    const int mu_index = nc_old;

    // Node ids shift: the new graph has one more capability, so exploit j
    // moves from node nc_old + j to node nc_old + 1 + j.
    std::vector<Edge> pre, grant;
    for (const Edge& e : edges_) {
        if (is_capability(e.first)) pre.emplace_back(e.first, e.second + 1);
        else grant.emplace_back(e.first + 1, e.second);
    }
    for (const auto& [cap_index, value] : lambda) {
        if (cap_index < 0 || cap_index >= nc_old)
            throw GraphError(GraphError::Code::UnknownNode,
                             "lambda references unknown capability " + std::to_string(cap_index));
        if (!(value > 0.0) || value > 1.0)
            throw GraphError(GraphError::Code::InvalidExploit,
                             "lambda value outside (0,1] for capability " + std::to_string(cap_index));
        Exploit aux;
        aux.kind = ExploitKind::Vulnerability;
        aux.logic = ExploitLogic::Or;
        aux.probability = value;
        NodeId aux_node = nc_old + 1 + static_cast<int>(exs.size());
        exs.push_back(aux);
        pre.emplace_back(cap_index, aux_node);
        grant.emplace_back(aux_node, mu_index);
    }

    AttackGraph out = build(std::move(caps), std::move(exs), pre, grant, start_);
    out.mu_ = out.capability_node(mu_index);
    return out;
}

} // namespace fashion
