#pragma once

// Shared graph fixtures for the test suites. The "toy" network is the small
// driving scenario used across modules: three SDN devices (0..2, device 0 is
// the external entry), four hosts (3..6), six typed flows, and four host
// vulnerabilities chained behind network reachability.

#include <map>
#include <string>
#include <vector>

#include "fashion/attack_graph.hpp"
#include "fashion/network_model.hpp"
#include "fashion/rng.hpp"

namespace fixtures {

using namespace fashion;

struct ToyGraph {
    AttackGraph graph;
    // capability indexes
    int c_0A, c_0B;          // attacker entry (device 0, both traffic types)
    int c_3A, c_4A, c_4B, c_5A, c_5B, c_6A; // privilege-0 reachability
    int c_31, c_41, c_51, c_61;             // privilege-1
    // exploit indexes (order: network exploits, then vulnerabilities 0..3)
    int net_03A, net_34A, net_34B, net_35A, net_35B, net_56A;
    int vx0, vx1, vx2, vx3;

    NodeId ex_node(int ex_index) const { return graph.exploit_node(ex_index); }
    NodeId cap_node(int cap_index) const { return graph.capability_node(cap_index); }
};

inline Capability cap(std::string device, int priv, double impact,
                      std::string traffic = "") {
    Capability c;
    c.device = std::move(device);
    c.privilege = priv;
    c.impact = impact;
    if (priv == 0) c.traffic_type = traffic;
    return c;
}

inline Exploit net_exploit(std::string type, std::string target, double p = 1.0) {
    Exploit e;
    e.kind = ExploitKind::NetworkReachability;
    e.logic = ExploitLogic::Or;
    e.probability = p;
    e.traffic_type = std::move(type);
    e.target_device = std::move(target);
    return e;
}

inline Exploit vuln_exploit(ExploitLogic logic, double p = 1.0) {
    Exploit e;
    e.kind = ExploitKind::Vulnerability;
    e.logic = logic;
    e.probability = p;
    return e;
}

inline ToyGraph toy_graph() {
    ToyGraph t{AttackGraph::build({cap("0", 0, 0, "A")}, {vuln_exploit(ExploitLogic::Or)},
                                  {{0, 1}}, {{1, 0}}, {0}),
               0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};

    std::vector<Capability> caps;
    auto add_cap = [&](Capability c) {
        caps.push_back(std::move(c));
        return static_cast<int>(caps.size()) - 1;
    };
    t.c_0A = add_cap(cap("0", 0, 0.0, "A"));
    t.c_0B = add_cap(cap("0", 0, 0.0, "B"));
    t.c_3A = add_cap(cap("3", 0, 1.0, "A"));
    t.c_31 = add_cap(cap("3", 1, 5.0));
    t.c_4A = add_cap(cap("4", 0, 1.0, "A"));
    t.c_4B = add_cap(cap("4", 0, 1.0, "B"));
    t.c_41 = add_cap(cap("4", 1, 8.0));
    t.c_5A = add_cap(cap("5", 0, 1.0, "A"));
    t.c_5B = add_cap(cap("5", 0, 1.0, "B"));
    t.c_51 = add_cap(cap("5", 1, 5.0));
    t.c_6A = add_cap(cap("6", 0, 1.0, "A"));
    t.c_61 = add_cap(cap("6", 1, 10.0));

    std::vector<Exploit> exs;
    std::vector<Edge> pre, grant;
    const int nc = static_cast<int>(caps.size());
    auto add_ex = [&](Exploit e, std::vector<int> pres, std::vector<int> grants) {
        int idx = static_cast<int>(exs.size());
        NodeId node = nc + idx;
        exs.push_back(std::move(e));
        for (int c : pres) pre.push_back({c, node});
        for (int c : grants) grant.push_back({node, c});
        return idx;
    };
    t.net_03A = add_ex(net_exploit("A", "3"), {t.c_0A}, {t.c_3A});
    t.net_34A = add_ex(net_exploit("A", "4"), {t.c_31}, {t.c_4A});
    t.net_34B = add_ex(net_exploit("B", "4"), {t.c_31}, {t.c_4B});
    t.net_35A = add_ex(net_exploit("A", "5"), {t.c_31}, {t.c_5A});
    t.net_35B = add_ex(net_exploit("B", "5"), {t.c_31}, {t.c_5B});
    t.net_56A = add_ex(net_exploit("A", "6"), {t.c_51}, {t.c_6A});
    t.vx0 = add_ex(vuln_exploit(ExploitLogic::Or), {t.c_3A}, {t.c_31});
    t.vx1 = add_ex(vuln_exploit(ExploitLogic::Or), {t.c_5A}, {t.c_51});
    t.vx2 = add_ex(vuln_exploit(ExploitLogic::And), {t.c_6A, t.c_51}, {t.c_61});
    t.vx3 = add_ex(vuln_exploit(ExploitLogic::And), {t.c_4B, t.c_31}, {t.c_41});

    t.graph = AttackGraph::build(std::move(caps), std::move(exs), pre, grant,
                                 {t.c_0A, t.c_0B});
    return t;
}

// Matching network for the toy graph: device 0 is the external entry, devices
// 1 and 2 route between it and the four hosts, so every host pair has two
// disjoint paths. Flow values follow the driving table (25 / 5 / 1).
inline NetworkInstance toy_network() {
    NetworkInstance n;
    n.routers = {"0", "1", "2"};
    n.hosts = {"3", "4", "5", "6"};
    n.gateways = {"0"};
    n.traffic_types = {"A", "B"};
    auto link = [&](std::string a, std::string b) {
        n.links.push_back({std::move(a), std::move(b), 1000.0, 1.0});
    };
    link("0", "1");
    link("0", "2");
    link("1", "2");
    for (const char* h : {"3", "4", "5", "6"}) {
        link("1", h);
        link("2", h);
    }
    for (const auto& r : n.routers) n.device_capacity[r] = 10000.0;
    n.flows = {
        {"f0", "0", "3", "A", 1.0, 25.0},
        {"f1", "3", "4", "A", 1.0, 1.0},
        {"f2", "3", "4", "B", 1.0, 1.0},
        {"f3", "3", "5", "A", 1.0, 5.0},
        {"f4", "3", "5", "B", 1.0, 1.0},
        {"f5", "5", "6", "A", 1.0, 5.0},
    };
    return n;
}

// The toy host vulnerabilities; reachability exploits and the gateway entry
// capabilities come from assembly against toy_network().
inline VulnerabilitySet toy_vulns() {
    VulnerabilitySet v;
    auto add = [&](Capability c) {
        v.capabilities.push_back(std::move(c));
        return static_cast<int>(v.capabilities.size()) - 1;
    };
    int c3A = add(cap("3", 0, 1.0, "A"));
    int c31 = add(cap("3", 1, 5.0));
    int c4A = add(cap("4", 0, 1.0, "A"));
    int c4B = add(cap("4", 0, 1.0, "B"));
    int c41 = add(cap("4", 1, 8.0));
    int c5A = add(cap("5", 0, 1.0, "A"));
    int c5B = add(cap("5", 0, 1.0, "B"));
    int c51 = add(cap("5", 1, 5.0));
    int c6A = add(cap("6", 0, 1.0, "A"));
    int c61 = add(cap("6", 1, 10.0));
    (void)c4A;
    (void)c5B;
    v.exploits.push_back({ExploitLogic::Or, 1.0, {c3A}, {c31}});
    v.exploits.push_back({ExploitLogic::Or, 1.0, {c5A}, {c51}});
    v.exploits.push_back({ExploitLogic::And, 1.0, {c6A, c51}, {c61}});
    v.exploits.push_back({ExploitLogic::And, 1.0, {c4B, c31}, {c41}});
    return v;
}

// Simple start -> ex -> cap chain of n capabilities with shared probability
// and impact; the start capability carries no impact.
inline AttackGraph chain_graph(int n, double p, double impact) {
    std::vector<Capability> caps;
    caps.push_back(cap("h0", 1, 0.0));
    std::vector<Exploit> exs;
    std::vector<Edge> pre, grant;
    for (int i = 0; i < n; ++i) {
        caps.push_back(cap("h" + std::to_string(i + 1), 1, impact));
        exs.push_back(vuln_exploit(ExploitLogic::Or, p));
    }
    const int nc = n + 1;
    for (int i = 0; i < n; ++i) {
        pre.push_back({i, nc + i});
        grant.push_back({nc + i, i + 1});
    }
    return AttackGraph::build(std::move(caps), std::move(exs), pre, grant, {0});
}

// Random in-tree attack graph: every capability feeds at most one exploit and
// every exploit grants exactly one fresh capability, so out-degrees never
// exceed one, any two prerequisites have disjoint ancestries, and the
// propagated scores equal true reachability probability.
inline AttackGraph random_attack_forest(Rng& rng, int max_nodes) {
    std::vector<Capability> caps;
    std::vector<Exploit> exs;
    std::vector<std::pair<int, int>> pre_ix, grant_ix; // (cap, ex) / (ex, cap)
    std::vector<int> start;

    int roots = 1 + static_cast<int>(rng.uniform_index(2));
    std::vector<int> available;
    for (int i = 0; i < roots; ++i) {
        caps.push_back(cap("d" + std::to_string(i), 1, rng.uniform_real(0.0, 10.0)));
        start.push_back(i);
        available.push_back(i);
    }
    while (static_cast<int>(caps.size() + exs.size()) < max_nodes - 2 && !available.empty()) {
        int ex = static_cast<int>(exs.size());
        bool use_and = rng.bernoulli(0.4);
        int want = use_and && available.size() >= 2 ? 2 : 1;
        exs.push_back(vuln_exploit(use_and ? ExploitLogic::And : ExploitLogic::Or,
                                   rng.uniform_real(0.05, 1.0)));
        for (int k = 0; k < want; ++k) {
            std::size_t pick = rng.uniform_index(available.size());
            pre_ix.emplace_back(available[pick], ex);
            available.erase(available.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        int c = static_cast<int>(caps.size());
        caps.push_back(cap("d" + std::to_string(c), 1, rng.uniform_real(0.0, 10.0)));
        grant_ix.emplace_back(ex, c);
        available.push_back(c);
    }
    const int nc = static_cast<int>(caps.size());
    std::vector<Edge> pre, grant;
    for (auto [c, e] : pre_ix) pre.push_back({c, nc + e});
    for (auto [e, c] : grant_ix) grant.push_back({nc + e, c});
    return AttackGraph::build(std::move(caps), std::move(exs), pre, grant, std::move(start));
}

// General random DAG: new exploits draw prerequisites from any existing
// capability, so reconvergent fan-in (and correlation) is allowed.
inline AttackGraph random_attack_dag(Rng& rng, int max_nodes) {
    std::vector<Capability> caps;
    std::vector<Exploit> exs;
    std::vector<std::pair<int, int>> pre_ix, grant_ix;
    std::vector<int> start;

    int roots = 1 + static_cast<int>(rng.uniform_index(2));
    for (int i = 0; i < roots; ++i) {
        caps.push_back(cap("d" + std::to_string(i), 1, rng.uniform_real(0.0, 10.0)));
        start.push_back(i);
    }
    while (static_cast<int>(caps.size() + exs.size()) < max_nodes - 2) {
        int ex = static_cast<int>(exs.size());
        bool use_and = rng.bernoulli(0.35);
        int want = 1 + static_cast<int>(rng.uniform_index(use_and ? 2 : 1));
        want = std::min<int>(want, static_cast<int>(caps.size()));
        exs.push_back(vuln_exploit(use_and ? ExploitLogic::And : ExploitLogic::Or,
                                   rng.uniform_real(0.05, 1.0)));
        std::vector<int> chosen;
        while (static_cast<int>(chosen.size()) < want) {
            int c = static_cast<int>(rng.uniform_index(caps.size()));
            if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
        }
        for (int c : chosen) pre_ix.emplace_back(c, ex);
        int max_pre = *std::max_element(chosen.begin(), chosen.end());
        int c = static_cast<int>(caps.size());
        caps.push_back(cap("d" + std::to_string(c), 1, rng.uniform_real(0.0, 10.0)));
        grant_ix.emplace_back(ex, c);
        // Occasionally re-grant a capability above every prerequisite; edges
        // then always climb the capability order, keeping the graph acyclic
        // while allowing reconvergent fan-in.
        if (rng.bernoulli(0.3) && c - 1 > max_pre) {
            int target = max_pre + 1 +
                         static_cast<int>(rng.uniform_index(static_cast<std::size_t>(c - 1 - max_pre)));
            grant_ix.emplace_back(ex, target);
        }
    }
    const int nc = static_cast<int>(caps.size());
    std::vector<Edge> pre, grant;
    for (auto [c, e] : pre_ix) pre.push_back({c, nc + e});
    for (auto [e, c] : grant_ix) grant.push_back({nc + e, c});
    return AttackGraph::build(std::move(caps), std::move(exs), pre, grant, std::move(start));
}

} // namespace fixtures
