#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fashion/attack_graph.hpp"
#include "fashion/bip_model.hpp"
#include "fashion/network_model.hpp"

namespace fashion {

using Json = nlohmann::ordered_json;

struct JsonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string to_string(ExploitKind k) {
    return k == ExploitKind::NetworkReachability ? "network-reachability" : "vulnerability";
}
inline std::string to_string(ExploitLogic l) { return l == ExploitLogic::And ? "AND" : "OR"; }

inline ExploitKind exploit_kind_from_string(const std::string& s) {
    if (s == "network-reachability") return ExploitKind::NetworkReachability;
    if (s == "vulnerability") return ExploitKind::Vulnerability;
    throw JsonError("unknown exploit kind: " + s);
}
inline ExploitLogic exploit_logic_from_string(const std::string& s) {
    if (s == "AND") return ExploitLogic::And;
    if (s == "OR") return ExploitLogic::Or;
    throw JsonError("unknown exploit logic: " + s);
}

// Attack graph schema: capability records {device, privilege, traffic_type?,
// impact}; exploit records {kind, logic, probability, traffic_type?,
// target_device?, preconditions: [capability index], grants: [capability
// index]}; start: [capability index]. Round-trip stable.
inline Json graph_to_json(const AttackGraph& g) {
    Json j;
    j["capabilities"] = Json::array();
    for (const Capability& c : g.capabilities()) {
        Json jc;
        jc["device"] = c.device;
        jc["privilege"] = c.privilege;
        if (c.traffic_type) jc["traffic_type"] = *c.traffic_type;
        jc["impact"] = c.impact;
        j["capabilities"].push_back(jc);
    }
    std::vector<std::vector<int>> pre(static_cast<std::size_t>(g.exploit_count()));
    std::vector<std::vector<int>> grant(static_cast<std::size_t>(g.exploit_count()));
    for (const Edge& e : g.edges()) {
        if (g.is_capability(e.first))
            pre[static_cast<std::size_t>(g.exploit_index(e.second))].push_back(e.first);
        else
            grant[static_cast<std::size_t>(g.exploit_index(e.first))].push_back(e.second);
    }
    j["exploits"] = Json::array();
    for (int idx = 0; idx < g.exploit_count(); ++idx) {
        const Exploit& e = g.exploits()[static_cast<std::size_t>(idx)];
        Json je;
        je["kind"] = to_string(e.kind);
        je["logic"] = to_string(e.logic);
        je["probability"] = e.probability;
        if (e.traffic_type) je["traffic_type"] = *e.traffic_type;
        if (e.target_device) je["target_device"] = *e.target_device;
        je["preconditions"] = pre[static_cast<std::size_t>(idx)];
        je["grants"] = grant[static_cast<std::size_t>(idx)];
        j["exploits"].push_back(je);
    }
    j["start"] = g.start();
    return j;
}

inline AttackGraph graph_from_json(const Json& j) {
    std::vector<Capability> caps;
    for (const Json& jc : j.at("capabilities")) {
        Capability c;
        c.device = jc.at("device").get<std::string>();
        c.privilege = jc.at("privilege").get<int>();
        if (jc.contains("traffic_type")) c.traffic_type = jc.at("traffic_type").get<std::string>();
        c.impact = jc.at("impact").get<double>();
        caps.push_back(std::move(c));
    }
    const int nc = static_cast<int>(caps.size());
    std::vector<Exploit> exs;
    std::vector<Edge> pre, grant;
    int idx = 0;
    for (const Json& je : j.at("exploits")) {
        Exploit e;
        e.kind = exploit_kind_from_string(je.at("kind").get<std::string>());
        e.logic = exploit_logic_from_string(je.at("logic").get<std::string>());
        e.probability = je.at("probability").get<double>();
        if (je.contains("traffic_type")) e.traffic_type = je.at("traffic_type").get<std::string>();
        if (je.contains("target_device")) e.target_device = je.at("target_device").get<std::string>();
        NodeId ex_node = nc + idx;
        for (const Json& p : je.at("preconditions")) pre.push_back({p.get<int>(), ex_node});
        for (const Json& gr : je.at("grants")) grant.push_back({ex_node, gr.get<int>()});
        exs.push_back(std::move(e));
        ++idx;
    }
    std::vector<int> start = j.at("start").get<std::vector<int>>();
    return AttackGraph::build(std::move(caps), std::move(exs), pre, grant, std::move(start));
}

// Instance schema: {"network": {routers, hosts, gateways, links:
// [{a,b,capacity,cost?}], device_capacity?, traffic_types, flows:
// [{id,src,dst,type,quantity,value}]}, "vulnerabilities": {capabilities,
// exploits: [{logic,probability,preconditions,grants}]}}.
inline Json network_to_json(const NetworkInstance& n) {
    Json j;
    j["routers"] = n.routers;
    j["hosts"] = n.hosts;
    j["gateways"] = n.gateways;
    j["links"] = Json::array();
    for (const Link& l : n.links) {
        Json jl;
        jl["a"] = l.a;
        jl["b"] = l.b;
        jl["capacity"] = l.capacity;
        jl["cost"] = l.cost;
        j["links"].push_back(jl);
    }
    j["device_capacity"] = Json::object();
    for (const auto& [d, k] : n.device_capacity) j["device_capacity"][d] = k;
    j["traffic_types"] = n.traffic_types;
    j["flows"] = Json::array();
    for (const Flow& f : n.flows) {
        Json jf;
        jf["id"] = f.id;
        jf["src"] = f.src;
        jf["dst"] = f.dst;
        jf["type"] = f.traffic_type;
        jf["quantity"] = f.quantity;
        jf["value"] = f.value;
        j["flows"].push_back(jf);
    }
    return j;
}

inline NetworkInstance network_from_json(const Json& j) {
    NetworkInstance n;
    n.routers = j.at("routers").get<std::vector<std::string>>();
    n.hosts = j.at("hosts").get<std::vector<std::string>>();
    n.gateways = j.at("gateways").get<std::vector<std::string>>();
    for (const Json& jl : j.at("links")) {
        Link l;
        l.a = jl.at("a").get<std::string>();
        l.b = jl.at("b").get<std::string>();
        l.capacity = jl.at("capacity").get<double>();
        l.cost = jl.contains("cost") ? jl.at("cost").get<double>() : 1.0;
        n.links.push_back(std::move(l));
    }
    if (j.contains("device_capacity"))
        for (auto it = j.at("device_capacity").begin(); it != j.at("device_capacity").end(); ++it)
            n.device_capacity[it.key()] = it.value().get<double>();
    n.traffic_types = j.at("traffic_types").get<std::vector<std::string>>();
    for (const Json& jf : j.at("flows")) {
        Flow f;
        f.id = jf.at("id").get<std::string>();
        f.src = jf.at("src").get<std::string>();
        f.dst = jf.at("dst").get<std::string>();
        f.traffic_type = jf.at("type").get<std::string>();
        f.quantity = jf.at("quantity").get<double>();
        f.value = jf.at("value").get<double>();
        n.flows.push_back(std::move(f));
    }
    return n;
}

inline Json vulns_to_json(const VulnerabilitySet& v) {
    Json j;
    j["capabilities"] = Json::array();
    for (const Capability& c : v.capabilities) {
        Json jc;
        jc["device"] = c.device;
        jc["privilege"] = c.privilege;
        if (c.traffic_type) jc["traffic_type"] = *c.traffic_type;
        jc["impact"] = c.impact;
        j["capabilities"].push_back(jc);
    }
    j["exploits"] = Json::array();
    for (const auto& e : v.exploits) {
        Json je;
        je["logic"] = to_string(e.logic);
        je["probability"] = e.probability;
        je["preconditions"] = e.preconditions;
        je["grants"] = e.grants;
        j["exploits"].push_back(je);
    }
    return j;
}

inline VulnerabilitySet vulns_from_json(const Json& j) {
    VulnerabilitySet v;
    for (const Json& jc : j.at("capabilities")) {
        Capability c;
        c.device = jc.at("device").get<std::string>();
        c.privilege = jc.at("privilege").get<int>();
        if (jc.contains("traffic_type")) c.traffic_type = jc.at("traffic_type").get<std::string>();
        c.impact = jc.at("impact").get<double>();
        v.capabilities.push_back(std::move(c));
    }
    for (const Json& je : j.at("exploits")) {
        VulnerabilitySet::VulnExploit e;
        e.logic = exploit_logic_from_string(je.at("logic").get<std::string>());
        e.probability = je.at("probability").get<double>();
        e.preconditions = je.at("preconditions").get<std::vector<int>>();
        e.grants = je.at("grants").get<std::vector<int>>();
        v.exploits.push_back(std::move(e));
    }
    return v;
}

inline Json instance_to_json(const NetworkInstance& n, const VulnerabilitySet& v) {
    Json j;
    j["network"] = network_to_json(n);
    j["vulnerabilities"] = vulns_to_json(v);
    return j;
}

inline std::pair<NetworkInstance, VulnerabilitySet> instance_from_json(const Json& j) {
    return {network_from_json(j.at("network")), vulns_from_json(j.at("vulnerabilities"))};
}

inline Json weights_to_json(const ModelWeights& w) {
    Json j;
    j["alpha"] = w.alpha;
    j["beta"] = w.beta;
    j["alpha0"] = w.alpha0;
    j["alpha1"] = w.alpha1;
    j["alpha2"] = w.alpha2;
    j["alpha3"] = w.alpha3;
    j["alpha4"] = w.alpha4;
    j["beta0"] = w.beta0;
    j["epsilon"] = w.epsilon;
    return j;
}

inline ModelWeights weights_from_json(const Json& j) {
    ModelWeights w;
    auto get = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    get("alpha", w.alpha);
    get("beta", w.beta);
    get("alpha0", w.alpha0);
    get("alpha1", w.alpha1);
    get("alpha2", w.alpha2);
    get("alpha3", w.alpha3);
    get("alpha4", w.alpha4);
    get("beta0", w.beta0);
    get("epsilon", w.epsilon);
    w.validate();
    return w;
}

// Configuration schema: {"routing": [{device, flow, next_hop}], "firewalls":
// [{device, kind, selector}], "blocked": [...], "delivered": [...],
// "objective_terms": {Of, Od, Or, Op}}.
inline Json configuration_to_json(const Configuration& c) {
    Json j;
    j["routing"] = Json::array();
    for (const RoutingEntry& r : c.routing) {
        Json jr;
        jr["device"] = r.device;
        jr["flow"] = r.flow;
        jr["next_hop"] = r.next_hop;
        j["routing"].push_back(jr);
    }
    j["firewalls"] = Json::array();
    for (const FirewallRule& f : c.firewalls) {
        Json jf;
        jf["device"] = f.device;
        jf["kind"] = f.kind;
        jf["selector"] = f.selector;
        j["firewalls"].push_back(jf);
    }
    j["blocked"] = c.blocked;
    j["delivered"] = c.delivered;
    j["objective_terms"] = Json::object();
    j["objective_terms"]["Of"] = c.objective_terms.functionality;
    j["objective_terms"]["Od"] = c.objective_terms.defense_cost;
    j["objective_terms"]["Or"] = c.objective_terms.reach_risk;
    j["objective_terms"]["Op"] = c.objective_terms.path_risk;
    return j;
}

} // namespace fashion
