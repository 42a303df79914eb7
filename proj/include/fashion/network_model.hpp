#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fashion/attack_graph.hpp"

namespace fashion {

struct NetworkError : std::runtime_error {
    enum class Code {
        UnknownDevice,
        NonPositiveCapacity,
        SelfLoopFlow,
        DuplicateId,
        BadGateway,
        UnknownType,
        UnroutableFlow,
    };
    NetworkError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    Code code;
};

// Bidirectional physical link; the optimizer expands it into two directed
// arcs that each carry `capacity` Mb/s.
struct Link {
    std::string a, b;
    double capacity = 0.0;
    double cost = 1.0;
};

struct Flow {
    std::string id;
    std::string src, dst;
    std::string traffic_type;
    double quantity = 0.0; // Mb/s
    double value = 0.0;
};

struct NetworkInstance {
    std::vector<std::string> routers;  // SDN devices (route and firewall)
    std::vector<std::string> hosts;
    std::vector<std::string> gateways; // subset of routers, the attacker entry
    std::vector<Link> links;
    std::map<std::string, double> device_capacity; // router -> Mb/s, absent = uncapped
    std::vector<std::string> traffic_types;
    std::vector<Flow> flows;

    bool is_router(const std::string& d) const {
        return std::find(routers.begin(), routers.end(), d) != routers.end();
    }
    bool is_host(const std::string& d) const {
        return std::find(hosts.begin(), hosts.end(), d) != hosts.end();
    }
    bool is_gateway(const std::string& d) const {
        return std::find(gateways.begin(), gateways.end(), d) != gateways.end();
    }
};

inline void validate(const NetworkInstance& n) {
    std::set<std::string> devices;
    for (const auto& d : n.routers)
        if (!devices.insert(d).second)
            throw NetworkError(NetworkError::Code::DuplicateId, "duplicate device " + d);
    for (const auto& d : n.hosts)
        if (!devices.insert(d).second)
            throw NetworkError(NetworkError::Code::DuplicateId, "duplicate device " + d);
    for (const auto& g : n.gateways)
        if (!n.is_router(g))
            throw NetworkError(NetworkError::Code::BadGateway, "gateway " + g + " is not a router");
    std::set<std::string> types(n.traffic_types.begin(), n.traffic_types.end());
    for (const Link& l : n.links) {
        if (!devices.count(l.a) || !devices.count(l.b))
            throw NetworkError(NetworkError::Code::UnknownDevice,
                               "link " + l.a + "-" + l.b + " references unknown device");
        if (!(l.capacity > 0.0))
            throw NetworkError(NetworkError::Code::NonPositiveCapacity,
                               "link " + l.a + "-" + l.b + " needs positive capacity");
    }
    for (const auto& [d, k] : n.device_capacity) {
        if (!n.is_router(d))
            throw NetworkError(NetworkError::Code::UnknownDevice,
                               "capacity entry for unknown router " + d);
        if (!(k > 0.0))
            throw NetworkError(NetworkError::Code::NonPositiveCapacity,
                               "device capacity of " + d + " must be positive");
    }
    std::set<std::string> flow_ids;
    for (const Flow& f : n.flows) {
        if (!flow_ids.insert(f.id).second)
            throw NetworkError(NetworkError::Code::DuplicateId, "duplicate flow id " + f.id);
        if (!devices.count(f.src) || !devices.count(f.dst))
            throw NetworkError(NetworkError::Code::UnknownDevice,
                               "flow " + f.id + " references unknown device");
        if (f.src == f.dst)
            throw NetworkError(NetworkError::Code::SelfLoopFlow,
                               "flow " + f.id + " has identical endpoints");
        if (!(f.quantity > 0.0))
            throw NetworkError(NetworkError::Code::NonPositiveCapacity,
                               "flow " + f.id + " needs positive quantity");
        if (f.value < 0.0)
            throw NetworkError(NetworkError::Code::NonPositiveCapacity,
                               "flow " + f.id + " has negative value");
        if (!types.count(f.traffic_type))
            throw NetworkError(NetworkError::Code::UnknownType,
                               "flow " + f.id + " uses unknown traffic type " + f.traffic_type);
        // demand endpoints are hosts or gateways; interior switches only carry
        for (const std::string& end : {f.src, f.dst})
            if (n.is_router(end) && !n.is_gateway(end))
                throw NetworkError(NetworkError::Code::UnroutableFlow,
                                   "flow " + f.id + " terminates at interior switch " + end);
    }
}

// One network-reachability exploit per (source endpoint, destination host,
// traffic type) triple realized by at least one flow. The exploit grants the
// privilege-0 capability (dest, 0, type); its single prerequisite is the
// attacker controlling the source endpoint.
struct DerivedExploit {
    std::string source; // host or gateway originating the connection
    std::string dest;   // destination host
    std::string type;

    Exploit to_exploit() const {
        Exploit e;
        e.kind = ExploitKind::NetworkReachability;
        e.logic = ExploitLogic::Or;
        e.probability = 1.0;
        e.traffic_type = type;
        e.target_device = dest;
        return e;
    }
    auto operator<=>(const DerivedExploit&) const = default;
};

inline std::vector<DerivedExploit> derive_reachability_exploits(const NetworkInstance& n) {
    std::set<DerivedExploit> triples;
    for (const Flow& f : n.flows) {
        if (!n.is_host(f.dst)) continue; // connections into routers carry no capability
        triples.insert({f.src, f.dst, f.traffic_type});
    }
    return {triples.begin(), triples.end()};
}

// Host vulnerabilities shipped with an instance: explicit capabilities plus
// exploits referencing them by index.
struct VulnerabilitySet {
    struct VulnExploit {
        ExploitLogic logic = ExploitLogic::Or;
        double probability = 1.0;
        std::vector<int> preconditions; // capability indexes
        std::vector<int> grants;
    };
    std::vector<Capability> capabilities;
    std::vector<VulnExploit> exploits;
};

// Full attack graph for an instance: vulnerability capabilities/exploits,
// derived network-reachability exploits, and gateway start capabilities
// (one per traffic type, zero impact). Missing prerequisite or granted
// reachability capabilities are created with zero impact.
inline AttackGraph assemble_attack_graph(const NetworkInstance& net, const VulnerabilitySet& vulns) {
    std::vector<Capability> caps = vulns.capabilities;
    std::map<std::tuple<std::string, int, std::string>, int> cap_index;
    for (std::size_t i = 0; i < caps.size(); ++i)
        cap_index[{caps[i].device, caps[i].privilege,
                   caps[i].traffic_type ? *caps[i].traffic_type : std::string()}] =
            static_cast<int>(i);
    auto ensure_cap = [&](const std::string& device, int priv, const std::string& type) {
        auto key = std::make_tuple(device, priv, priv == 0 ? type : std::string());
        auto it = cap_index.find(key);
        if (it != cap_index.end()) return it->second;
        Capability c;
        c.device = device;
        c.privilege = priv;
        if (priv == 0) c.traffic_type = type;
        c.impact = 0.0;
        int idx = static_cast<int>(caps.size());
        caps.push_back(std::move(c));
        cap_index[key] = idx;
        return idx;
    };

    std::vector<int> start;
    for (const std::string& g : net.gateways)
        for (const std::string& t : net.traffic_types) start.push_back(ensure_cap(g, 0, t));

    std::vector<Exploit> exs;
    std::vector<std::pair<int, int>> pre_ix, grant_ix; // (cap, ex) / (ex, cap)
    for (const auto& v : vulns.exploits) {
        Exploit e;
        e.kind = ExploitKind::Vulnerability;
        e.logic = v.logic;
        e.probability = v.probability;
        int ex = static_cast<int>(exs.size());
        exs.push_back(std::move(e));
        for (int c : v.preconditions) pre_ix.emplace_back(c, ex);
        for (int c : v.grants) grant_ix.emplace_back(ex, c);
    }
    for (const DerivedExploit& d : derive_reachability_exploits(net)) {
        int ex = static_cast<int>(exs.size());
        exs.push_back(d.to_exploit());
        int pre = net.is_gateway(d.source) ? ensure_cap(d.source, 0, d.type)
                                           : ensure_cap(d.source, 1, "");
        pre_ix.emplace_back(pre, ex);
        grant_ix.emplace_back(ex, ensure_cap(d.dest, 0, d.type));
    }

    const int nc = static_cast<int>(caps.size());
    std::vector<Edge> pre, grant;
    for (auto [c, e] : pre_ix) pre.push_back({c, nc + e});
    for (auto [e, c] : grant_ix) grant.push_back({nc + e, c});
    return AttackGraph::build(std::move(caps), std::move(exs), pre, grant, std::move(start));
}

} // namespace fashion
