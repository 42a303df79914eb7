#pragma once

// Seeded fat-tree benchmark generator: topology, two-way traffic demands, and
// synthetic host vulnerabilities. All sampling runs on the portable generator
// in rng.hpp with one independent stream per stage (seed xor a fixed salt),
// so instances are bit-reproducible across platforms.

#include <cstdint>
#include <string>
#include <vector>

#include "fashion/network_model.hpp"
#include "fashion/rng.hpp"

namespace fashion {

struct GenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenSpec {
    int pods = 4;                    // even, >= 4
    int flows_per_host = 1;          // {1, 3, 5, 10}
    int traffic_type_count = 1;      // {1, 2, 3}
    int exploitable_host_pct = 10;   // {10, 20, 30, 40, 50}
    double vulns_per_host_avg = 1.0; // [1, 5]
    std::uint64_t seed = 0;

    void validate() const {
        if (pods < 4 || pods % 2 != 0)
            throw GenError("pod count must be an even number of at least 4");
        if (flows_per_host != 1 && flows_per_host != 3 && flows_per_host != 5 &&
            flows_per_host != 10)
            throw GenError("flows per host must be one of 1, 3, 5, 10");
        if (traffic_type_count < 1 || traffic_type_count > 3)
            throw GenError("traffic type count must be 1, 2 or 3");
        int pct = exploitable_host_pct;
        if (pct != 10 && pct != 20 && pct != 30 && pct != 40 && pct != 50)
            throw GenError("exploitable host percentage must be one of 10..50 in steps of 10");
        if (vulns_per_host_avg < 1.0 || vulns_per_host_avg > 5.0)
            throw GenError("vulnerabilities per host must lie in [1,5]");
    }
};

inline constexpr std::uint64_t kTrafficSalt = 0x74726166666963ULL;
inline constexpr std::uint64_t kVulnSalt = 0x76756c6e73ULL;
inline constexpr double kFlowValues[] = {1, 2, 3, 5, 25};
inline constexpr double kLinkCapacityMbps = 1000.0; // 1 Gb/s everywhere
inline constexpr double kProbabilityFloor = 1e-6;

// k-ary fat tree: k pods of k/2 edge and k/2 aggregation switches, (k/2)^2
// core switches, k/2 hosts per edge switch, plus one gateway wired to every
// core switch. Yields k^3/4 hosts, 5k^2/4 + 1 switches and 3k^3/4 + k^2/4
// bidirectional links.
inline NetworkInstance fat_tree(int k) {
    if (k < 4 || k % 2 != 0) throw GenError("pod count must be an even number of at least 4");
    const int half = k / 2;
    NetworkInstance n;
    auto link = [&](const std::string& a, const std::string& b) {
        n.links.push_back({a, b, kLinkCapacityMbps, 1.0});
    };

    n.routers.push_back("gw");
    n.gateways.push_back("gw");
    std::vector<std::vector<std::string>> core(static_cast<std::size_t>(half));
    for (int x = 0; x < half; ++x)
        for (int y = 0; y < half; ++y) {
            std::string c = "c" + std::to_string(x) + "_" + std::to_string(y);
            core[static_cast<std::size_t>(x)].push_back(c);
            n.routers.push_back(c);
            link("gw", c);
        }
    for (int p = 0; p < k; ++p) {
        for (int s = 0; s < half; ++s) {
            std::string agg = "a" + std::to_string(p) + "_" + std::to_string(s);
            n.routers.push_back(agg);
            for (int y = 0; y < half; ++y) link(agg, core[static_cast<std::size_t>(s)][static_cast<std::size_t>(y)]);
        }
        for (int s = 0; s < half; ++s) {
            std::string edge = "e" + std::to_string(p) + "_" + std::to_string(s);
            n.routers.push_back(edge);
            for (int t = 0; t < half; ++t) link(edge, "a" + std::to_string(p) + "_" + std::to_string(t));
            for (int i = 0; i < half; ++i) {
                std::string host =
                    "h" + std::to_string(p) + "_" + std::to_string(s) + "_" + std::to_string(i);
                n.hosts.push_back(host);
                link(edge, host);
            }
        }
    }
    for (const std::string& r : n.routers) n.device_capacity[r] = kLinkCapacityMbps;
    return n;
}

inline std::vector<std::string> traffic_types_for(int count) {
    std::vector<std::string> t;
    for (int i = 0; i < count; ++i) t.push_back("t" + std::to_string(i));
    return t;
}

// hosts * flows_per_host two-way demands: 70% internal between two distinct
// hosts, 30% external between a host and the gateway; sizes 1-10 Mb/s with
// probability .9 else 100-1000 Mb/s; uniform type; value drawn from
// {1,2,3,5,25}; every demand is emitted twice, the copy reversed.
// Draw order per demand: internal?, endpoint(s), size class, size, type, value.
inline std::vector<Flow> gen_traffic(const NetworkInstance& n, const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed ^ kTrafficSalt);
    auto types = traffic_types_for(spec.traffic_type_count);
    std::vector<Flow> flows;
    const long demands = static_cast<long>(n.hosts.size()) * spec.flows_per_host;
    char idbuf[24];
    for (long d = 0; d < demands; ++d) {
        bool internal = rng.bernoulli(0.7);
        std::string src, dst;
        if (internal) {
            std::size_t a = rng.uniform_index(n.hosts.size());
            std::size_t b = rng.uniform_index(n.hosts.size() - 1);
            if (b >= a) ++b;
            src = n.hosts[a];
            dst = n.hosts[b];
        } else {
            src = n.hosts[rng.uniform_index(n.hosts.size())];
            dst = n.gateways.front();
        }
        bool small = rng.bernoulli(0.9);
        double qty = small ? rng.uniform_real(1.0, 10.0) : rng.uniform_real(100.0, 1000.0);
        std::string type = rng.pick(types);
        double value = kFlowValues[rng.uniform_index(5)];
        std::snprintf(idbuf, sizeof(idbuf), "f%06ld", 2 * d);
        flows.push_back({idbuf, src, dst, type, qty, value});
        std::snprintf(idbuf, sizeof(idbuf), "f%06ld", 2 * d + 1);
        flows.push_back({idbuf, dst, src, type, qty, value});
    }
    return flows;
}

// Synthetic vulnerabilities. Hosts get a uniform integer value in [1,100];
// capability impacts scale it by 20/40/100% for privilege 0/1/2. A share of
// hosts is exploitable; vulnerabilities escalate one privilege step each,
// with 1/2/3 prerequisites at probability .5/.25/.25. Multi-prerequisite
// exploits chain off an existing single-prerequisite exploit and draw their
// remaining prerequisites from capabilities granted so far. Exploit success
// probabilities are uniform on [1e-6, 1].
// Requires n.flows to be populated (reachability support capabilities).
inline VulnerabilitySet gen_vulnerabilities(const NetworkInstance& n, const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed ^ kVulnSalt);
    auto types = traffic_types_for(spec.traffic_type_count);

    std::map<std::string, int> host_value;
    for (const std::string& h : n.hosts)
        host_value[h] = static_cast<int>(rng.uniform_int(1, 100));

    VulnerabilitySet out;
    std::map<std::tuple<std::string, int, std::string>, int> cap_index;
    auto ensure_cap = [&](const std::string& dev, int priv, const std::string& type) {
        auto key = std::make_tuple(dev, priv, priv == 0 ? type : std::string());
        auto it = cap_index.find(key);
        if (it != cap_index.end()) return it->second;
        static const double scale[3] = {0.2, 0.4, 1.0};
        Capability c;
        c.device = dev;
        c.privilege = priv;
        if (priv == 0) c.traffic_type = type;
        c.impact = scale[priv] * host_value.at(dev);
        int idx = static_cast<int>(out.capabilities.size());
        out.capabilities.push_back(std::move(c));
        cap_index[key] = idx;
        return idx;
    };

    // exploitable pool
    long count = std::max<long>(
        1, std::lround(static_cast<double>(n.hosts.size()) * spec.exploitable_host_pct / 100.0));
    std::vector<std::string> pool = n.hosts;
    rng.shuffle(pool);
    pool.resize(static_cast<std::size_t>(std::min<long>(count, static_cast<long>(pool.size()))));
    std::vector<std::string> uninfected(n.hosts);
    std::erase_if(uninfected, [&](const std::string& h) {
        return std::find(pool.begin(), pool.end(), h) != pool.end();
    });

    long total = std::max<long>(1, std::lround(spec.vulns_per_host_avg *
                                               static_cast<double>(pool.size())));
    std::map<std::string, int> next_level;
    struct Single {
        std::string host;
        int grant_priv;
        int grant_cap;
    };
    std::vector<Single> singles;
    std::vector<int> achievable; // capability indexes granted by any exploit so far

    auto draw_probability = [&]() {
        return kProbabilityFloor + rng.uniform01() * (1.0 - kProbabilityFloor);
    };

    auto add_single = [&]() {
        // walk the pool round-robin; infect a fresh host when everyone is full
        std::string host;
        for (std::size_t tries = 0; tries <= pool.size(); ++tries) {
            const std::string& cand = pool[(singles.size() + tries) % pool.size()];
            if (next_level[cand] < 2) {
                host = cand;
                break;
            }
        }
        if (host.empty()) {
            if (!uninfected.empty()) {
                std::size_t pick = rng.uniform_index(uninfected.size());
                host = uninfected[pick];
                uninfected.erase(uninfected.begin() + static_cast<std::ptrdiff_t>(pick));
                pool.push_back(host);
            } else {
                host = pool[rng.uniform_index(pool.size())]; // saturated: stack duplicates
                next_level[host] = 0;
            }
        }
        int level = next_level[host];
        int pre = level == 0 ? ensure_cap(host, 0, rng.pick(types)) : ensure_cap(host, 1, "");
        int grant = ensure_cap(host, level + 1, "");
        next_level[host] = level + 1;
        VulnerabilitySet::VulnExploit e;
        e.logic = ExploitLogic::Or;
        e.probability = draw_probability();
        e.preconditions = {pre};
        e.grants = {grant};
        out.exploits.push_back(e);
        singles.push_back({host, level + 1, grant});
        achievable.push_back(grant);
    };

    auto add_multi = [&](int extra_pres) {
        if (singles.empty()) {
            add_single();
            return;
        }
        const Single* primary = nullptr;
        for (int tries = 0; tries < 4; ++tries) {
            const Single& cand = singles[rng.uniform_index(singles.size())];
            primary = &cand;
            if (cand.grant_priv < 2) break;
        }
        int grant_priv = std::min(primary->grant_priv + 1, 2);
        int pre1 = primary->grant_cap;
        int grant = ensure_cap(primary->host, grant_priv, "");
        VulnerabilitySet::VulnExploit e;
        e.logic = ExploitLogic::And;
        e.probability = draw_probability();
        e.preconditions = {pre1};
        for (int k = 0; k < extra_pres; ++k) {
            // draw a distinct achievable capability, skipping the primary and the grant
            int chosen = -1;
            for (int tries = 0; tries < 8 && chosen < 0; ++tries) {
                int cand = achievable[rng.uniform_index(achievable.size())];
                if (cand == grant) continue;
                if (std::find(e.preconditions.begin(), e.preconditions.end(), cand) !=
                    e.preconditions.end())
                    continue;
                chosen = cand;
            }
            if (chosen >= 0) e.preconditions.push_back(chosen);
        }
        e.grants = {grant};
        out.exploits.push_back(e);
        achievable.push_back(grant);
    };

    for (long v = 0; v < total; ++v) {
        double roll = rng.uniform01();
        if (roll < 0.5) add_single();
        else if (roll < 0.75) add_multi(1);
        else add_multi(2);
    }

    // reachability support: granted capabilities for every flow destination,
    // control capabilities for every host that originates a flow
    for (const DerivedExploit& d : derive_reachability_exploits(n)) {
        ensure_cap(d.dest, 0, d.type);
        if (!n.is_gateway(d.source)) ensure_cap(d.source, 1, "");
    }
    return out;
}

struct GeneratedInstance {
    NetworkInstance network;
    VulnerabilitySet vulns;
};

inline GeneratedInstance generate(const GenSpec& spec) {
    spec.validate();
    GeneratedInstance gi;
    gi.network = fat_tree(spec.pods);
    gi.network.traffic_types = traffic_types_for(spec.traffic_type_count);
    gi.network.flows = gen_traffic(gi.network, spec);
    gi.vulns = gen_vulnerabilities(gi.network, spec);
    validate(gi.network);
    return gi;
}

} // namespace fashion
