#pragma once

// Joint routing/security binary integer program. The network side routes
// every flow from an artificial source through the physical arcs to an
// artificial sink unless a firewall absorbs it; the security side mirrors
// attack-graph reachability with r/x/a variables, channels network delivery
// decisions into reachability-exploit arcs, and embeds the dualized
// most-effective-path block over continuous node potentials.

#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fashion/attack_graph.hpp"
#include "fashion/milp.hpp"
#include "fashion/network_model.hpp"

namespace fashion {

struct ModelWeights {
    double alpha = 0.5; // functionality vs security
    double beta = 0.5;  // reach vs path inside the security objective
    double alpha0 = 1.0, alpha1 = 0.01; // delivered value, link cost
    double alpha2 = 0.1, alpha3 = 0.1, alpha4 = 0.05; // flow fw, type fw, fw presence
    double beta0 = 0.1;  // defense cost weight
    double epsilon = 1e-6;

    void validate() const {
        if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
            throw MalformedProblem("alpha and beta must lie in [0,1]");
        if (!(epsilon > 0.0) || epsilon > 1e-3)
            throw MalformedProblem("epsilon must lie in (0, 1e-3]");
        for (double w : {alpha0, alpha1, alpha2, alpha3, alpha4, beta0})
            if (w < 0.0) throw MalformedProblem("objective term weights must be nonnegative");
    }
};

struct FractionalSolution : MilpError {
    using MilpError::MilpError;
};

// Boolean linearizations shared by the model builder (and exercised directly
// in tests): the emitted rows admit exactly the consistent 0/1 points.
inline void linearize_and(MilpProblem& p, const std::string& tag, int out,
                          const std::vector<int>& ins) {
    std::vector<std::pair<int, double>> sum{{out, 1.0}};
    for (std::size_t k = 0; k < ins.size(); ++k) {
        p.add_row(tag + ".le" + std::to_string(k), RowSense::LE, 0.0,
                  {{out, 1.0}, {ins[k], -1.0}});
        sum.emplace_back(ins[k], -1.0);
    }
    p.add_row(tag + ".ge", RowSense::GE, -(static_cast<double>(ins.size()) - 1.0), sum);
}

inline void linearize_or(MilpProblem& p, const std::string& tag, int out,
                         const std::vector<int>& ins, int const_ones = 0) {
    if (const_ones > 0) {
        p.add_row(tag + ".ge", RowSense::GE, 1.0, {{out, 1.0}});
        return; // upper rows are vacuous once a constant input is true
    }
    std::vector<std::pair<int, double>> sum{{out, 1.0}};
    for (std::size_t k = 0; k < ins.size(); ++k) {
        p.add_row(tag + ".ge" + std::to_string(k), RowSense::GE, 0.0,
                  {{out, 1.0}, {ins[k], -1.0}});
        sum.emplace_back(ins[k], -1.0);
    }
    p.add_row(tag + ".le", RowSense::LE, 0.0, sum);
}

class BipModel {
public:
    static constexpr int kSourceNode = -1; // artificial global flow source
    static constexpr int kSinkNode = -2;   // artificial global flow sink

    struct ArcKey { // directed arc in the expanded network, device indexes
        int from, to;
        auto operator<=>(const ArcKey&) const = default;
    };
    struct RhoKey {
        int flow;
        ArcKey arc;
        auto operator<=>(const RhoKey&) const = default;
    };

    MilpProblem problem;
    ModelWeights weights;

    std::vector<std::string> devices; // routers then hosts, each sorted
    std::map<std::string, int> device_index;
    int router_count = 0; // device indexes < router_count are routers
    std::vector<ArcKey> real_arcs;   // sorted
    std::map<ArcKey, double> arc_capacity, arc_cost;

    std::map<RhoKey, int> rho;
    std::map<std::pair<int, int>, int> theta, beta_blk, blocked, flow_fw; // (flow, router)
    std::map<std::pair<int, int>, int> type_fw;                          // (type, router)
    std::map<int, int> any_fw;                                           // router
    std::map<std::tuple<int, int, int>, int> conn; // (src device, dst device, type)
    std::vector<int> rvar;                         // per attack-graph node
    std::map<Edge, int> avar, xvar;                // per attack-graph edge
    std::vector<int> yvar;                         // per attack-graph node
    int y_sigma = -1;
    EdgeSet severable; // reachability-exploit prerequisite edges

    NetworkInstance net;
    AttackGraph graph;

    static BipModel build(const NetworkInstance& n, const AttackGraph& g, ModelWeights w);

    int rho_col(int flow, int from, int to) const { return rho.at({flow, {from, to}}); }
    bool is_router_index(int device) const { return device >= 0 && device < router_count; }

    // objective components evaluated on a solution vector
    struct ObjectiveTerms {
        double functionality = 0.0; // -alpha0 * delivered value + alpha1 * link cost
        double defense_cost = 0.0;  // alpha2 * flow fw + alpha3 * type fw + alpha4 * presence
        double reach_risk = 0.0;    // sum of r(c) * impact(c)
        double path_risk = 0.0;     // y(sigma) - y(mu)
    };
    ObjectiveTerms objective_terms(const std::vector<double>& x) const;
    EdgeSet severed_edges(const std::vector<double>& x) const;
};

struct RoutingEntry {
    std::string device, flow, next_hop;
};
struct FirewallRule {
    std::string device;
    std::string kind; // "flow" or "type"
    std::string selector;
};
struct Configuration {
    std::vector<RoutingEntry> routing;
    std::vector<FirewallRule> firewalls;
    std::vector<std::string> blocked;
    std::vector<std::string> delivered;
    BipModel::ObjectiveTerms objective_terms;
};

inline BipModel BipModel::build(const NetworkInstance& n, const AttackGraph& g, ModelWeights w) {
    w.validate();
    validate(n);
    if (!g.augmented())
        throw GraphError(GraphError::Code::NotAugmented,
                         "model expects the attack graph augmented with sigma/mu");

    BipModel m;
    m.weights = w;
    m.net = n;
    m.graph = g;
    MilpProblem& p = m.problem;

    // --- index devices and arcs -------------------------------------------
    std::vector<std::string> routers = n.routers, hosts = n.hosts;
    std::sort(routers.begin(), routers.end());
    std::sort(hosts.begin(), hosts.end());
    m.router_count = static_cast<int>(routers.size());
    m.devices = routers;
    m.devices.insert(m.devices.end(), hosts.begin(), hosts.end());
    for (std::size_t i = 0; i < m.devices.size(); ++i)
        m.device_index[m.devices[i]] = static_cast<int>(i);

    for (const Link& l : n.links) {
        int a = m.device_index.at(l.a), b = m.device_index.at(l.b);
        for (ArcKey arc : {ArcKey{a, b}, ArcKey{b, a}}) {
            if (!m.arc_capacity.count(arc)) {
                m.real_arcs.push_back(arc);
                m.arc_capacity[arc] = l.capacity;
                m.arc_cost[arc] = l.cost;
            }
        }
    }
    std::sort(m.real_arcs.begin(), m.real_arcs.end());

    std::vector<std::vector<ArcKey>> in_arcs(m.devices.size()), out_arcs(m.devices.size());
    for (const ArcKey& a : m.real_arcs) {
        out_arcs[static_cast<std::size_t>(a.from)].push_back(a);
        in_arcs[static_cast<std::size_t>(a.to)].push_back(a);
    }

    const int nf = static_cast<int>(n.flows.size());
    std::vector<int> src_of(static_cast<std::size_t>(nf)), dst_of(static_cast<std::size_t>(nf));
    std::vector<int> type_of(static_cast<std::size_t>(nf));
    std::vector<std::string> types = n.traffic_types;
    std::sort(types.begin(), types.end());
    std::map<std::string, int> type_index;
    for (std::size_t t = 0; t < types.size(); ++t) type_index[types[t]] = static_cast<int>(t);
    for (int f = 0; f < nf; ++f) {
        const Flow& fl = n.flows[static_cast<std::size_t>(f)];
        src_of[static_cast<std::size_t>(f)] = m.device_index.at(fl.src);
        dst_of[static_cast<std::size_t>(f)] = m.device_index.at(fl.dst);
        type_of[static_cast<std::size_t>(f)] = type_index.at(fl.traffic_type);
        if (out_arcs[static_cast<std::size_t>(src_of[static_cast<std::size_t>(f)])].empty())
            throw MalformedProblem("flow " + fl.id + " starts at a device with no links");
    }

    const double tie_fw = 1e-7; // keeps firewall placement determined at alpha = 1
    const double tie_r = 1e-9;  // pins reachability to the least fixpoint
    const double sec = 1.0 - w.alpha;

    auto arc_name = [&](int f, const ArcKey& a) {
        auto dev = [&](int d) {
            if (d == kSourceNode) return std::string("S");
            if (d == kSinkNode) return std::string("T");
            return m.devices[static_cast<std::size_t>(d)];
        };
        return n.flows[static_cast<std::size_t>(f)].id + "," + dev(a.from) + "," + dev(a.to);
    };

    // --- routing columns ---------------------------------------------------
    for (int f = 0; f < nf; ++f) {
        const Flow& fl = n.flows[static_cast<std::size_t>(f)];
        int src = src_of[static_cast<std::size_t>(f)], dst = dst_of[static_cast<std::size_t>(f)];
        for (const ArcKey& a : m.real_arcs) {
            double cost = w.alpha * w.alpha1 * m.arc_cost.at(a);
            int col = p.add_binary("rho(" + arc_name(f, a) + ")", cost);
            m.rho[{f, a}] = col;
            bool from_host = !m.is_router_index(a.from);
            if (from_host && a.from != src && a.from != dst) p.fix_column(col, 0.0); // hosts do not forward
            if (a.from == dst) p.fix_column(col, 0.0); // the destination only feeds the sink
        }
        int spawn = p.add_binary("rho(" + arc_name(f, {kSourceNode, src}) + ")", 0.0);
        p.fix_column(spawn, 1.0); // every flow enters at its source
        m.rho[{f, {kSourceNode, src}}] = spawn;
        int deliver = p.add_binary("rho(" + arc_name(f, {dst, kSinkNode}) + ")",
                                   -w.alpha * w.alpha0 * fl.value);
        p.cols[static_cast<std::size_t>(deliver)].branch_priority = 1;
        m.rho[{f, {dst, kSinkNode}}] = deliver;
    }

    // --- firewall columns ---------------------------------------------------
    for (int f = 0; f < nf; ++f)
        for (int i = 0; i < m.router_count; ++i) {
            const std::string tag = n.flows[static_cast<std::size_t>(f)].id + "," +
                                    m.devices[static_cast<std::size_t>(i)];
            m.theta[{f, i}] = p.add_binary("arrives(" + tag + ")", 0.0);
            m.beta_blk[{f, i}] = p.add_binary("typeblock(" + tag + ")", 0.0);
            m.blocked[{f, i}] = p.add_binary("blocked(" + tag + ")", 0.0);
            m.flow_fw[{f, i}] = p.add_binary("flowfw(" + tag + ")",
                                             sec * w.beta0 * w.alpha2 + tie_fw);
            p.cols[static_cast<std::size_t>(m.flow_fw[{f, i}])].branch_priority = 2;
        }
    for (int t = 0; t < static_cast<int>(types.size()); ++t)
        for (int i = 0; i < m.router_count; ++i) {
            m.type_fw[{t, i}] = p.add_binary(
                "typefw(" + types[static_cast<std::size_t>(t)] + "," +
                    m.devices[static_cast<std::size_t>(i)] + ")",
                sec * w.beta0 * w.alpha3 + tie_fw);
            p.cols[static_cast<std::size_t>(m.type_fw[{t, i}])].branch_priority = 3;
        }
    for (int i = 0; i < m.router_count; ++i)
        m.any_fw[i] = p.add_binary("anyfw(" + m.devices[static_cast<std::size_t>(i)] + ")",
                                   sec * w.beta0 * w.alpha4 + tie_fw);

    // --- connection indicator columns (full (H u G) x H x T domain) --------
    std::map<std::tuple<int, int, int>, std::vector<int>> conn_flows;
    for (int f = 0; f < nf; ++f) {
        int dst = dst_of[static_cast<std::size_t>(f)];
        if (m.is_router_index(dst)) continue;
        conn_flows[{src_of[static_cast<std::size_t>(f)], dst, type_of[static_cast<std::size_t>(f)]}]
            .push_back(f);
    }
    std::vector<int> endpoints; // hosts and gateways, by device index
    for (std::size_t i = 0; i < m.devices.size(); ++i) {
        int d = static_cast<int>(i);
        if (!m.is_router_index(d) || n.is_gateway(m.devices[i])) endpoints.push_back(d);
    }
    for (int k : endpoints)
        for (std::size_t h = static_cast<std::size_t>(m.router_count); h < m.devices.size(); ++h)
            for (int t = 0; t < static_cast<int>(types.size()); ++t) {
                int col = p.add_binary("conn(" + m.devices[static_cast<std::size_t>(k)] + "," +
                                           m.devices[h] + "," + types[static_cast<std::size_t>(t)] +
                                           ")",
                                       0.0);
                m.conn[{k, static_cast<int>(h), t}] = col;
                if (!conn_flows.count({k, static_cast<int>(h), t})) p.fix_column(col, 0.0);
            }

    // --- attack graph columns ----------------------------------------------
    const int nodes = g.node_count();
    m.rvar.assign(static_cast<std::size_t>(nodes), -1);
    for (NodeId v = 0; v < nodes; ++v) {
        double cost = tie_r;
        if (g.is_capability(v)) cost += sec * w.beta * g.capability(v).impact;
        m.rvar[static_cast<std::size_t>(v)] = p.add_binary("reach(n" + std::to_string(v) + ")", cost);
        if (g.is_capability(v) && g.is_start_capability(g.capability_index(v)))
            p.fix_column(m.rvar[static_cast<std::size_t>(v)], 1.0);
    }
    for (const Edge& e : g.edges()) {
        bool cut_by_network = g.is_exploit(e.second) &&
                              g.exploit(e.second).kind == ExploitKind::NetworkReachability &&
                              g.is_capability(e.first);
        std::string tag = std::to_string(e.first) + "," + std::to_string(e.second);
        int a = p.add_binary("acut(" + tag + ")", 0.0);
        if (!cut_by_network) p.fix_column(a, 1.0); // only routing decisions sever arcs
        else m.severable.insert(e);
        m.avar[e] = a;
        m.xvar[e] = p.add_binary("xtrav(" + tag + ")", 0.0);
    }
    const double path_weight = sec * (1.0 - w.beta) + 1e-9;
    const double log_eps = std::log(w.epsilon);
    const double ybound = (static_cast<double>(g.edges().size()) + 2.0) * std::abs(log_eps);
    m.yvar.assign(static_cast<std::size_t>(nodes), -1);
    for (NodeId v = 0; v < nodes; ++v) {
        double cost = 0.0;
        if (g.mu() && v == *g.mu()) cost = -path_weight;
        // potentials are shift-invariant; pinning the target at zero removes
        // the free translation direction
        bool is_mu = g.mu() && v == *g.mu();
        m.yvar[static_cast<std::size_t>(v)] =
            p.add_column("pot(n" + std::to_string(v) + ")", ColKind::Continuous,
                         is_mu ? 0.0 : -ybound, is_mu ? 0.0 : ybound, cost);
    }
    m.y_sigma = p.add_column("pot(sigma)", ColKind::Continuous, -ybound, ybound, path_weight);

    // --- network constraints -------------------------------------------------
    for (int f = 0; f < nf; ++f) {
        const Flow& fl = n.flows[static_cast<std::size_t>(f)];
        int src = src_of[static_cast<std::size_t>(f)], dst = dst_of[static_cast<std::size_t>(f)];
        int ft = type_of[static_cast<std::size_t>(f)];

        for (int i = 0; i < m.router_count; ++i) {
            const std::string tag = fl.id + "," + m.devices[static_cast<std::size_t>(i)];
            // arrival: theta = OR of inbound routed arcs (incl. the artificial
            // source arc when this router spawns the flow)
            std::vector<int> inbound;
            for (const ArcKey& a : in_arcs[static_cast<std::size_t>(i)])
                inbound.push_back(m.rho.at({f, a}));
            if (i == src) inbound.push_back(m.rho.at({f, {kSourceNode, src}}));
            linearize_or(p, "arrive(" + tag + ")", m.theta.at({f, i}), inbound);

            // type block: beta = theta AND typefw(type)
            linearize_and(p, "typeblk(" + tag + ")", m.beta_blk.at({f, i}),
                          {m.theta.at({f, i}), m.type_fw.at({ft, i})});
            // blocked: b = flowfw OR beta
            linearize_or(p, "blk(" + tag + ")", m.blocked.at({f, i}),
                         {m.flow_fw.at({f, i}), m.beta_blk.at({f, i})});

            // balance: inbound = outbound + blocked
            std::vector<std::pair<int, double>> bal;
            for (const ArcKey& a : in_arcs[static_cast<std::size_t>(i)]) bal.emplace_back(m.rho.at({f, a}), 1.0);
            if (i == src) bal.emplace_back(m.rho.at({f, {kSourceNode, src}}), 1.0);
            for (const ArcKey& a : out_arcs[static_cast<std::size_t>(i)]) bal.emplace_back(m.rho.at({f, a}), -1.0);
            if (i == dst) bal.emplace_back(m.rho.at({f, {dst, kSinkNode}}), -1.0);
            bal.emplace_back(m.blocked.at({f, i}), -1.0);
            p.add_row("balance(" + tag + ")", RowSense::EQ, 0.0, bal);
        }
        for (std::size_t hi = static_cast<std::size_t>(m.router_count); hi < m.devices.size(); ++hi) {
            int i = static_cast<int>(hi);
            // hosts conserve flow exactly (they cannot block)
            std::vector<std::pair<int, double>> bal;
            for (const ArcKey& a : in_arcs[hi]) bal.emplace_back(m.rho.at({f, a}), 1.0);
            if (i == src) bal.emplace_back(m.rho.at({f, {kSourceNode, src}}), 1.0);
            for (const ArcKey& a : out_arcs[hi]) bal.emplace_back(m.rho.at({f, a}), -1.0);
            if (i == dst) bal.emplace_back(m.rho.at({f, {dst, kSinkNode}}), -1.0);
            p.add_row("balance(" + fl.id + "," + m.devices[hi] + ")", RowSense::EQ, 0.0, bal);
        }
    }

    // link and device capacities (real arcs only; artificial arcs are uncapped)
    for (const ArcKey& a : m.real_arcs) {
        std::vector<std::pair<int, double>> row;
        for (int f = 0; f < nf; ++f)
            row.emplace_back(m.rho.at({f, a}), n.flows[static_cast<std::size_t>(f)].quantity);
        p.add_row("linkcap(" + m.devices[static_cast<std::size_t>(a.from)] + "," +
                      m.devices[static_cast<std::size_t>(a.to)] + ")",
                  RowSense::LE, m.arc_capacity.at(a), std::move(row));
    }
    for (int i = 0; i < m.router_count; ++i) {
        auto it = n.device_capacity.find(m.devices[static_cast<std::size_t>(i)]);
        if (it == n.device_capacity.end()) continue;
        std::vector<std::pair<int, double>> row;
        for (int f = 0; f < nf; ++f) {
            double q = n.flows[static_cast<std::size_t>(f)].quantity;
            for (const ArcKey& a : in_arcs[static_cast<std::size_t>(i)]) row.emplace_back(m.rho.at({f, a}), q);
            for (const ArcKey& a : out_arcs[static_cast<std::size_t>(i)]) row.emplace_back(m.rho.at({f, a}), q);
        }
        p.add_row("devcap(" + m.devices[static_cast<std::size_t>(i)] + ")", RowSense::LE,
                  it->second, std::move(row));
    }

    // firewall presence: anyfw = OR of every flow/type firewall at the device
    for (int i = 0; i < m.router_count; ++i) {
        std::vector<int> ins;
        for (int f = 0; f < nf; ++f) ins.push_back(m.flow_fw.at({f, i}));
        for (int t = 0; t < static_cast<int>(types.size()); ++t) ins.push_back(m.type_fw.at({t, i}));
        linearize_or(p, "fwpresence(" + m.devices[static_cast<std::size_t>(i)] + ")",
                     m.any_fw.at(i), ins);
    }

    // connection channeling: conn = delivery of the realizing flow(s)
    for (const auto& [key, col] : m.conn) {
        auto it = conn_flows.find(key);
        if (it == conn_flows.end()) continue; // fixed to zero above
        const auto& [k, h, t] = key;
        std::string tag = "connchan(" + m.devices[static_cast<std::size_t>(k)] + "," +
                          m.devices[static_cast<std::size_t>(h)] + "," +
                          types[static_cast<std::size_t>(t)] + ")";
        std::vector<int> deliveries;
        for (int f : it->second) deliveries.push_back(m.rho.at({f, {dst_of[static_cast<std::size_t>(f)], kSinkNode}}));
        if (deliveries.size() == 1)
            p.add_row(tag, RowSense::EQ, 0.0, {{col, 1.0}, {deliveries[0], -1.0}});
        else
            linearize_or(p, tag, col, deliveries); // duplicate flows share one connection
    }

    // --- attack graph constraints -------------------------------------------
    // traversal: x = r(tail) AND a(edge); sigma edges need no x (always on)
    for (const Edge& e : g.edges()) {
        std::string tag = "trav(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
        linearize_and(p, tag, m.xvar.at(e), {m.rvar[static_cast<std::size_t>(e.first)], m.avar.at(e)});
    }
    // reachability: capabilities and OR exploits take any traversable in-edge,
    // AND exploits need all of them
    for (NodeId v = 0; v < nodes; ++v) {
        auto preds = g.predecessors(v);
        std::vector<int> ins;
        for (NodeId u : preds) ins.push_back(m.xvar.at({u, v}));
        bool start_cap = g.is_capability(v) && g.is_start_capability(g.capability_index(v));
        std::string tag = "reach(n" + std::to_string(v) + ")";
        if (start_cap) {
            // fed by sigma unconditionally; the column is already fixed to 1
            continue;
        }
        if (g.is_exploit(v) && g.exploit(v).logic == ExploitLogic::And)
            linearize_and(p, tag, m.rvar[static_cast<std::size_t>(v)], ins);
        else if (ins.empty())
            p.fix_column(m.rvar[static_cast<std::size_t>(v)], 0.0); // nothing grants it
        else
            linearize_or(p, tag, m.rvar[static_cast<std::size_t>(v)], ins);
    }
    // channeling: severable arcs mirror the network connection indicator
    for (const Edge& e : m.severable.items()) {
        const Exploit& ex = g.exploit(e.second);
        const Capability& c = g.capability(e.first);
        int k = m.device_index.at(c.device);
        int h = m.device_index.at(*ex.target_device);
        int t = type_index.at(*ex.traffic_type);
        p.add_row("chan(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")",
                  RowSense::EQ, 0.0, {{m.avar.at(e), 1.0}, {m.conn.at({k, h, t}), -1.0}});
    }

    // --- most effective path, dualized --------------------------------------
    // For every edge, the potential drop is at least the log-weight of the
    // head node; cutting an arc relaxes the weight to log(epsilon).
    for (const Edge& e : g.edges()) {
        double head_w = g.is_exploit(e.second) ? std::log(g.exploit(e.second).probability) : 0.0;
        int yu = m.yvar[static_cast<std::size_t>(e.first)];
        int yv = m.yvar[static_cast<std::size_t>(e.second)];
        std::string tag = "pot(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
        if (m.severable.contains(e))
            p.add_row(tag, RowSense::GE, log_eps,
                      {{yu, 1.0}, {yv, -1.0}, {m.avar.at(e), -(head_w - log_eps)}});
        else
            p.add_row(tag, RowSense::GE, head_w, {{yu, 1.0}, {yv, -1.0}});
    }
    for (int s : g.start())
        p.add_row("pot(sigma,n" + std::to_string(g.capability_node(s)) + ")", RowSense::GE, 0.0,
                  {{m.y_sigma, 1.0}, {m.yvar[static_cast<std::size_t>(g.capability_node(s))], -1.0}});

    p.validate();
    return m;
}

inline BipModel::ObjectiveTerms BipModel::objective_terms(const std::vector<double>& x) const {
    ObjectiveTerms t;
    const ModelWeights& w = weights;
    for (int f = 0; f < static_cast<int>(net.flows.size()); ++f) {
        const Flow& fl = net.flows[static_cast<std::size_t>(f)];
        int dst = device_index.at(fl.dst);
        t.functionality -= w.alpha0 * fl.value * x[static_cast<std::size_t>(rho.at({f, {dst, kSinkNode}}))];
        for (const ArcKey& a : real_arcs)
            t.functionality += w.alpha1 * arc_cost.at(a) * x[static_cast<std::size_t>(rho.at({f, a}))];
    }
    for (const auto& [key, col] : flow_fw) t.defense_cost += w.alpha2 * x[static_cast<std::size_t>(col)];
    for (const auto& [key, col] : type_fw) t.defense_cost += w.alpha3 * x[static_cast<std::size_t>(col)];
    for (const auto& [key, col] : any_fw) t.defense_cost += w.alpha4 * x[static_cast<std::size_t>(col)];
    for (NodeId v = 0; v < graph.node_count(); ++v)
        if (graph.is_capability(v))
            t.reach_risk += graph.capability(v).impact * x[static_cast<std::size_t>(rvar[static_cast<std::size_t>(v)])];
    if (graph.mu())
        t.path_risk = x[static_cast<std::size_t>(y_sigma)] -
                      x[static_cast<std::size_t>(yvar[static_cast<std::size_t>(*graph.mu())])];
    return t;
}

inline EdgeSet BipModel::severed_edges(const std::vector<double>& x) const {
    EdgeSet cut;
    for (const Edge& e : severable.items())
        if (x[static_cast<std::size_t>(avar.at(e))] < 0.5) cut.insert(e);
    return cut;
}

inline Configuration extract_configuration(const BipModel& m, const std::vector<double>& x) {
    const MilpProblem& p = m.problem;
    for (std::size_t j = 0; j < p.cols.size(); ++j)
        if (p.cols[j].kind == ColKind::Binary &&
            std::abs(x[j] - std::round(x[j])) > 1e-6)
            throw FractionalSolution("column " + p.cols[j].name + " is fractional");

    auto on = [&](int col) { return x[static_cast<std::size_t>(col)] > 0.5; };
    Configuration cfg;
    const NetworkInstance& n = m.net;
    for (int f = 0; f < static_cast<int>(n.flows.size()); ++f) {
        const Flow& fl = n.flows[static_cast<std::size_t>(f)];
        for (const BipModel::ArcKey& a : m.real_arcs)
            if (on(m.rho.at({f, a})))
                cfg.routing.push_back({m.devices[static_cast<std::size_t>(a.from)], fl.id,
                                       m.devices[static_cast<std::size_t>(a.to)]});
        int dst = m.device_index.at(fl.dst);
        if (on(m.rho.at({f, {dst, BipModel::kSinkNode}}))) cfg.delivered.push_back(fl.id);
        bool is_blocked = false;
        for (int i = 0; i < m.router_count; ++i)
            if (on(m.blocked.at({f, i}))) is_blocked = true;
        if (is_blocked) cfg.blocked.push_back(fl.id);
    }
    for (const auto& [key, col] : m.flow_fw)
        if (on(col))
            cfg.firewalls.push_back({m.devices[static_cast<std::size_t>(key.second)], "flow",
                                     n.flows[static_cast<std::size_t>(key.first)].id});
    std::vector<std::string> types = n.traffic_types;
    std::sort(types.begin(), types.end());
    for (const auto& [key, col] : m.type_fw)
        if (on(col))
            cfg.firewalls.push_back({m.devices[static_cast<std::size_t>(key.second)], "type",
                                     types[static_cast<std::size_t>(key.first)]});
    std::sort(cfg.firewalls.begin(), cfg.firewalls.end(), [](const FirewallRule& a, const FirewallRule& b) {
        return std::tie(a.device, a.kind, a.selector) < std::tie(b.device, b.kind, b.selector);
    });
    cfg.objective_terms = m.objective_terms(x);
    return cfg;
}

} // namespace fashion
