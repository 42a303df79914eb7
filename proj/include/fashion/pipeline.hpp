#pragma once

// End-to-end driver: instance -> attack graph -> joint model -> solve ->
// configuration, followed by an independent evaluation of the exact risk and
// both approximations on the configured (severed) graph. The sweep harness
// re-solves over an alpha/beta grid, normalizing functionality and risk
// against the alpha = 1 countermeasure-free run.

#include <atomic>
#include <charconv>
#include <chrono>
#include <thread>

#include "fashion/bip_model.hpp"
#include "fashion/branch_and_bound.hpp"
#include "fashion/exact_risk.hpp"
#include "fashion/json_io.hpp"
#include "fashion/risk_measures.hpp"

namespace fashion {

struct RiskReport {
    double risk = 0.0;
    double reach = 0.0;
    double reach_norm = 0.0;
    double path = 0.0;
    double hybrid = 0.0;
    std::map<std::string, double> scores; // per-node cumulative probability
    std::string solve_status;
};

struct SolveOutcome {
    BipModel model;
    MilpSolution solution;
    Configuration config;
    RiskReport report;
    double delivered_value = 0.0;
    bool has_incumbent = false;
};

inline std::string node_key(const AttackGraph& g, NodeId v) {
    return g.is_capability(v) ? "c" + std::to_string(v)
                              : "e" + std::to_string(g.exploit_index(v));
}

inline SolveOutcome solve_instance(const NetworkInstance& net, const VulnerabilitySet& vulns,
                                   const ModelWeights& weights, const SolveLimits& limits = {}) {
    validate(net);
    AttackGraph base = assemble_attack_graph(net, vulns);
    AttackGraph g = base.augment_with_targets(base.normalized_impacts());

    SolveOutcome out{BipModel::build(net, g, weights), {}, {}, {}, 0.0, false};
    out.solution = solve(out.model.problem, limits);
    out.report.solve_status = to_string(out.solution.status);
    if (out.solution.status == SolveStatus::Infeasible || out.solution.x.empty())
        return out; // no incumbent: nothing to evaluate
    out.has_incumbent = true;

    out.config = extract_configuration(out.model, out.solution.x);
    EdgeSet severed = out.model.severed_edges(out.solution.x);

    CumulativeScores scores = arisk(g, severed);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.is_capability(v))
            out.report.risk += scores.p[static_cast<std::size_t>(v)] * g.capability(v).impact;
    for (NodeId v = 0; v < g.node_count(); ++v)
        out.report.scores[node_key(g, v)] = scores.p[static_cast<std::size_t>(v)];

    ReachResult r = reach(g, severed);
    out.report.reach = r.value;
    out.report.reach_norm = reach_normalized(g, severed);
    out.report.path = path(g, severed, weights.epsilon);
    out.report.hybrid =
        weights.beta * out.report.reach_norm + (1.0 - weights.beta) * out.report.path;

    for (const std::string& id : out.config.delivered)
        for (const Flow& f : net.flows)
            if (f.id == id) out.delivered_value += f.value;
    return out;
}

struct SweepRow {
    double alpha = 0.0, beta = 0.0;
    double delivered_value = 0.0;
    double functionality_norm = 0.0;
    double risk_exact = 0.0;
    double risk_norm = 0.0;
    double reach = 0.0;
    double path = 0.0;
    double hybrid = 0.0;
    std::string solve_status;
    double solve_time_s = 0.0;
    long blocked_external = 0, blocked_internal = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double baseline_value = 0.0; // delivered value of the alpha = 1 run
    double baseline_risk = 0.0;  // exact risk of the alpha = 1 run
};

// One row per (alpha, beta) pair, rows ordered by (alpha, beta). Rows run
// concurrently on `jobs` workers; the assembly order is fixed regardless of
// completion order. Alphas must lie in (0, 1]: with alpha = 0 the optimum
// degenerates to blocking everything at the entry.
inline SweepResult sweep(const NetworkInstance& net, const VulnerabilitySet& vulns,
                         std::vector<double> alphas, std::vector<double> betas,
                         const ModelWeights& base_weights, const SolveLimits& limits = {},
                         unsigned jobs = std::thread::hardware_concurrency()) {
    std::sort(alphas.begin(), alphas.end());
    std::sort(betas.begin(), betas.end());
    for (double a : alphas)
        if (!(a > 0.0) || a > 1.0)
            throw MalformedProblem("sweep alphas must lie in (0, 1]");
    if (betas.empty()) betas.push_back(base_weights.beta);

    SweepResult result;
    // normalizers come from the functionality-only run
    ModelWeights wbase = base_weights;
    wbase.alpha = 1.0;
    SolveOutcome baseline = solve_instance(net, vulns, wbase, limits);
    result.baseline_value = baseline.delivered_value;
    result.baseline_risk = baseline.report.risk;

    struct Task {
        double alpha, beta;
    };
    std::vector<Task> tasks;
    for (double a : alphas)
        for (double b : betas) tasks.push_back({a, b});
    result.rows.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            ModelWeights w = base_weights;
            w.alpha = tasks[i].alpha;
            w.beta = tasks[i].beta;
            auto t0 = std::chrono::steady_clock::now();
            SolveOutcome run = solve_instance(net, vulns, w, limits);
            auto t1 = std::chrono::steady_clock::now();
            SweepRow row;
            row.alpha = w.alpha;
            row.beta = w.beta;
            row.solve_status = run.report.solve_status;
            row.solve_time_s = std::chrono::duration<double>(t1 - t0).count();
            if (run.has_incumbent) {
                row.delivered_value = run.delivered_value;
                row.functionality_norm =
                    result.baseline_value > 0.0 ? run.delivered_value / result.baseline_value : 0.0;
                row.risk_exact = run.report.risk;
                row.risk_norm =
                    result.baseline_risk > 0.0 ? run.report.risk / result.baseline_risk : 0.0;
                row.reach = run.report.reach;
                row.path = run.report.path;
                row.hybrid = run.report.hybrid;
                for (const std::string& id : run.config.blocked)
                    for (const Flow& f : net.flows)
                        if (f.id == id) {
                            bool external = net.is_gateway(f.src) || net.is_gateway(f.dst);
                            (external ? row.blocked_external : row.blocked_internal) += 1;
                        }
            }
            result.rows[i] = std::move(row);
        }
    };
    unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < n_workers; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return result;
}

inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string report_csv(const SweepResult& s) {
    std::string out =
        "alpha,beta,delivered_value,functionality_norm,risk_exact,risk_norm,reach,path,hybrid,"
        "solve_status,solve_time_s\n";
    for (const SweepRow& r : s.rows) {
        out += format_double(r.alpha) + ',' + format_double(r.beta) + ',' +
               format_double(r.delivered_value) + ',' + format_double(r.functionality_norm) +
               ',' + format_double(r.risk_exact) + ',' + format_double(r.risk_norm) + ',' +
               format_double(r.reach) + ',' + format_double(r.path) + ',' +
               format_double(r.hybrid) + ',' + r.solve_status + ',' +
               format_double(r.solve_time_s) + '\n';
    }
    return out;
}

inline Json report_json(const SweepResult& s) {
    Json arr = Json::array();
    for (const SweepRow& r : s.rows) {
        Json j;
        j["alpha"] = r.alpha;
        j["beta"] = r.beta;
        j["delivered_value"] = r.delivered_value;
        j["functionality_norm"] = r.functionality_norm;
        j["risk_exact"] = r.risk_exact;
        j["risk_norm"] = r.risk_norm;
        j["reach"] = r.reach;
        j["path"] = r.path;
        j["hybrid"] = r.hybrid;
        j["solve_status"] = r.solve_status;
        j["solve_time_s"] = r.solve_time_s;
        j["blocked_external"] = r.blocked_external;
        j["blocked_internal"] = r.blocked_internal;
        arr.push_back(j);
    }
    return arr;
}

inline Json risk_report_to_json(const RiskReport& r) {
    Json j;
    j["risk"] = r.risk;
    j["reach"] = r.reach;
    j["reach_norm"] = r.reach_norm;
    j["path"] = r.path;
    j["hybrid"] = r.hybrid;
    j["status"] = r.solve_status;
    j["scores"] = Json::object();
    for (const auto& [k, v] : r.scores) j["scores"][k] = v;
    return j;
}

// Standalone evaluation of a graph (no optimization): exact risk plus both
// linearizable measures, optionally under a severed edge set keyed by the
// input graph's node ids.
inline RiskReport evaluate_graph(const AttackGraph& raw, const EdgeSet& severed, double beta,
                                 double epsilon) {
    AttackGraph g = raw.augmented() ? raw : raw.augment_with_targets(raw.normalized_impacts());
    EdgeSet cut = severed;
    if (!raw.augmented()) {
        // augmentation inserts mu before the exploits, shifting exploit ids by one
        std::vector<Edge> shifted;
        const int nc = raw.capability_count();
        for (const Edge& e : severed.items())
            shifted.push_back({e.first < nc ? e.first : e.first + 1,
                               e.second < nc ? e.second : e.second + 1});
        cut = EdgeSet(std::move(shifted));
    }
    RiskReport rep;
    CumulativeScores scores = arisk(g, cut);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_capability(v))
            rep.risk += scores.p[static_cast<std::size_t>(v)] * g.capability(v).impact;
        rep.scores[node_key(g, v)] = scores.p[static_cast<std::size_t>(v)];
    }
    rep.reach = reach(g, cut).value;
    rep.reach_norm = reach_normalized(g, cut);
    rep.path = path(g, cut, epsilon);
    rep.hybrid = beta * rep.reach_norm + (1.0 - beta) * rep.path;
    rep.solve_status = "evaluated";
    return rep;
}

} // namespace fashion
