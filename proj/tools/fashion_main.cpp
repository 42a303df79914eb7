// Command-line front end: generate fat-tree benchmark instances, solve the
// joint routing/security model, sweep the alpha/beta grid, evaluate attack
// graphs, and export the model in MPS/LP form for external solvers.
//
// Exit codes: 0 success, 2 invalid input, 3 solver limit reached (partial
// results are still written).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fashion/benchmark_gen.hpp"
#include "fashion/json_io.hpp"
#include "fashion/mps_io.hpp"
#include "fashion/pipeline.hpp"

namespace {

using namespace fashion;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << content;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

ModelWeights load_weights(const std::string& weights_file, double alpha, double beta) {
    ModelWeights w;
    if (!weights_file.empty()) w = weights_from_json(read_json_file(weights_file));
    if (alpha >= 0.0) w.alpha = alpha;
    if (beta >= 0.0) w.beta = beta;
    w.validate();
    return w;
}

struct CommonSolveArgs {
    std::string instance_file, weights_file, out;
    double alpha = -1.0, beta = -1.0;
    double time_limit = 600.0, gap = 1e-4;
    long node_cap = 1000000;
};

SolveLimits to_limits(const CommonSolveArgs& a) {
    SolveLimits l;
    l.time_s = a.time_limit;
    l.gap = a.gap;
    l.node_cap = a.node_cap;
    return l;
}

int cmd_generate(const GenSpec& spec, const std::string& out) {
    GeneratedInstance gi = generate(spec);
    write_output(out, instance_to_json(gi.network, gi.vulns).dump(2) + "\n");
    return 0;
}

int cmd_solve(const CommonSolveArgs& args, const std::string& solver,
              const std::string& mps_out, const std::string& lp_out,
              const std::string& sidecar_out) {
    auto [net, vulns] = instance_from_json(read_json_file(args.instance_file));
    ModelWeights w = load_weights(args.weights_file, args.alpha, args.beta);

    if (solver == "external") {
        AttackGraph base = assemble_attack_graph(net, vulns);
        AttackGraph g = base.augment_with_targets(base.normalized_impacts());
        BipModel model = BipModel::build(net, g, w);
        MpsExport exported = export_mps(model.problem);
        if (!mps_out.empty()) write_output(mps_out, exported.text);
        if (!lp_out.empty()) write_output(lp_out, export_lp(model.problem));
        if (!sidecar_out.empty()) write_output(sidecar_out, exported.name_map.dump(2) + "\n");
        std::cerr << "model written for external solving (" << model.problem.cols.size()
                  << " columns, " << model.problem.rows.size() << " rows)\n";
        return 0;
    }

    SolveOutcome run = solve_instance(net, vulns, w, to_limits(args));
    Json j;
    j["configuration"] = configuration_to_json(run.config);
    j["report"] = risk_report_to_json(run.report);
    j["delivered_value"] = run.delivered_value;
    write_output(args.out, j.dump(2) + "\n");
    bool limit_hit = run.solution.status == SolveStatus::TimeLimit ||
                     run.solution.status == SolveStatus::GapLimit;
    return limit_hit ? 3 : 0;
}

int cmd_sweep(const CommonSolveArgs& args, std::vector<double> alphas, std::vector<double> betas,
              const std::string& format, unsigned jobs) {
    auto [net, vulns] = instance_from_json(read_json_file(args.instance_file));
    ModelWeights w = load_weights(args.weights_file, -1.0, args.beta);
    if (alphas.empty())
        for (int i = 1; i <= 10; ++i) alphas.push_back(i / 10.0);
    SweepResult result = sweep(net, vulns, alphas, betas, w, to_limits(args), jobs);
    if (format == "csv") write_output(args.out, report_csv(result));
    else write_output(args.out, report_json(result).dump(2) + "\n");
    for (const SweepRow& r : result.rows)
        if (r.solve_status != "optimal") return 3;
    return 0;
}

int cmd_evaluate(const std::string& graph_file, const std::string& severed_file, double beta,
                 double epsilon, const std::string& out) {
    AttackGraph g = graph_from_json(read_json_file(graph_file));
    EdgeSet severed;
    if (!severed_file.empty()) {
        for (const Json& e : read_json_file(severed_file))
            severed.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    }
    RiskReport rep = evaluate_graph(g, severed, beta, epsilon);
    write_output(out, risk_report_to_json(rep).dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint routing/attack-graph configuration optimizer"};
    app.require_subcommand(1);

    // generate
    GenSpec spec;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "emit a seeded fat-tree benchmark instance");
    gen->add_option("--pods", spec.pods, "pod count (even, >= 4)");
    gen->add_option("--flows-per-host", spec.flows_per_host, "demands per host (1, 3, 5, 10)");
    gen->add_option("--types", spec.traffic_type_count, "traffic type count (1-3)");
    gen->add_option("--vuln-pct", spec.exploitable_host_pct,
                    "exploitable host percentage (10..50)");
    gen->add_option("--vulns-per-host", spec.vulns_per_host_avg,
                    "average vulnerabilities per exploitable host [1,5]");
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--out,-o", gen_out, "output file (default stdout)");

    // solve
    CommonSolveArgs sargs;
    std::string solver = "embedded", mps_out, lp_out, sidecar_out;
    auto* sol = app.add_subcommand("solve", "solve one instance and report the configuration");
    sol->add_option("--instance,-i", sargs.instance_file, "instance JSON")->required();
    sol->add_option("--alpha", sargs.alpha, "functionality/security balance in (0,1]");
    sol->add_option("--beta", sargs.beta, "reach/path balance in [0,1]");
    sol->add_option("--weights", sargs.weights_file, "weights JSON file");
    sol->add_option("--time-limit", sargs.time_limit, "solver time limit in seconds");
    sol->add_option("--gap", sargs.gap, "relative optimality gap");
    sol->add_option("--node-cap", sargs.node_cap, "branch and bound node cap");
    sol->add_option("--out,-o", sargs.out, "output file (default stdout)");
    sol->add_option("--solver", solver, "embedded | external (write model files and exit)")
        ->check(CLI::IsMember({"embedded", "external"}));
    sol->add_option("--mps-out", mps_out, "MPS output path (external solver hand-off)");
    sol->add_option("--lp-out", lp_out, "CPLEX-LP output path");
    sol->add_option("--sidecar-out", sidecar_out, "name-map sidecar path");

    // sweep
    CommonSolveArgs wargs;
    std::vector<double> alphas, betas;
    std::string format = "csv";
    unsigned jobs = std::thread::hardware_concurrency();
    auto* swp = app.add_subcommand("sweep", "solve over an alpha/beta grid");
    swp->add_option("--instance,-i", wargs.instance_file, "instance JSON")->required();
    swp->add_option("--alphas", alphas, "alpha grid (default 0.1..1.0)")->delimiter(',');
    swp->add_option("--betas", betas, "beta grid (default: weights beta)")->delimiter(',');
    swp->add_option("--weights", wargs.weights_file, "weights JSON file");
    swp->add_option("--beta", wargs.beta, "beta when --betas is not given");
    swp->add_option("--time-limit", wargs.time_limit, "per-row time limit in seconds");
    swp->add_option("--gap", wargs.gap, "relative optimality gap");
    swp->add_option("--node-cap", wargs.node_cap, "branch and bound node cap");
    swp->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    swp->add_option("--jobs", jobs, "parallel rows");
    swp->add_option("--out,-o", wargs.out, "output file (default stdout)");

    // evaluate
    std::string graph_file, severed_file, eval_out;
    double eval_beta = 0.5, eval_eps = 1e-6;
    auto* ev = app.add_subcommand("evaluate", "exact risk and measures for a graph JSON");
    ev->add_option("--graph,-g", graph_file, "attack graph JSON")->required();
    ev->add_option("--severed", severed_file, "JSON list of severed [from,to] node-id pairs");
    ev->add_option("--beta", eval_beta, "hybrid weighting");
    ev->add_option("--epsilon", eval_eps, "severed-edge probability");
    ev->add_option("--out,-o", eval_out, "output file (default stdout)");

    // export
    CommonSolveArgs xargs;
    std::string x_mps, x_lp, x_sidecar;
    auto* ex = app.add_subcommand("export", "write the model as MPS/LP without solving");
    ex->add_option("--instance,-i", xargs.instance_file, "instance JSON")->required();
    ex->add_option("--alpha", xargs.alpha, "functionality/security balance");
    ex->add_option("--beta", xargs.beta, "reach/path balance");
    ex->add_option("--weights", xargs.weights_file, "weights JSON file");
    ex->add_option("--mps-out", x_mps, "MPS output path");
    ex->add_option("--lp-out", x_lp, "CPLEX-LP output path");
    ex->add_option("--sidecar-out", x_sidecar, "name-map sidecar path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*gen) return cmd_generate(spec, gen_out);
        if (*sol) return cmd_solve(sargs, solver, mps_out, lp_out, sidecar_out);
        if (*swp) return cmd_sweep(wargs, alphas, betas, format, jobs);
        if (*ev) return cmd_evaluate(graph_file, severed_file, eval_beta, eval_eps, eval_out);
        if (*ex) return cmd_solve(xargs, "external", x_mps, x_lp, x_sidecar);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
