#pragma once

// Best-first branch and bound over the binary columns of a presolved
// MilpProblem, with a rounding-dive primal heuristic supplying incumbents.
// Nodes carry their bound-change path from the root plus a shared warm-start
// basis from the parent LP; the dual simplex repairs each bound change.
// Deterministic: node ids break every tie.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <limits>
#include <queue>
#include <vector>

#include "fashion/milp.hpp"
#include "fashion/presolve.hpp"
#include "fashion/simplex.hpp"

namespace fashion {

namespace detail {

struct BnbNode {
    long id = 0;
    double bound = -kInfinity;
    int branch_col = -1;      // column fixed to create this node
    double branch_frac = 0.0; // its fractionality at the parent
    std::vector<std::pair<int, double>> fixes; // (column, value) path from root
    std::shared_ptr<const lp::LpResult> warm;  // parent optimal basis
};

struct BnbNodeOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound; // min-heap on bound
        return a.id > b.id;
    }
};

} // namespace detail

inline MilpSolution solve(const MilpProblem& problem, const SolveLimits& limits = {}) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                             std::chrono::duration<double>(limits.time_s));
    problem.validate();

    MilpSolution sol;
    Presolved pre = presolve(problem);
    if (pre.unbounded) throw UnboundedProblem("problem is unbounded");
    if (pre.infeasible) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    const MilpProblem& red = pre.reduced;
    const int n = static_cast<int>(red.cols.size());

    std::vector<double> root_lo(static_cast<std::size_t>(n)), root_hi(static_cast<std::size_t>(n));
    std::vector<int> binaries;
    for (int j = 0; j < n; ++j) {
        root_lo[static_cast<std::size_t>(j)] = red.cols[static_cast<std::size_t>(j)].lower;
        root_hi[static_cast<std::size_t>(j)] = red.cols[static_cast<std::size_t>(j)].upper;
        if (red.cols[static_cast<std::size_t>(j)].kind == ColKind::Binary) binaries.push_back(j);
    }

    lp::LpCore core = lp::LpCore::from_problem(red);
    lp::SimplexSolver solver(core);

    std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>, detail::BnbNodeOrder> open;
    long next_id = 0, nodes_solved = 0, last_dive = -1000000;
    std::vector<double> incumbent;
    double incumbent_obj = kInfinity;
    bool have_incumbent = false;
    bool out_of_budget = false;

    auto finish = [&](SolveStatus status, double bound) {
        sol.status = status;
        sol.nodes = nodes_solved;
        sol.bound = bound + red.objective_offset;
        if (have_incumbent) {
            std::vector<double> xr = incumbent;
            for (int j : binaries) {
                double v = xr[static_cast<std::size_t>(j)];
                if (std::abs(v - std::round(v)) <= 1e-5) xr[static_cast<std::size_t>(j)] = std::round(v);
            }
            sol.x = pre.restore(xr);
            sol.objective = problem.objective_value(sol.x);
        } else {
            sol.objective = kInfinity;
        }
        return sol;
    };

    // Pseudocost branching: per-column estimates of the bound movement per
    // unit fractionality, seeded by the objective pull and sharpened by the
    // degradations actually observed. Priority classes act as a bonus so the
    // structural countermeasure columns get tried early.
    std::vector<double> pseudocost(static_cast<std::size_t>(n), 0.0);
    std::vector<long> pc_hits(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j)
        pseudocost[static_cast<std::size_t>(j)] =
            1e-6 + std::abs(red.cols[static_cast<std::size_t>(j)].objective) +
            0.05 * red.cols[static_cast<std::size_t>(j)].branch_priority;
    auto note_degradation = [&](int col, double frac, double degradation) {
        if (col < 0 || frac <= 1e-6) return;
        double rate = std::max(0.0, degradation) / frac;
        auto& hits = pc_hits[static_cast<std::size_t>(col)];
        double& pc = pseudocost[static_cast<std::size_t>(col)];
        pc = (pc * hits + rate) / static_cast<double>(hits + 1);
        ++hits;
    };
    auto most_fractional = [&](const std::vector<double>& x) {
        int pick = -1;
        double best_score = 0.0;
        for (int j : binaries) {
            double frac = std::abs(x[static_cast<std::size_t>(j)] -
                                   std::round(x[static_cast<std::size_t>(j)]));
            if (frac <= 1e-6) continue;
            double score = frac * pseudocost[static_cast<std::size_t>(j)];
            if (score > best_score) {
                best_score = score;
                pick = j;
            }
        }
        return pick;
    };

    auto budget_left = [&]() {
        if (nodes_solved >= limits.node_cap || clock::now() > deadline) {
            out_of_budget = true;
            return false;
        }
        return true;
    };

    auto offer_incumbent = [&](const lp::LpResult& res) {
        if (res.obj < incumbent_obj - 1e-12) {
            incumbent = res.x;
            incumbent_obj = res.obj;
            have_incumbent = true;
        }
    };

    std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    auto apply_fixes = [&](const std::vector<std::pair<int, double>>& fixes) {
        lo = root_lo;
        hi = root_hi;
        for (auto [j, v] : fixes) {
            lo[static_cast<std::size_t>(j)] = v;
            hi[static_cast<std::size_t>(j)] = v;
        }
    };

    // Rounding dive: pin every binary that is already integral in the current
    // relaxation (the point stays feasible, so only the one rounded variable
    // can break anything), round the most fractional one, re-solve warm, and
    // repeat; on a failed rounding, try the opposite direction once. Pure
    // primal heuristic: the tree is unaffected.
    auto heuristic_dive = [&](std::vector<std::pair<int, double>> fixes,
                              std::shared_ptr<const lp::LpResult> warm) {
        last_dive = nodes_solved;
        for (int depth = 0; depth < 120; ++depth) {
            if (!budget_left()) return;
            int frac_col = most_fractional(warm->x);
            if (frac_col < 0) {
                offer_incumbent(*warm);
                return;
            }
            std::size_t base = fixes.size();
            for (int j : binaries) {
                double v = warm->x[static_cast<std::size_t>(j)];
                double r = std::round(v);
                if (std::abs(v - r) <= 1e-6 &&
                    root_lo[static_cast<std::size_t>(j)] != root_hi[static_cast<std::size_t>(j)])
                    fixes.emplace_back(j, r);
            }
            double want = std::round(warm->x[static_cast<std::size_t>(frac_col)]);
            bool advanced = false;
            for (double v : {want, 1.0 - want}) {
                fixes.emplace_back(frac_col, v);
                apply_fixes(fixes);
                lp::LpResult res = solver.solve(lo, hi, warm.get());
                ++nodes_solved;
                if (res.status == lp::LpStatus::Optimal &&
                    (!have_incumbent || res.bound < incumbent_obj - 1e-9)) {
                    warm = std::make_shared<const lp::LpResult>(std::move(res));
                    advanced = true;
                    break;
                }
                fixes.pop_back();
                if (!budget_left()) return;
            }
            if (!advanced) {
                (void)base;
                return;
            }
        }
    };

    // Probe a handful of fractional candidates with both branch directions to
    // seed the pseudocosts with real bound movements before the tree starts.
    auto strong_branch_init = [&](const lp::LpResult& root) {
        struct Cand {
            double score;
            int col;
        };
        std::vector<Cand> cands;
        for (int j : binaries) {
            double frac = std::abs(root.x[static_cast<std::size_t>(j)] -
                                   std::round(root.x[static_cast<std::size_t>(j)]));
            if (frac <= 1e-6) continue;
            cands.push_back({frac * pseudocost[static_cast<std::size_t>(j)], j});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.col < b.col;
        });
        cands.resize(std::min<std::size_t>(cands.size(), 12));
        for (const Cand& c : cands) {
            double frac = std::abs(root.x[static_cast<std::size_t>(c.col)] -
                                   std::round(root.x[static_cast<std::size_t>(c.col)]));
            for (double v : {0.0, 1.0}) {
                lo = root_lo;
                hi = root_hi;
                lo[static_cast<std::size_t>(c.col)] = v;
                hi[static_cast<std::size_t>(c.col)] = v;
                lp::LpResult res = solver.solve(lo, hi, &root);
                ++nodes_solved;
                double f = v == 1.0 ? 1.0 - frac : frac;
                if (res.status == lp::LpStatus::Infeasible)
                    note_degradation(c.col, f, 10.0 * std::max(1.0, std::abs(root.bound)));
                else if (res.status == lp::LpStatus::Optimal)
                    note_degradation(c.col, f, res.bound - root.bound);
            }
        }
    };

    // root relaxation
    {
        lp::LpResult root = solver.solve(root_lo, root_hi, nullptr);
        ++nodes_solved;
        if (root.status == lp::LpStatus::Infeasible) {
            sol.status = SolveStatus::Infeasible;
            sol.nodes = nodes_solved;
            return sol;
        }
        if (root.status == lp::LpStatus::Unbounded)
            throw UnboundedProblem("LP relaxation is unbounded");
        strong_branch_init(root);
        int branch_col = most_fractional(root.x);
        if (branch_col < 0) {
            offer_incumbent(root);
            return finish(SolveStatus::Optimal, root.obj);
        }
        auto warm_ptr = std::make_shared<const lp::LpResult>(std::move(root));
        double frac = warm_ptr->x[static_cast<std::size_t>(branch_col)];
        double branch_frac = std::abs(frac - std::round(frac));
        for (double v : {std::round(frac), 1.0 - std::round(frac)}) {
            detail::BnbNode child;
            child.id = next_id++;
            child.bound = warm_ptr->bound;
            child.branch_col = branch_col;
            child.branch_frac = v == std::round(frac) ? branch_frac : 1.0 - branch_frac;
            child.fixes = {{branch_col, v}};
            child.warm = warm_ptr;
            open.push(std::move(child));
        }
        heuristic_dive({}, warm_ptr);
    }

    auto current_bound = [&]() {
        double b = kInfinity;
        if (!open.empty()) b = std::min(b, open.top().bound);
        if (have_incumbent) b = std::min(b, incumbent_obj);
        return b;
    };

    long last_report = 0;
    while (!open.empty()) {
        double global_bound = current_bound();
#ifdef FASHION_BNB_TRACE
        if (nodes_solved - last_report >= 500) {
            last_report = nodes_solved;
            std::fprintf(stderr, "[bnb] nodes=%ld open=%zu incumbent=%.8g bound=%.8g\n",
                         nodes_solved, open.size(),
                         have_incumbent ? incumbent_obj + red.objective_offset : kInfinity,
                         global_bound + red.objective_offset);
        }
#else
        (void)last_report;
#endif
        if (have_incumbent &&
            incumbent_obj - global_bound <= limits.gap * std::max(1.0, std::abs(incumbent_obj)))
            return finish(SolveStatus::Optimal, global_bound);
        if (out_of_budget || !budget_left())
            return finish(clock::now() > deadline ? SolveStatus::TimeLimit : SolveStatus::GapLimit,
                          global_bound);

        detail::BnbNode node = std::move(const_cast<detail::BnbNode&>(open.top()));
        open.pop();
        if (have_incumbent && node.bound >= incumbent_obj - 1e-9) continue;

        apply_fixes(node.fixes);
        lp::LpResult res = solver.solve(lo, hi, node.warm.get());
        ++nodes_solved;
        if (res.status == lp::LpStatus::Infeasible) {
            note_degradation(node.branch_col, node.branch_frac, 10.0 * std::max(1.0, std::abs(node.bound)));
            continue;
        }
        if (res.status == lp::LpStatus::Unbounded)
            throw UnboundedProblem("LP relaxation is unbounded");
        note_degradation(node.branch_col, node.branch_frac, res.bound - node.bound);
        if (have_incumbent && res.bound >= incumbent_obj - 1e-9) continue;

        int branch_col = most_fractional(res.x);
        if (branch_col < 0) {
            offer_incumbent(res);
            continue;
        }
        auto warm_ptr = std::make_shared<const lp::LpResult>(std::move(res));
        double frac = warm_ptr->x[static_cast<std::size_t>(branch_col)];
        // cap warm-basis memory: nodes queued behind a long frontier re-solve
        // cold if they ever get popped
        bool keep_warm = open.size() < 4000;
        double branch_frac = std::abs(frac - std::round(frac));
        for (double v : {std::round(frac), 1.0 - std::round(frac)}) {
            detail::BnbNode child;
            child.id = next_id++;
            child.bound = warm_ptr->bound;
            child.branch_col = branch_col;
            child.branch_frac = v == std::round(frac) ? branch_frac : 1.0 - branch_frac;
            child.fixes = node.fixes;
            child.fixes.emplace_back(branch_col, v);
            if (keep_warm) child.warm = warm_ptr;
            open.push(std::move(child));
        }
        bool want_dive = (!have_incumbent && nodes_solved - last_dive >= 25) ||
                         nodes_solved - last_dive >= 1500;
        if (want_dive) heuristic_dive(node.fixes, warm_ptr);
    }

    if (have_incumbent) {
        // the tree is exhausted, but abandoned work may cap the proof
        double b = std::min(current_bound(), incumbent_obj);
        bool proven = !out_of_budget ||
                      incumbent_obj - b <= limits.gap * std::max(1.0, std::abs(incumbent_obj));
        return finish(proven ? SolveStatus::Optimal : SolveStatus::GapLimit, b);
    }
    sol.status = out_of_budget ? SolveStatus::GapLimit : SolveStatus::Infeasible;
    sol.nodes = nodes_solved;
    sol.bound = current_bound() + red.objective_offset;
    return sol;
}

} // namespace fashion
