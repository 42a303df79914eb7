#pragma once

// Brute-force optima for small problems, independent of the production
// solver: LP minima by enumerating candidate active sets (vertices), MILP
// minima by enumerating every binary assignment. Only suitable for tiny
// instances with finite bounds.

#include <cmath>
#include <optional>
#include <vector>

#include "fashion/milp.hpp"
#include "fashion/rng.hpp"

namespace oracles {

using fashion::ColKind;
using fashion::MilpProblem;
using fashion::Rng;
using fashion::RowSense;

inline bool lp_point_feasible(const MilpProblem& p, const std::vector<double>& x,
                              double tol = 1e-7) {
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
        if (x[j] < p.cols[j].lower - tol || x[j] > p.cols[j].upper + tol) return false;
    }
    return p.max_violation(x) <= tol;
}

// Minimize by checking every vertex: each candidate active set of n
// constraints (rows as equalities, or a bound) is solved as a linear system.
// Requires all column bounds finite so the feasible set is a polytope.
inline std::optional<double> lp_brute_force(const MilpProblem& p,
                                            std::vector<double>* arg_out = nullptr) {
    const int n = static_cast<int>(p.cols.size());
    struct Cand {
        std::vector<double> row;
        double rhs;
    };
    std::vector<Cand> cands;
    for (const auto& r : p.rows) {
        Cand c{std::vector<double>(static_cast<std::size_t>(n), 0.0), r.rhs};
        for (auto [j, a] : r.coeffs) c.row[static_cast<std::size_t>(j)] = a;
        cands.push_back(std::move(c));
    }
    for (int j = 0; j < n; ++j) {
        Cand lo{std::vector<double>(static_cast<std::size_t>(n), 0.0), p.cols[static_cast<std::size_t>(j)].lower};
        lo.row[static_cast<std::size_t>(j)] = 1.0;
        cands.push_back(std::move(lo));
        Cand hi{std::vector<double>(static_cast<std::size_t>(n), 0.0), p.cols[static_cast<std::size_t>(j)].upper};
        hi.row[static_cast<std::size_t>(j)] = 1.0;
        cands.push_back(std::move(hi));
    }
    const int total = static_cast<int>(cands.size());

    std::optional<double> best;
    std::vector<double> best_x;
    std::vector<int> pick(static_cast<std::size_t>(n), 0);

    auto solve_system = [&](const std::vector<int>& sel, std::vector<double>& x) {
        std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        std::vector<double> b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                a[static_cast<std::size_t>(i * n + j)] =
                    cands[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].row[static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(i)] = cands[static_cast<std::size_t>(sel[static_cast<std::size_t>(i)])].rhs;
        }
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            double bestp = 1e-9;
            for (int r = c; r < n; ++r)
                if (std::abs(a[static_cast<std::size_t>(r * n + c)]) > bestp) {
                    bestp = std::abs(a[static_cast<std::size_t>(r * n + c)]);
                    piv = r;
                }
            if (piv < 0) return false;
            if (piv != c) {
                for (int j = 0; j < n; ++j)
                    std::swap(a[static_cast<std::size_t>(piv * n + j)], a[static_cast<std::size_t>(c * n + j)]);
                std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(c)]);
            }
            for (int r = c + 1; r < n; ++r) {
                double f = a[static_cast<std::size_t>(r * n + c)] / a[static_cast<std::size_t>(c * n + c)];
                if (f == 0.0) continue;
                for (int j = c; j < n; ++j)
                    a[static_cast<std::size_t>(r * n + j)] -= f * a[static_cast<std::size_t>(c * n + j)];
                b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
            }
        }
        x.assign(static_cast<std::size_t>(n), 0.0);
        for (int r = n - 1; r >= 0; --r) {
            double acc = b[static_cast<std::size_t>(r)];
            for (int j = r + 1; j < n; ++j)
                acc -= a[static_cast<std::size_t>(r * n + j)] * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r * n + r)];
        }
        return true;
    };

    std::vector<int> sel(static_cast<std::size_t>(n));
    std::vector<double> x;
    auto recurse = [&](auto&& self, int depth, int from) -> void {
        if (depth == n) {
            if (!solve_system(sel, x)) return;
            if (!lp_point_feasible(p, x)) return;
            double obj = p.objective_value(x);
            if (!best || obj < *best - 1e-12) {
                best = obj;
                best_x = x;
            }
            return;
        }
        for (int c = from; c < total; ++c) {
            sel[static_cast<std::size_t>(depth)] = c;
            self(self, depth + 1, c + 1);
        }
    };
    if (n == 0) {
        if (p.rows.empty()) return p.objective_offset;
        return std::nullopt;
    }
    recurse(recurse, 0, 0);
    if (best && arg_out) *arg_out = best_x;
    return best;
}

// Enumerate every binary assignment; binaries are substituted out and the
// continuous remainder (if any) goes to the vertex oracle.
inline std::optional<double> milp_enumerate(const MilpProblem& p) {
    std::vector<int> bins, conts;
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
        if (p.cols[j].kind == ColKind::Binary) bins.push_back(static_cast<int>(j));
        else conts.push_back(static_cast<int>(j));
    }
    const int nb = static_cast<int>(bins.size());
    std::vector<int> cont_index(p.cols.size(), -1);
    for (std::size_t t = 0; t < conts.size(); ++t)
        cont_index[static_cast<std::size_t>(conts[t])] = static_cast<int>(t);

    std::optional<double> best;
    for (long mask = 0; mask < (1L << nb); ++mask) {
        double fixed_obj = p.objective_offset;
        bool ok = true;
        std::vector<double> value(p.cols.size(), 0.0);
        for (int t = 0; t < nb; ++t) {
            double v = (mask >> t) & 1 ? 1.0 : 0.0;
            const auto& c = p.cols[static_cast<std::size_t>(bins[static_cast<std::size_t>(t)])];
            if (v < c.lower - 1e-9 || v > c.upper + 1e-9) {
                ok = false;
                break;
            }
            value[static_cast<std::size_t>(bins[static_cast<std::size_t>(t)])] = v;
            fixed_obj += c.objective * v;
        }
        if (!ok) continue;

        MilpProblem q;
        for (int j : conts) {
            const auto& c = p.cols[static_cast<std::size_t>(j)];
            q.add_column(c.name, c.kind, c.lower, c.upper, c.objective);
        }
        bool feasible = true;
        for (const auto& r : p.rows) {
            double shift = 0.0;
            std::vector<std::pair<int, double>> coeffs;
            for (auto [j, a] : r.coeffs) {
                if (cont_index[static_cast<std::size_t>(j)] >= 0)
                    coeffs.emplace_back(cont_index[static_cast<std::size_t>(j)], a);
                else
                    shift += a * value[static_cast<std::size_t>(j)];
            }
            double rhs = r.rhs - shift;
            if (coeffs.empty()) {
                double tol = 1e-7 * std::max(1.0, std::abs(rhs));
                if ((r.sense == RowSense::LE && 0.0 > rhs + tol) ||
                    (r.sense == RowSense::GE && 0.0 < rhs - tol) ||
                    (r.sense == RowSense::EQ && std::abs(rhs) > tol)) {
                    feasible = false;
                    break;
                }
                continue;
            }
            q.add_row(r.name, r.sense, rhs, std::move(coeffs));
        }
        if (!feasible) continue;

        if (conts.empty()) {
            if (!best || fixed_obj < *best) best = fixed_obj;
            continue;
        }
        auto sub = lp_brute_force(q);
        if (sub && (!best || *sub + fixed_obj - q.objective_offset < *best))
            best = *sub + fixed_obj - q.objective_offset;
    }
    return best;
}

// Random boxed MILP; when `force_feasible`, the rhs is derived from a random
// interior point so at least one feasible assignment exists.
inline MilpProblem random_milp(Rng& rng, int nbin, int ncont, int nrows, bool force_feasible) {
    MilpProblem p;
    for (int j = 0; j < nbin; ++j)
        p.add_binary("b" + std::to_string(j), std::round(rng.uniform_real(-5, 5)));
    for (int j = 0; j < ncont; ++j) {
        double lo = std::round(rng.uniform_real(-4, 0));
        double hi = lo + std::round(rng.uniform_real(1, 6));
        p.add_column("x" + std::to_string(j), ColKind::Continuous, lo, hi,
                     std::round(rng.uniform_real(-5, 5)));
    }
    const int n = nbin + ncont;
    std::vector<double> ref(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto& c = p.cols[static_cast<std::size_t>(j)];
        if (c.kind == ColKind::Binary) ref[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1.0 : 0.0;
        else ref[static_cast<std::size_t>(j)] = rng.uniform_real(c.lower, c.upper);
    }
    for (int i = 0; i < nrows; ++i) {
        std::vector<std::pair<int, double>> coeffs;
        double act = 0.0;
        for (int j = 0; j < n; ++j) {
            if (!rng.bernoulli(0.6)) continue;
            double a = std::round(rng.uniform_real(-4, 4));
            if (a == 0.0) continue;
            coeffs.emplace_back(j, a);
            act += a * ref[static_cast<std::size_t>(j)];
        }
        if (coeffs.empty()) continue;
        int sense_pick = static_cast<int>(rng.uniform_index(3));
        RowSense sense = sense_pick == 0 ? RowSense::LE : sense_pick == 1 ? RowSense::GE : RowSense::EQ;
        double rhs;
        if (force_feasible) {
            if (sense == RowSense::LE) rhs = act + rng.uniform_real(0, 3);
            else if (sense == RowSense::GE) rhs = act - rng.uniform_real(0, 3);
            else rhs = act;
        } else {
            rhs = std::round(rng.uniform_real(-6, 6));
        }
        p.add_row("r" + std::to_string(i), sense, rhs, std::move(coeffs));
    }
    return p;
}

} // namespace oracles
