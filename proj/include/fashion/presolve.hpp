#pragma once

// MilpProblem reductions applied before branch and bound: fixed-column
// substitution, singleton-row bound tightening, forcing/redundant row
// elimination by activity bounds, doubleton-equality aliasing, and removal of
// unconstrained columns. Postsolve replays the substitutions to recover a
// full-length solution vector.

#include <cmath>
#include <vector>

#include "fashion/milp.hpp"

namespace fashion {

class Presolved {
public:
    MilpProblem reduced;
    bool infeasible = false;
    bool unbounded = false;
    double objective_offset = 0.0; // folded into reduced.objective_offset too

    // x in reduced space -> x in original space
    std::vector<double> restore(const std::vector<double>& xr) const {
        std::vector<double> x(subst_.size(), 0.0);
        for (std::size_t j = 0; j < subst_.size(); ++j) x[j] = resolve(static_cast<int>(j), xr);
        return x;
    }

    int reduced_index(int original_col) const { return reduced_index_[static_cast<std::size_t>(original_col)]; }

    // internals shared with presolve()
    struct Subst {
        int target = -2; // -2: alive, -1: constant, >=0: original column index
        double scale = 1.0;
        double offset = 0.0;
    };
    std::vector<Subst> subst_;
    std::vector<int> reduced_index_; // original -> reduced (-1 when eliminated)

private:
    double resolve(int j, const std::vector<double>& xr) const {
        double scale = 1.0, offset = 0.0;
        int cur = j;
        for (std::size_t guard = 0; guard <= subst_.size(); ++guard) {
            const Subst& s = subst_[static_cast<std::size_t>(cur)];
            if (s.target == -2) {
                int r = reduced_index_[static_cast<std::size_t>(cur)];
                return offset + scale * xr[static_cast<std::size_t>(r)];
            }
            if (s.target == -1) return offset + scale * s.offset;
            offset += scale * s.offset;
            scale *= s.scale;
            cur = s.target;
        }
        throw MilpError("presolve substitution chain is circular");
    }
};

inline Presolved presolve(const MilpProblem& input) {
    constexpr double kTol = 1e-9;
    const int n = static_cast<int>(input.cols.size());

    struct WCol {
        double lo, hi, obj;
        ColKind kind;
        bool alive = true;
    };
    struct WRow {
        RowSense sense;
        double rhs;
        std::vector<std::pair<int, double>> coeffs;
        bool alive = true;
    };
    std::vector<WCol> cols;
    std::vector<WRow> rows;
    for (const Column& c : input.cols) cols.push_back({c.lower, c.upper, c.objective, c.kind, true});
    for (const Row& r : input.rows) rows.push_back({r.sense, r.rhs, r.coeffs, true});

    Presolved out;
    out.subst_.assign(static_cast<std::size_t>(n), {});
    out.objective_offset = input.objective_offset;

    auto fail_infeasible = [&]() {
        out.infeasible = true;
        return out;
    };

    std::vector<int> fix_queue;
    auto fix_col = [&](int j, double v) {
        WCol& c = cols[static_cast<std::size_t>(j)];
        if (!c.alive) return true;
        if (v < c.lo - 1e-7 * std::max(1.0, std::abs(c.lo)) ||
            v > c.hi + 1e-7 * std::max(1.0, std::abs(c.hi)))
            return false;
        if (c.kind == ColKind::Binary && std::abs(v - std::round(v)) > 1e-6) return false;
        if (c.kind == ColKind::Binary) v = std::round(v);
        c.lo = c.hi = v;
        fix_queue.push_back(j);
        return true;
    };

    auto tighten_lo = [&](int j, double v) {
        WCol& c = cols[static_cast<std::size_t>(j)];
        if (c.kind == ColKind::Binary && v > kTol) v = (v > 1.0 + 1e-6) ? 2.0 : 1.0;
        if (v > c.lo) c.lo = v;
    };
    auto tighten_hi = [&](int j, double v) {
        WCol& c = cols[static_cast<std::size_t>(j)];
        if (c.kind == ColKind::Binary && v < 1.0 - kTol) v = (v < -1e-6) ? -1.0 : 0.0;
        if (v < c.hi) c.hi = v;
    };

    bool changed = true;
    for (int pass = 0; pass < 20 && changed; ++pass) {
        changed = false;

        // bound sanity + newly fixed columns
        for (int j = 0; j < n; ++j) {
            WCol& c = cols[static_cast<std::size_t>(j)];
            if (!c.alive) continue;
            if (c.lo > c.hi + 1e-7 * std::max(1.0, std::abs(c.lo))) return fail_infeasible();
            if (c.lo >= c.hi - kTol && std::isfinite(c.lo)) {
                double v = 0.5 * (c.lo + c.hi);
                if (c.kind == ColKind::Binary) v = std::round(v);
                // substitute the constant into every row and the objective
                for (WRow& r : rows) {
                    if (!r.alive) continue;
                    for (auto it = r.coeffs.begin(); it != r.coeffs.end(); ++it) {
                        if (it->first == j) {
                            r.rhs -= it->second * v;
                            r.coeffs.erase(it);
                            break;
                        }
                    }
                }
                out.objective_offset += c.obj * v;
                out.subst_[static_cast<std::size_t>(j)] = {-1, 0.0, v};
                c.alive = false;
                changed = true;
            }
        }

        for (std::size_t ri = 0; ri < rows.size(); ++ri) {
            WRow& r = rows[ri];
            if (!r.alive) continue;

            if (r.coeffs.empty()) {
                double scale = std::max(1.0, std::abs(r.rhs));
                bool ok = (r.sense == RowSense::LE && r.rhs >= -1e-7 * scale) ||
                          (r.sense == RowSense::GE && r.rhs <= 1e-7 * scale) ||
                          (r.sense == RowSense::EQ && std::abs(r.rhs) <= 1e-7 * scale);
                if (!ok) return fail_infeasible();
                r.alive = false;
                changed = true;
                continue;
            }

            if (r.coeffs.size() == 1) {
                auto [j, a] = r.coeffs[0];
                double v = r.rhs / a;
                if (r.sense == RowSense::EQ) {
                    if (!fix_col(j, v)) return fail_infeasible();
                } else {
                    bool upper = (r.sense == RowSense::LE) == (a > 0);
                    if (upper) tighten_hi(j, v);
                    else tighten_lo(j, v);
                }
                r.alive = false;
                changed = true;
                continue;
            }

            // activity bounds
            double min_act = 0.0, max_act = 0.0;
            bool min_inf = false, max_inf = false;
            for (auto [j, a] : r.coeffs) {
                const WCol& c = cols[static_cast<std::size_t>(j)];
                double lo_term = a > 0 ? a * c.lo : a * c.hi;
                double hi_term = a > 0 ? a * c.hi : a * c.lo;
                if (std::isfinite(lo_term)) min_act += lo_term; else min_inf = true;
                if (std::isfinite(hi_term)) max_act += hi_term; else max_inf = true;
            }
            double scale = std::max(1.0, std::abs(r.rhs));
            for (auto [j, a] : r.coeffs) scale = std::max(scale, std::abs(a));
            double tol = 1e-9 * scale;

            if (r.sense == RowSense::LE || r.sense == RowSense::EQ) {
                if (!min_inf && min_act > r.rhs + std::max(tol, 1e-7 * scale)) return fail_infeasible();
            }
            if (r.sense == RowSense::GE || r.sense == RowSense::EQ) {
                if (!max_inf && max_act < r.rhs - std::max(tol, 1e-7 * scale)) return fail_infeasible();
            }
            bool le_redundant = !max_inf && max_act <= r.rhs + tol;
            bool ge_redundant = !min_inf && min_act >= r.rhs - tol;
            if ((r.sense == RowSense::LE && le_redundant) ||
                (r.sense == RowSense::GE && ge_redundant) ||
                (r.sense == RowSense::EQ && le_redundant && ge_redundant)) {
                r.alive = false;
                changed = true;
                continue;
            }
            // forcing: activity pinned at the rhs
            bool force_min = !min_inf && min_act >= r.rhs - tol &&
                             (r.sense == RowSense::EQ || r.sense == RowSense::LE);
            bool force_max = !max_inf && max_act <= r.rhs + tol &&
                             (r.sense == RowSense::EQ || r.sense == RowSense::GE);
            if (force_min || force_max) {
                for (auto [j, a] : r.coeffs) {
                    const WCol& c = cols[static_cast<std::size_t>(j)];
                    double v = force_min == (a > 0) ? c.lo : c.hi;
                    if (!fix_col(j, v)) return fail_infeasible();
                }
                r.alive = false;
                changed = true;
                continue;
            }

            // doubleton equality: alias one column to the other
            if (r.sense == RowSense::EQ && r.coeffs.size() == 2) {
                auto [xj, a] = r.coeffs[0];
                auto [yj, b] = r.coeffs[1];
                WCol& xc = cols[static_cast<std::size_t>(xj)];
                WCol& yc = cols[static_cast<std::size_t>(yj)];
                // eliminate y as  y = off + s * x
                auto try_alias = [&](int keep, int drop, double ka, double da) {
                    WCol& kc = cols[static_cast<std::size_t>(keep)];
                    WCol& dc = cols[static_cast<std::size_t>(drop)];
                    double s = -ka / da;
                    double off = r.rhs / da;
                    if (dc.kind == ColKind::Binary || kc.kind == ColKind::Binary) {
                        // only identity / complement aliases keep integrality safe
                        bool identity = std::abs(s - 1.0) < kTol && std::abs(off) < kTol;
                        bool complement = std::abs(s + 1.0) < kTol && std::abs(off - 1.0) < kTol;
                        if (!(identity || complement)) return false;
                        if (dc.kind != kc.kind) return false;
                    }
                    // transfer bounds of the dropped column onto the kept one
                    double b1 = (dc.lo - off) / s;
                    double b2 = (dc.hi - off) / s;
                    if (s > 0) {
                        tighten_lo(keep, b1);
                        tighten_hi(keep, b2);
                    } else {
                        tighten_lo(keep, b2);
                        tighten_hi(keep, b1);
                    }
                    kc.obj += dc.obj * s;
                    out.objective_offset += dc.obj * off;
                    for (WRow& other : rows) {
                        if (!other.alive || &other == &r) continue;
                        double coef = 0.0;
                        bool hasd = false;
                        for (auto it = other.coeffs.begin(); it != other.coeffs.end(); ++it)
                            if (it->first == drop) {
                                coef = it->second;
                                other.coeffs.erase(it);
                                hasd = true;
                                break;
                            }
                        if (!hasd) continue;
                        other.rhs -= coef * off;
                        double add = coef * s;
                        bool merged = false;
                        for (auto& [cj, ca] : other.coeffs)
                            if (cj == keep) {
                                ca += add;
                                merged = true;
                                break;
                            }
                        if (!merged && std::abs(add) > 1e-13) {
                            other.coeffs.emplace_back(keep, add);
                            std::sort(other.coeffs.begin(), other.coeffs.end());
                        }
                        std::erase_if(other.coeffs,
                                      [](const auto& e) { return std::abs(e.second) < 1e-13; });
                    }
                    out.subst_[static_cast<std::size_t>(drop)] = {keep, s, off};
                    dc.alive = false;
                    return true;
                };
                (void)xc;
                (void)yc;
                bool done = try_alias(xj, yj, a, b) || try_alias(yj, xj, b, a);
                if (done) {
                    r.alive = false;
                    changed = true;
                    continue;
                }
            }
        }

        // columns that no longer appear in any live row
        std::vector<int> occurrences(static_cast<std::size_t>(n), 0);
        for (const WRow& r : rows)
            if (r.alive)
                for (auto [j, a] : r.coeffs) {
                    (void)a;
                    ++occurrences[static_cast<std::size_t>(j)];
                }
        for (int j = 0; j < n; ++j) {
            WCol& c = cols[static_cast<std::size_t>(j)];
            if (!c.alive || occurrences[static_cast<std::size_t>(j)] > 0) continue;
            double v;
            if (c.obj > kTol) v = c.lo;
            else if (c.obj < -kTol) v = c.hi;
            else v = std::isfinite(c.lo) ? std::clamp(0.0, c.lo, c.hi) : std::min(0.0, c.hi);
            if (!std::isfinite(v)) {
                out.unbounded = true;
                return out;
            }
            if (!fix_col(j, v)) return fail_infeasible();
            changed = true;
        }
        fix_queue.clear();
    }

    // assemble the reduced problem
    out.reduced_index_.assign(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int j = 0; j < n; ++j)
        if (cols[static_cast<std::size_t>(j)].alive) out.reduced_index_[static_cast<std::size_t>(j)] = next++;
    for (int j = 0; j < n; ++j) {
        const WCol& c = cols[static_cast<std::size_t>(j)];
        if (!c.alive) continue;
        int rj = out.reduced.add_column(input.cols[static_cast<std::size_t>(j)].name, c.kind, c.lo,
                                        c.hi, c.obj);
        out.reduced.cols[static_cast<std::size_t>(rj)].branch_priority =
            input.cols[static_cast<std::size_t>(j)].branch_priority;
    }
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const WRow& r = rows[ri];
        if (!r.alive) continue;
        std::vector<std::pair<int, double>> coeffs;
        for (auto [j, a] : r.coeffs)
            coeffs.emplace_back(out.reduced_index_[static_cast<std::size_t>(j)], a);
        out.reduced.add_row(input.rows[ri].name, r.sense, r.rhs, std::move(coeffs));
    }
    out.reduced.objective_offset = out.objective_offset;
    return out;
}

} // namespace fashion
