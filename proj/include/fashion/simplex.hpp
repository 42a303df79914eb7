#pragma once

// Bounded-variable revised simplex over sparse columns.
//
// The basis is factored in partitioned form: columns with a single nonzero
// (slacks, artificials, singleton structural columns) are handled by direct
// substitution, and only the square kernel of remaining structural columns is
// LU-factored densely. Pivots between refactorizations are tracked as
// product-form eta vectors. A dual simplex drives warm restarts after bound
// changes (branch and bound); Bland's rule kicks in after a degeneracy streak
// so phase termination is guaranteed.
//
// Column layout inside the solver: [0,n) structural, [n,n+m) slacks (one per
// row, coefficient +1), [n+m,n+2m) artificials (coefficient +1, used only to
// patch an infeasible start).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fashion/milp.hpp"

namespace fashion::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

// rough instrumentation, aggregated per process
struct LpStats {
    long solves = 0, primal_iters = 0, dual_iters = 0, refactors = 0;
    long max_kernel = 0;
    double factor_seconds = 0.0;
};
inline LpStats& lp_stats() {
    static LpStats s;
    return s;
}

struct LpCore {
    int m = 0, n = 0;
    std::vector<int> col_ptr, row_idx;
    std::vector<double> val;
    std::vector<double> cost;
    std::vector<double> perturb; // tiny deterministic anti-degeneracy offsets
    std::vector<double> rhs;
    std::vector<double> slack_lo, slack_hi;

    static LpCore from_problem(const MilpProblem& p) {
        LpCore c;
        c.m = static_cast<int>(p.rows.size());
        c.n = static_cast<int>(p.cols.size());
        std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(c.n));
        for (int i = 0; i < c.m; ++i)
            for (auto [j, a] : p.rows[static_cast<std::size_t>(i)].coeffs)
                cols[static_cast<std::size_t>(j)].emplace_back(i, a);
        c.col_ptr.push_back(0);
        for (auto& col : cols) {
            for (auto [r, a] : col) {
                c.row_idx.push_back(r);
                c.val.push_back(a);
            }
            c.col_ptr.push_back(static_cast<int>(c.row_idx.size()));
        }
        for (const Column& col : p.cols) c.cost.push_back(col.objective);
        // perturb binary columns only: their unit range keeps the bound slack
        // negligible while breaking the ties that stall the simplex
        for (std::size_t j = 0; j < p.cols.size(); ++j) {
            std::uint64_t h = (static_cast<std::uint64_t>(j) + 1) * 0x9e3779b97f4a7c15ULL;
            double u = static_cast<double>((h >> 40) & 0xffffff) / static_cast<double>(0xffffff);
            c.perturb.push_back(p.cols[j].kind == ColKind::Binary ? 1e-9 * (1.0 + u) : 0.0);
        }
        for (const Row& r : p.rows) {
            c.rhs.push_back(r.rhs);
            switch (r.sense) {
                case RowSense::LE: c.slack_lo.push_back(0.0); c.slack_hi.push_back(kInfinity); break;
                case RowSense::GE: c.slack_lo.push_back(-kInfinity); c.slack_hi.push_back(0.0); break;
                case RowSense::EQ: c.slack_lo.push_back(0.0); c.slack_hi.push_back(0.0); break;
            }
        }
        return c;
    }
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double obj = 0.0;   // true objective at the returned vertex
    double bound = 0.0; // valid lower bound on the true optimum
    std::vector<double> x; // structural values
    // warm-start state
    std::vector<int> basis;
    std::vector<std::int8_t> vstat;
};

namespace vs {
inline constexpr std::int8_t AtLo = 0, AtUp = 1, Basic = 2, Free = 3;
}

class SingularBasis : public std::runtime_error {
public:
    SingularBasis() : std::runtime_error("singular basis") {}
};

class BasisFactor {
public:
    // `column` yields the sparse column of an arbitrary solver column index.
    template <typename ColFn>
    bool factor(int m, const std::vector<int>& basis, ColFn&& column) {
        m_ = m;
        etas_.clear();
        unit_slot_of_row_.assign(static_cast<std::size_t>(m), -1);
        unit_scale_.assign(static_cast<std::size_t>(m), 0.0);
        gslots_.clear();
        scratch_pairs_.assign(static_cast<std::size_t>(m), {});

        for (int s = 0; s < m; ++s) {
            auto& buf = scratch_pairs_[static_cast<std::size_t>(s)];
            buf.clear();
            column(basis[static_cast<std::size_t>(s)], buf);
            if (buf.size() == 1 && unit_slot_of_row_[static_cast<std::size_t>(buf[0].first)] == -1 &&
                std::abs(buf[0].second) > 1e-11) {
                unit_slot_of_row_[static_cast<std::size_t>(buf[0].first)] = s;
                unit_scale_[static_cast<std::size_t>(buf[0].first)] = buf[0].second;
            } else {
                gslots_.push_back(s);
            }
        }
        k_ = static_cast<int>(gslots_.size());

        grow_pos_.assign(static_cast<std::size_t>(m), -1);
        grows_.clear();
        for (int r = 0; r < m; ++r)
            if (unit_slot_of_row_[static_cast<std::size_t>(r)] == -1) {
                grow_pos_[static_cast<std::size_t>(r)] = static_cast<int>(grows_.size());
                grows_.push_back(r);
            }
        if (static_cast<int>(grows_.size()) != k_) return false;

        gcols_urows_.assign(static_cast<std::size_t>(k_), {});
        std::vector<std::vector<std::pair<int, double>>> kernel(static_cast<std::size_t>(k_));
        for (int t = 0; t < k_; ++t) {
            const auto& buf = scratch_pairs_[static_cast<std::size_t>(gslots_[static_cast<std::size_t>(t)])];
            for (auto [r, a] : buf) {
                int gp = grow_pos_[static_cast<std::size_t>(r)];
                if (gp >= 0) kernel[static_cast<std::size_t>(t)].emplace_back(gp, a);
                else gcols_urows_[static_cast<std::size_t>(t)].emplace_back(r, a);
            }
        }
        return lu_decompose(kernel);
    }

    int eta_count() const { return static_cast<int>(etas_.size()); }
    int kernel_size() const { return k_; }

    // Solve B z = v; v is indexed by row, the result by basis slot.
    void ftran(std::vector<double>& v) const {
        core_ftran(v);
        for (const Eta& e : etas_) {
            double zs = v[static_cast<std::size_t>(e.slot)] / e.pivot;
            v[static_cast<std::size_t>(e.slot)] = zs;
            if (zs != 0.0)
                for (auto [i, w] : e.nz) v[static_cast<std::size_t>(i)] -= w * zs;
        }
    }

    // Solve B^T y = c; c is indexed by basis slot, the result by row.
    void btran(std::vector<double>& c) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double acc = c[static_cast<std::size_t>(it->slot)];
            for (auto [i, w] : it->nz) acc -= w * c[static_cast<std::size_t>(i)];
            c[static_cast<std::size_t>(it->slot)] = acc / it->pivot;
        }
        core_btran(c);
    }

    void push_eta(int slot, const std::vector<double>& w) {
        Eta e;
        e.slot = slot;
        e.pivot = w[static_cast<std::size_t>(slot)];
        for (int i = 0; i < m_; ++i)
            if (i != slot && std::abs(w[static_cast<std::size_t>(i)]) > 1e-13)
                e.nz.emplace_back(i, w[static_cast<std::size_t>(i)]);
        etas_.push_back(std::move(e));
    }

private:
    // Sparse left-looking LU of the kernel with partial pivoting. Elimination
    // step t factors kernel column col_of_step_[t] and pivots on kernel row
    // pivot_row_[t]; L multipliers live in row space, U entries in step space.
    bool lu_decompose(const std::vector<std::vector<std::pair<int, double>>>& kernel) {
        Lcols_.assign(static_cast<std::size_t>(k_), {});
        Ucols_.assign(static_cast<std::size_t>(k_), {});
        udiag_.assign(static_cast<std::size_t>(k_), 0.0);
        pivot_row_.assign(static_cast<std::size_t>(k_), -1);
        step_of_row_.assign(static_cast<std::size_t>(k_), -1);
        col_of_step_.assign(static_cast<std::size_t>(k_), -1);
        step_of_col_.assign(static_cast<std::size_t>(k_), -1);

        // process sparser columns first to limit fill
        std::vector<int> order(static_cast<std::size_t>(k_));
        for (int t = 0; t < k_; ++t) order[static_cast<std::size_t>(t)] = t;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return kernel[static_cast<std::size_t>(a)].size() < kernel[static_cast<std::size_t>(b)].size();
        });

        std::vector<double>& w = work_k1_;
        w.assign(static_cast<std::size_t>(k_), 0.0);
        std::vector<char> in_w(static_cast<std::size_t>(k_), 0);
        std::vector<int> touched;
        touched.reserve(64);
        auto touch = [&](int r) {
            if (!in_w[static_cast<std::size_t>(r)]) {
                in_w[static_cast<std::size_t>(r)] = 1;
                touched.push_back(r);
            }
        };

        for (int t = 0; t < k_; ++t) {
            int col = order[static_cast<std::size_t>(t)];
            col_of_step_[static_cast<std::size_t>(t)] = col;
            step_of_col_[static_cast<std::size_t>(col)] = t;
            for (auto [r, v] : kernel[static_cast<std::size_t>(col)]) {
                w[static_cast<std::size_t>(r)] += v;
                touch(r);
            }
            auto& ucol = Ucols_[static_cast<std::size_t>(t)];
            for (int s = 0; s < t; ++s) {
                double alpha = w[static_cast<std::size_t>(pivot_row_[static_cast<std::size_t>(s)])];
                if (alpha == 0.0) continue;
                ucol.emplace_back(s, alpha);
                for (auto [r, v] : Lcols_[static_cast<std::size_t>(s)]) {
                    w[static_cast<std::size_t>(r)] -= alpha * v;
                    touch(r);
                }
            }
            int best = -1;
            double best_abs = 1e-11;
            for (int r : touched) {
                if (step_of_row_[static_cast<std::size_t>(r)] != -1) continue;
                double a = std::abs(w[static_cast<std::size_t>(r)]);
                if (a > best_abs || (best >= 0 && a == best_abs && r < best)) {
                    best_abs = a;
                    best = r;
                }
            }
            if (best < 0) return false;
            double diag = w[static_cast<std::size_t>(best)];
            udiag_[static_cast<std::size_t>(t)] = diag;
            pivot_row_[static_cast<std::size_t>(t)] = best;
            step_of_row_[static_cast<std::size_t>(best)] = t;
            auto& lcol = Lcols_[static_cast<std::size_t>(t)];
            for (int r : touched) {
                if (r == best || step_of_row_[static_cast<std::size_t>(r)] != -1) continue;
                double v = w[static_cast<std::size_t>(r)];
                if (std::abs(v) > 1e-13) lcol.emplace_back(r, v / diag);
            }
            for (int r : touched) {
                w[static_cast<std::size_t>(r)] = 0.0;
                in_w[static_cast<std::size_t>(r)] = 0;
            }
            touched.clear();
        }
        // row-wise copy of U for the forward-substitution path
        Urows_.assign(static_cast<std::size_t>(k_), {});
        for (int t = 0; t < k_; ++t)
            for (auto [s, v] : Ucols_[static_cast<std::size_t>(t)])
                Urows_[static_cast<std::size_t>(s)].emplace_back(t, v);
        return true;
    }

    // b indexed by kernel-row position in, by kernel-column position out.
    void kernel_solve(std::vector<double>& b) const {
        std::vector<double>& z = work_k1_;
        z.assign(static_cast<std::size_t>(k_), 0.0);
        for (int t = 0; t < k_; ++t) {
            double zt = b[static_cast<std::size_t>(pivot_row_[static_cast<std::size_t>(t)])];
            z[static_cast<std::size_t>(t)] = zt;
            if (zt != 0.0)
                for (auto [r, v] : Lcols_[static_cast<std::size_t>(t)])
                    b[static_cast<std::size_t>(r)] -= zt * v;
        }
        std::vector<double>& xs = work_k2_;
        xs.assign(static_cast<std::size_t>(k_), 0.0);
        for (int t = k_ - 1; t >= 0; --t) {
            double acc = z[static_cast<std::size_t>(t)];
            for (auto [t2, v] : Urows_[static_cast<std::size_t>(t)])
                acc -= v * xs[static_cast<std::size_t>(t2)];
            xs[static_cast<std::size_t>(t)] = acc / udiag_[static_cast<std::size_t>(t)];
        }
        for (int t = 0; t < k_; ++t)
            b[static_cast<std::size_t>(col_of_step_[static_cast<std::size_t>(t)])] =
                xs[static_cast<std::size_t>(t)];
    }

    // c indexed by kernel-column position in, by kernel-row position out.
    void kernel_solve_t(std::vector<double>& c) const {
        std::vector<double>& wv = work_k1_;
        wv.assign(static_cast<std::size_t>(k_), 0.0);
        for (int t = 0; t < k_; ++t) {
            double acc = c[static_cast<std::size_t>(col_of_step_[static_cast<std::size_t>(t)])];
            for (auto [s, v] : Ucols_[static_cast<std::size_t>(t)])
                acc -= v * wv[static_cast<std::size_t>(s)];
            wv[static_cast<std::size_t>(t)] = acc / udiag_[static_cast<std::size_t>(t)];
        }
        std::vector<double>& vv = work_k2_;
        vv.assign(static_cast<std::size_t>(k_), 0.0);
        for (int t = k_ - 1; t >= 0; --t) {
            double acc = wv[static_cast<std::size_t>(t)];
            for (auto [r, v] : Lcols_[static_cast<std::size_t>(t)])
                acc -= v * vv[static_cast<std::size_t>(step_of_row_[static_cast<std::size_t>(r)])];
            vv[static_cast<std::size_t>(t)] = acc;
        }
        for (int t = 0; t < k_; ++t)
            c[static_cast<std::size_t>(pivot_row_[static_cast<std::size_t>(t)])] =
                vv[static_cast<std::size_t>(t)];
    }

    void core_ftran(std::vector<double>& v) const {
        tmp_g_.resize(static_cast<std::size_t>(k_));
        for (int t = 0; t < k_; ++t)
            tmp_g_[static_cast<std::size_t>(t)] = v[static_cast<std::size_t>(grows_[static_cast<std::size_t>(t)])];
        if (k_ > 0) kernel_solve(tmp_g_);
        // subtract the kernel columns' contribution on unit rows, then divide
        for (int t = 0; t < k_; ++t) {
            double zg = tmp_g_[static_cast<std::size_t>(t)];
            if (zg != 0.0)
                for (auto [r, a] : gcols_urows_[static_cast<std::size_t>(t)])
                    v[static_cast<std::size_t>(r)] -= a * zg;
        }
        std::vector<double>& out = tmp_m_;
        out.assign(static_cast<std::size_t>(m_), 0.0);
        for (int r = 0; r < m_; ++r) {
            int s = unit_slot_of_row_[static_cast<std::size_t>(r)];
            if (s >= 0) out[static_cast<std::size_t>(s)] = v[static_cast<std::size_t>(r)] / unit_scale_[static_cast<std::size_t>(r)];
        }
        for (int t = 0; t < k_; ++t)
            out[static_cast<std::size_t>(gslots_[static_cast<std::size_t>(t)])] = tmp_g_[static_cast<std::size_t>(t)];
        v.assign(out.begin(), out.end());
    }

    void core_btran(std::vector<double>& c) const {
        std::vector<double>& y = tmp_m_;
        y.assign(static_cast<std::size_t>(m_), 0.0);
        for (int r = 0; r < m_; ++r) {
            int s = unit_slot_of_row_[static_cast<std::size_t>(r)];
            if (s >= 0) y[static_cast<std::size_t>(r)] = c[static_cast<std::size_t>(s)] / unit_scale_[static_cast<std::size_t>(r)];
        }
        tmp_g_.resize(static_cast<std::size_t>(k_));
        for (int t = 0; t < k_; ++t) {
            double acc = c[static_cast<std::size_t>(gslots_[static_cast<std::size_t>(t)])];
            for (auto [r, a] : gcols_urows_[static_cast<std::size_t>(t)])
                acc -= a * y[static_cast<std::size_t>(r)];
            tmp_g_[static_cast<std::size_t>(t)] = acc;
        }
        if (k_ > 0) kernel_solve_t(tmp_g_);
        for (int t = 0; t < k_; ++t) y[static_cast<std::size_t>(grows_[static_cast<std::size_t>(t)])] = tmp_g_[static_cast<std::size_t>(t)];
        c.assign(y.begin(), y.end());
    }

    struct Eta {
        int slot;
        double pivot;
        std::vector<std::pair<int, double>> nz;
    };

    int m_ = 0, k_ = 0;
    std::vector<int> unit_slot_of_row_;
    std::vector<double> unit_scale_;
    std::vector<int> gslots_, grows_, grow_pos_;
    std::vector<std::vector<std::pair<int, double>>> Lcols_, Ucols_, Urows_;
    std::vector<double> udiag_;
    std::vector<int> pivot_row_, step_of_row_, col_of_step_, step_of_col_;
    std::vector<std::vector<std::pair<int, double>>> gcols_urows_;
    std::vector<std::vector<std::pair<int, double>>> scratch_pairs_;
    std::vector<Eta> etas_;
    mutable std::vector<double> work_k1_, work_k2_, tmp_g_, tmp_m_;
};

class SimplexSolver {
public:
    explicit SimplexSolver(const LpCore& core) : core_(core), m_(core.m), n_(core.n) {
        N_ = n_ + 2 * m_;
    }

    // lo/hi: structural bounds. warm: previous basis/state to restart from.
    LpResult solve(const std::vector<double>& lo, const std::vector<double>& hi,
                   const LpResult* warm = nullptr) {
        setup_bounds(lo, hi);
        ++lp_stats().solves;
        bool warm_ok = warm && warm->status == LpStatus::Optimal && adopt_warm(*warm);
        if (!warm_ok) {
            cold_start();
            if (need_phase1_) {
                set_phase1_costs();
                PhaseOutcome out = primal_loop();
                if (out == PhaseOutcome::IterationLimit) return finish_failure();
                double infeas = artificial_infeasibility();
                if (infeas > 1e-7 * rhs_scale_) return finish_infeasible();
                pin_artificials();
            }
            set_phase2_costs();
            PhaseOutcome out = primal_loop();
            if (out == PhaseOutcome::Unbounded) return finish_unbounded();
            if (out == PhaseOutcome::IterationLimit) return finish_failure();
            return finish_optimal();
        }
        // warm path: bounds moved, costs unchanged; repair with dual simplex
        set_phase2_costs();
        DualOutcome dout = dual_loop();
        if (dout == DualOutcome::Infeasible) return finish_infeasible();
        if (dout == DualOutcome::IterationLimit) {
            // fall back to a cold solve
            return solve(lo, hi, nullptr);
        }
        PhaseOutcome out = primal_loop();
        if (out == PhaseOutcome::Unbounded) return finish_unbounded();
        if (out == PhaseOutcome::IterationLimit) return solve(lo, hi, nullptr);
        return finish_optimal();
    }

private:
    enum class PhaseOutcome { Optimal, Unbounded, IterationLimit };
    enum class DualOutcome { Feasible, Infeasible, IterationLimit };

    static constexpr double kDualTol = 1e-10;
    static constexpr double kPivTol = 1e-9;
    static constexpr int kRefactorEvery = 100;

    template <typename Buf>
    void column_of(int j, Buf& buf) const {
        if (j < n_) {
            for (int p = core_.col_ptr[static_cast<std::size_t>(j)];
                 p < core_.col_ptr[static_cast<std::size_t>(j) + 1]; ++p)
                buf.emplace_back(core_.row_idx[static_cast<std::size_t>(p)],
                                 core_.val[static_cast<std::size_t>(p)]);
        } else {
            buf.emplace_back(row_of(j), unit_coef(j));
        }
    }
    int row_of(int j) const { return j < n_ + m_ ? j - n_ : j - n_ - m_; }
    bool is_artificial(int j) const { return j >= n_ + m_; }
    // artificials are signed so their value is the absolute row infeasibility
    double unit_coef(int j) const {
        return is_artificial(j) ? art_scale_[static_cast<std::size_t>(row_of(j))] : 1.0;
    }

    double dot_col(int j, const std::vector<double>& y) const {
        if (j >= n_) return unit_coef(j) * y[static_cast<std::size_t>(row_of(j))];
        double acc = 0.0;
        for (int p = core_.col_ptr[static_cast<std::size_t>(j)];
             p < core_.col_ptr[static_cast<std::size_t>(j) + 1]; ++p)
            acc += core_.val[static_cast<std::size_t>(p)] *
                   y[static_cast<std::size_t>(core_.row_idx[static_cast<std::size_t>(p)])];
        return acc;
    }

    void setup_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
        lob_.assign(static_cast<std::size_t>(N_), 0.0);
        upb_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int j = 0; j < n_; ++j) {
            lob_[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
            upb_[static_cast<std::size_t>(j)] = hi[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            lob_[static_cast<std::size_t>(n_ + i)] = core_.slack_lo[static_cast<std::size_t>(i)];
            upb_[static_cast<std::size_t>(n_ + i)] = core_.slack_hi[static_cast<std::size_t>(i)];
            lob_[static_cast<std::size_t>(n_ + m_ + i)] = 0.0;
            upb_[static_cast<std::size_t>(n_ + m_ + i)] = 0.0;
        }
        rhs_scale_ = 1.0;
        for (double b : core_.rhs) rhs_scale_ = std::max(rhs_scale_, std::abs(b));
    }

    double nonbasic_value(int j, std::int8_t st) const {
        if (st == vs::AtLo) return lob_[static_cast<std::size_t>(j)];
        if (st == vs::AtUp) return upb_[static_cast<std::size_t>(j)];
        return 0.0;
    }

    void cold_start() {
        vstat_.assign(static_cast<std::size_t>(N_), vs::AtLo);
        x_.assign(static_cast<std::size_t>(N_), 0.0);
        art_scale_.assign(static_cast<std::size_t>(m_), 1.0);
        for (int j = 0; j < n_ + m_; ++j) {
            double lo = lob_[static_cast<std::size_t>(j)], hi = upb_[static_cast<std::size_t>(j)];
            std::int8_t st;
            if (std::isfinite(lo) && std::isfinite(hi))
                st = std::abs(lo) <= std::abs(hi) ? vs::AtLo : vs::AtUp;
            else if (std::isfinite(lo)) st = vs::AtLo;
            else if (std::isfinite(hi)) st = vs::AtUp;
            else st = vs::Free;
            vstat_[static_cast<std::size_t>(j)] = st;
            x_[static_cast<std::size_t>(j)] = nonbasic_value(j, st);
        }
        // residual per row decides between a basic slack and an artificial
        std::vector<double> resid = residual_without_basics();
        basis_.assign(static_cast<std::size_t>(m_), -1);
        need_phase1_ = false;
        for (int i = 0; i < m_; ++i) {
            int slack = n_ + i;
            double r = resid[static_cast<std::size_t>(i)] +
                       x_[static_cast<std::size_t>(slack)]; // undo slack at-bound contribution
            if (r >= lob_[static_cast<std::size_t>(slack)] - 1e-12 &&
                r <= upb_[static_cast<std::size_t>(slack)] + 1e-12) {
                basis_[static_cast<std::size_t>(i)] = slack;
                vstat_[static_cast<std::size_t>(slack)] = vs::Basic;
                x_[static_cast<std::size_t>(slack)] =
                    std::clamp(r, lob_[static_cast<std::size_t>(slack)], upb_[static_cast<std::size_t>(slack)]);
            } else {
                // slack parks at the bound nearest the residual; artificial absorbs the rest
                double sv = std::clamp(r, lob_[static_cast<std::size_t>(slack)],
                                       upb_[static_cast<std::size_t>(slack)]);
                if (!std::isfinite(sv)) sv = 0.0;
                vstat_[static_cast<std::size_t>(slack)] =
                    sv == lob_[static_cast<std::size_t>(slack)] ? vs::AtLo : vs::AtUp;
                x_[static_cast<std::size_t>(slack)] = sv;
                int art = n_ + m_ + i;
                double av = r - sv;
                art_scale_[static_cast<std::size_t>(i)] = av >= 0.0 ? 1.0 : -1.0;
                lob_[static_cast<std::size_t>(art)] = 0.0;
                upb_[static_cast<std::size_t>(art)] = kInfinity;
                basis_[static_cast<std::size_t>(i)] = art;
                vstat_[static_cast<std::size_t>(art)] = vs::Basic;
                x_[static_cast<std::size_t>(art)] = std::abs(av);
                need_phase1_ = true;
            }
        }
        refactor();
    }

    bool adopt_warm(const LpResult& warm) {
        if (static_cast<int>(warm.basis.size()) != m_ ||
            static_cast<int>(warm.vstat.size()) != N_)
            return false;
        // artificial columns are signed per cold start; a basis that still
        // references one cannot be reproduced here
        for (int j : warm.basis)
            if (is_artificial(j)) return false;
        art_scale_.assign(static_cast<std::size_t>(m_), 1.0);
        vstat_ = warm.vstat;
        basis_ = warm.basis;
        x_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int j = 0; j < N_; ++j) {
            std::int8_t st = vstat_[static_cast<std::size_t>(j)];
            if (st == vs::Basic) continue;
            // bounds may have moved: snap nonbasic values into the new box
            double v = nonbasic_value(j, st);
            if (!std::isfinite(v)) {
                st = std::isfinite(lob_[static_cast<std::size_t>(j)])  ? vs::AtLo
                     : std::isfinite(upb_[static_cast<std::size_t>(j)]) ? vs::AtUp
                                                                        : vs::Free;
                vstat_[static_cast<std::size_t>(j)] = st;
                v = nonbasic_value(j, st);
            }
            x_[static_cast<std::size_t>(j)] = v;
        }
        if (!refactor()) return false;
        recompute_basics();
        return true;
    }

    // rhs minus the contribution of every nonbasic column at its current value
    std::vector<double> residual_without_basics() const {
        std::vector<double> r = core_.rhs;
        for (int j = 0; j < n_; ++j) {
            double v = x_[static_cast<std::size_t>(j)];
            if (v == 0.0 || vstat_[static_cast<std::size_t>(j)] == vs::Basic) continue;
            for (int p = core_.col_ptr[static_cast<std::size_t>(j)];
                 p < core_.col_ptr[static_cast<std::size_t>(j) + 1]; ++p)
                r[static_cast<std::size_t>(core_.row_idx[static_cast<std::size_t>(p)])] -=
                    core_.val[static_cast<std::size_t>(p)] * v;
        }
        for (int j = n_; j < N_; ++j) {
            double v = x_[static_cast<std::size_t>(j)];
            if (v == 0.0 || vstat_[static_cast<std::size_t>(j)] == vs::Basic) continue;
            r[static_cast<std::size_t>(row_of(j))] -= unit_coef(j) * v;
        }
        return r;
    }

    void recompute_basics() {
        std::vector<double> v = residual_without_basics();
        factor_.ftran(v);
        for (int s = 0; s < m_; ++s)
            x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(s)])] =
                v[static_cast<std::size_t>(s)];
    }

    bool refactor() {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = factor_.factor(m_, basis_, [&](int j, auto& buf) { column_of(j, buf); });
        auto& st = lp_stats();
        ++st.refactors;
        st.max_kernel = std::max<long>(st.max_kernel, factor_.kernel_size());
        st.factor_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return ok;
    }

    void set_phase1_costs() {
        cost_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int i = 0; i < m_; ++i) cost_[static_cast<std::size_t>(n_ + m_ + i)] = 1.0;
        phase1_ = true;
    }

    void set_phase2_costs() {
        cost_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int j = 0; j < n_; ++j)
            cost_[static_cast<std::size_t>(j)] =
                core_.cost[static_cast<std::size_t>(j)] + core_.perturb[static_cast<std::size_t>(j)];
        phase1_ = false;
    }

    double artificial_infeasibility() const {
        double total = 0.0;
        for (int i = 0; i < m_; ++i) total += std::abs(x_[static_cast<std::size_t>(n_ + m_ + i)]);
        return total;
    }

    void pin_artificials() {
        for (int i = 0; i < m_; ++i) {
            int art = n_ + m_ + i;
            lob_[static_cast<std::size_t>(art)] = 0.0;
            upb_[static_cast<std::size_t>(art)] = 0.0;
            if (vstat_[static_cast<std::size_t>(art)] != vs::Basic) {
                vstat_[static_cast<std::size_t>(art)] = vs::AtLo;
                x_[static_cast<std::size_t>(art)] = 0.0;
            }
        }
    }

    void compute_duals(std::vector<double>& y) const {
        y.assign(static_cast<std::size_t>(m_), 0.0);
        for (int s = 0; s < m_; ++s)
            y[static_cast<std::size_t>(s)] =
                cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(s)])];
        factor_.btran(y);
    }

    // --- primal simplex ---------------------------------------------------

    PhaseOutcome primal_loop() {
        int degenerate_streak = 0;
        bool bland = false;
        long iter_cap = 20000L + 50L * (m_ + n_);
        std::vector<double> y, w;
        for (long iter = 0; iter < iter_cap; ++iter) {
            if (factor_.eta_count() >= kRefactorEvery) {
                if (!refactor()) throw SingularBasis();
                recompute_basics();
            }
            compute_duals(y);

            int enter = -1;
            double best = 0.0;
            int dir = +1;
            for (int j = 0; j < n_ + m_; ++j) {
                std::int8_t st = vstat_[static_cast<std::size_t>(j)];
                if (st == vs::Basic) continue;
                if (lob_[static_cast<std::size_t>(j)] == upb_[static_cast<std::size_t>(j)]) continue;
                double d = cost_[static_cast<std::size_t>(j)] - dot_col(j, y);
                int cand_dir = 0;
                if (st == vs::AtLo && d < -kDualTol) cand_dir = +1;
                else if (st == vs::AtUp && d > kDualTol) cand_dir = -1;
                else if (st == vs::Free && std::abs(d) > kDualTol) cand_dir = d < 0 ? +1 : -1;
                if (cand_dir == 0) continue;
                if (bland) { enter = j; dir = cand_dir; break; }
                double score = std::abs(d);
                if (score > best) { best = score; enter = j; dir = cand_dir; }
            }
            if (enter < 0) return PhaseOutcome::Optimal;
            ++lp_stats().primal_iters;
#ifdef FASHION_LP_TRACE
            if (lp_stats().primal_iters % 5000 == 0)
                std::fprintf(stderr,
                             "[lp] primal=%ld dual=%ld solves=%ld refactors=%ld maxk=%ld\n",
                             lp_stats().primal_iters, lp_stats().dual_iters, lp_stats().solves,
                             lp_stats().refactors, lp_stats().max_kernel);
#endif

#ifdef FASHION_LP_TRACE
            std::fprintf(stderr, "[primal %s it=%ld] enter=%d dir=%d viol=%.3g infeas=%.6g\n",
                         phase1_ ? "p1" : "p2", iter, enter, dir, best,
                         artificial_infeasibility());
#endif
            dense_column(enter, w);
            factor_.ftran(w);

            // ratio test over basics plus the entering variable's own range
            double limit = upb_[static_cast<std::size_t>(enter)] - lob_[static_cast<std::size_t>(enter)];
            int leave = -1;
            double leave_pivot = 0.0;
            for (int s = 0; s < m_; ++s) {
                double ws = w[static_cast<std::size_t>(s)] * dir;
                int bj = basis_[static_cast<std::size_t>(s)];
                double cand;
                if (ws > kPivTol) {
                    double lb = lob_[static_cast<std::size_t>(bj)];
                    if (!std::isfinite(lb)) continue;
                    cand = (x_[static_cast<std::size_t>(bj)] - lb) / ws;
                } else if (ws < -kPivTol) {
                    double ub = upb_[static_cast<std::size_t>(bj)];
                    if (!std::isfinite(ub)) continue;
                    cand = (x_[static_cast<std::size_t>(bj)] - ub) / ws;
                } else {
                    continue;
                }
                if (cand < 0.0) cand = 0.0;
                if (cand < limit - 1e-12 ||
                    (cand < limit + 1e-12 &&
                     (leave == -1 || std::abs(ws) > std::abs(leave_pivot) + 1e-15))) {
                    limit = cand;
                    leave = s;
                    leave_pivot = w[static_cast<std::size_t>(s)];
                }
            }
            if (!std::isfinite(limit)) {
                if (!refactor()) throw SingularBasis();
                recompute_basics();
                compute_duals(y);
                double d = cost_[static_cast<std::size_t>(enter)] - dot_col(enter, y);
                if ((dir > 0 && d < -kDualTol) || (dir < 0 && d > kDualTol))
                    return PhaseOutcome::Unbounded;
                continue; // stale pricing, try again
            }

#ifdef FASHION_LP_TRACE
            std::fprintf(stderr, "   delta=%.6g leave_slot=%d leave_col=%d\n", limit, leave,
                         leave >= 0 ? basis_[static_cast<std::size_t>(leave)] : -1);
#endif
            apply_step(enter, dir, limit, leave, w);
            if (limit < 1e-10) {
                if (++degenerate_streak > 400) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }
        }
        return PhaseOutcome::IterationLimit;
    }

    void dense_column(int j, std::vector<double>& w) const {
        w.assign(static_cast<std::size_t>(m_), 0.0);
        if (j < n_) {
            for (int p = core_.col_ptr[static_cast<std::size_t>(j)];
                 p < core_.col_ptr[static_cast<std::size_t>(j) + 1]; ++p)
                w[static_cast<std::size_t>(core_.row_idx[static_cast<std::size_t>(p)])] =
                    core_.val[static_cast<std::size_t>(p)];
        } else {
            w[static_cast<std::size_t>(row_of(j))] = unit_coef(j);
        }
    }

    // forced_out_state: dual pivots dictate which bound the leaving variable
    // lands on; primal pivots derive it from the movement direction.
    void apply_step(int enter, int dir, double delta, int leave, const std::vector<double>& w,
                    std::int8_t forced_out_state = -1) {
        if (delta != 0.0) {
            x_[static_cast<std::size_t>(enter)] += dir * delta;
            for (int s = 0; s < m_; ++s) {
                double ws = w[static_cast<std::size_t>(s)];
                if (ws != 0.0)
                    x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(s)])] -= dir * delta * ws;
            }
        }
        if (leave < 0) {
            // bound flip
            vstat_[static_cast<std::size_t>(enter)] =
                dir > 0 ? vs::AtUp : vs::AtLo;
            x_[static_cast<std::size_t>(enter)] = nonbasic_value(enter, vstat_[static_cast<std::size_t>(enter)]);
            return;
        }
        int out = basis_[static_cast<std::size_t>(leave)];
        std::int8_t out_state;
        if (forced_out_state >= 0) {
            out_state = forced_out_state;
        } else {
            double ws = w[static_cast<std::size_t>(leave)] * dir;
            out_state = ws > 0 ? vs::AtLo : vs::AtUp;
        }
        if (!std::isfinite(nonbasic_value(out, out_state)))
            out_state = out_state == vs::AtLo ? vs::AtUp : vs::AtLo;
        vstat_[static_cast<std::size_t>(out)] = out_state;
        x_[static_cast<std::size_t>(out)] = nonbasic_value(out, out_state);
        basis_[static_cast<std::size_t>(leave)] = enter;
        vstat_[static_cast<std::size_t>(enter)] = vs::Basic;
        factor_.push_eta(leave, w);
    }

    // --- dual simplex -----------------------------------------------------

    double bound_violation(int j) const {
        double v = x_[static_cast<std::size_t>(j)];
        if (v < lob_[static_cast<std::size_t>(j)]) return lob_[static_cast<std::size_t>(j)] - v;
        if (v > upb_[static_cast<std::size_t>(j)]) return v - upb_[static_cast<std::size_t>(j)];
        return 0.0;
    }

    // Bound-flipping dual ratio test: walk the admissible breakpoints in
    // ratio order, flipping boxed nonbasics whose whole range still improves
    // the dual objective, and pivot at the breakpoint where the improvement
    // rate would flip sign. Degenerate 0/1 models repair in a handful of
    // pivots this way where the short-step dual needs thousands.
    DualOutcome dual_loop() {
        long iter_cap = 2000L + m_;
        std::vector<double> y, rho, w, flipv;
        for (long iter = 0; iter < iter_cap; ++iter) {
            if (factor_.eta_count() >= kRefactorEvery) {
                if (!refactor()) throw SingularBasis();
                recompute_basics();
            }
            // most violated basic leaves
            int leave = -1;
            double worst = 1e-7 * std::max(1.0, rhs_scale_);
            for (int s = 0; s < m_; ++s) {
                double viol = bound_violation(basis_[static_cast<std::size_t>(s)]);
                if (viol > worst) {
                    worst = viol;
                    leave = s;
                }
            }
            if (leave < 0) return DualOutcome::Feasible;
            ++lp_stats().dual_iters;

            int out = basis_[static_cast<std::size_t>(leave)];
            bool below = x_[static_cast<std::size_t>(out)] < lob_[static_cast<std::size_t>(out)];
            double target = below ? lob_[static_cast<std::size_t>(out)]
                                  : upb_[static_cast<std::size_t>(out)];
            rho.assign(static_cast<std::size_t>(m_), 0.0);
            rho[static_cast<std::size_t>(leave)] = 1.0;
            factor_.btran(rho);
            compute_duals(y);

            struct Breakpoint {
                double ratio;
                int col;
                double alpha;
            };
            std::vector<Breakpoint> bps;
            for (int j = 0; j < n_ + m_; ++j) {
                std::int8_t st = vstat_[static_cast<std::size_t>(j)];
                if (st == vs::Basic) continue;
                if (lob_[static_cast<std::size_t>(j)] == upb_[static_cast<std::size_t>(j)]) continue;
                double alpha = dot_col(j, rho);
                if (std::abs(alpha) <= kPivTol) continue;
                // x_B[leave] moves by -alpha * dx_j; admit directions that
                // push it toward the violated bound
                bool ok = false;
                if (below) {
                    ok = (st == vs::AtLo && alpha < 0) || (st == vs::AtUp && alpha > 0) ||
                         st == vs::Free;
                } else {
                    ok = (st == vs::AtLo && alpha > 0) || (st == vs::AtUp && alpha < 0) ||
                         st == vs::Free;
                }
                if (!ok) continue;
                double d = cost_[static_cast<std::size_t>(j)] - dot_col(j, y);
                bps.push_back({std::abs(d) / std::abs(alpha), j, alpha});
            }
            if (bps.empty()) return DualOutcome::Infeasible;
            std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
                if (a.ratio != b.ratio) return a.ratio < b.ratio;
                return a.col < b.col;
            });

            double remaining = std::abs(x_[static_cast<std::size_t>(out)] - target);
            std::size_t stop = bps.size();
            for (std::size_t i = 0; i < bps.size(); ++i) {
                double range = upb_[static_cast<std::size_t>(bps[i].col)] -
                               lob_[static_cast<std::size_t>(bps[i].col)];
                if (!std::isfinite(range)) {
                    stop = i;
                    break;
                }
                double reduction = std::abs(bps[i].alpha) * range;
                if (remaining <= reduction + 1e-12) {
                    stop = i;
                    break;
                }
                remaining -= reduction;
            }
            if (stop == bps.size()) return DualOutcome::Infeasible; // dual ray

            // flip everything before the stopping breakpoint in one update
            if (stop > 0) {
                flipv.assign(static_cast<std::size_t>(m_), 0.0);
                for (std::size_t i = 0; i < stop; ++i) {
                    int j = bps[i].col;
                    std::int8_t st = vstat_[static_cast<std::size_t>(j)];
                    double dx = st == vs::AtLo
                                    ? upb_[static_cast<std::size_t>(j)] - lob_[static_cast<std::size_t>(j)]
                                    : lob_[static_cast<std::size_t>(j)] - upb_[static_cast<std::size_t>(j)];
                    scratch_col_.clear();
                    column_of(j, scratch_col_);
                    for (auto [r, v] : scratch_col_) flipv[static_cast<std::size_t>(r)] += v * dx;
                    vstat_[static_cast<std::size_t>(j)] = st == vs::AtLo ? vs::AtUp : vs::AtLo;
                    x_[static_cast<std::size_t>(j)] =
                        nonbasic_value(j, vstat_[static_cast<std::size_t>(j)]);
                }
                factor_.ftran(flipv);
                for (int s = 0; s < m_; ++s)
                    x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(s)])] -=
                        flipv[static_cast<std::size_t>(s)];
            }

            int enter = bps[stop].col;
            dense_column(enter, w);
            factor_.ftran(w);
            double alpha = w[static_cast<std::size_t>(leave)];
            if (std::abs(alpha) <= kPivTol * 0.5) {
                if (!refactor()) throw SingularBasis();
                recompute_basics();
                continue;
            }
            double dxj = (x_[static_cast<std::size_t>(out)] - target) / alpha;
            std::int8_t est = vstat_[static_cast<std::size_t>(enter)];
            double want = std::abs(dxj);
            int dir = dxj >= 0 ? +1 : -1;
            if (est == vs::AtLo && dir < 0) { want = 0.0; dir = +1; }
            if (est == vs::AtUp && dir > 0) { want = 0.0; dir = -1; }
            apply_step(enter, dir, want, leave, w, below ? vs::AtLo : vs::AtUp);
        }
        return DualOutcome::IterationLimit;
    }

    // --- termination ------------------------------------------------------

    LpResult finish_optimal() {
        for (int attempt = 0; attempt < 3; ++attempt) {
            if (!refactor()) throw SingularBasis();
            recompute_basics();
            double worst = 0.0;
            for (int s = 0; s < m_; ++s)
                worst = std::max(worst, bound_violation(basis_[static_cast<std::size_t>(s)]));
            if (worst <= 1e-7 * std::max(1.0, rhs_scale_)) break;
            // accumulated drift: repair feasibility, then re-verify optimality
            if (dual_loop() == DualOutcome::Infeasible) return finish_infeasible();
            if (primal_loop() == PhaseOutcome::Unbounded) return finish_unbounded();
        }
        // snap away fp dust on basic values
        for (int s = 0; s < m_; ++s) {
            int j = basis_[static_cast<std::size_t>(s)];
            double v = x_[static_cast<std::size_t>(j)];
            double lo = lob_[static_cast<std::size_t>(j)], hi = upb_[static_cast<std::size_t>(j)];
            if (v < lo && v > lo - 1e-7 * std::max(1.0, std::abs(lo))) x_[static_cast<std::size_t>(j)] = lo;
            if (v > hi && v < hi + 1e-7 * std::max(1.0, std::abs(hi))) x_[static_cast<std::size_t>(j)] = hi;
        }
        LpResult r;
        r.status = LpStatus::Optimal;
        r.x.assign(x_.begin(), x_.begin() + n_);
        r.obj = 0.0;
        double pert_obj = 0.0, pert_slack = 0.0;
        for (int j = 0; j < n_; ++j) {
            double xv = x_[static_cast<std::size_t>(j)];
            r.obj += core_.cost[static_cast<std::size_t>(j)] * xv;
            double pj = core_.perturb[static_cast<std::size_t>(j)];
            if (pj != 0.0) {
                pert_obj += pj * xv;
                if (std::isfinite(upb_[static_cast<std::size_t>(j)]))
                    pert_slack += pj * std::max(0.0, upb_[static_cast<std::size_t>(j)]);
            }
        }
        // the perturbed optimum overestimates the true optimum by at most the
        // perturbation mass over the box
        r.bound = r.obj + pert_obj - pert_slack;
        r.basis = basis_;
        r.vstat = vstat_;
        return r;
    }
    LpResult finish_infeasible() {
        LpResult r;
        r.status = LpStatus::Infeasible;
        return r;
    }
    LpResult finish_unbounded() {
        LpResult r;
        r.status = LpStatus::Unbounded;
        return r;
    }
    LpResult finish_failure() {
        throw MilpError("simplex failed to converge within its iteration budget");
    }

    const LpCore& core_;
    int m_, n_, N_;
    std::vector<double> lob_, upb_, cost_, x_;
    std::vector<double> art_scale_;
    std::vector<std::int8_t> vstat_;
    std::vector<int> basis_;
    BasisFactor factor_;
    std::vector<std::pair<int, double>> scratch_col_;
    bool need_phase1_ = false;
    bool phase1_ = false;
    double rhs_scale_ = 1.0;
};

} // namespace fashion::lp
