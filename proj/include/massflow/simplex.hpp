#pragma once

// Bounded-variable primal simplex over the row form  A x + s = b. Each row
// gets a slack whose bounds encode the relation (<=: s in [0,inf), >=: s in
// (-inf,0], =: s fixed at 0). Phase 1 starts from an all-slack basis with
// artificial columns absorbing the residual of violated rows and minimizes
// their sum; phase 2 optimizes the real objective with the artificials pinned
// to zero. The basis inverse is dense and refactorized periodically.
//
// Pricing is Dantzig (most negative reduced cost, lowest column on ties),
// falling back to Bland's rule after a run of degenerate pivots so
// termination is guaranteed. Everything is deterministic.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "massflow/milp.hpp"

namespace massflow {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, Numerical };

enum class ColStatus : unsigned char { Basic, AtLower, AtUpper, NonbasicFree };

// Column statuses for structural and slack columns, in that order. A basis is
// usable for a warm start only if exactly one column per row is Basic.
struct Basis {
    std::vector<ColStatus> cols;
};

struct SimplexOptions {
    double feas_tol = 1e-7;
    double dual_tol = 1e-7;
    double pivot_tol = 1e-9;
    long max_iterations = 200000;
    int bland_after = 1000; // degenerate pivots before Bland's rule
    int refactor_every = 64;
};

struct LpResult {
    LpStatus status = LpStatus::Numerical;
    double objective = 0.0;
    std::vector<double> x; // structural values
    Basis basis;
    long iterations = 0;
};

class LpSolver {
  public:
    explicit LpSolver(const MilpModel& model, SimplexOptions opts = {})
        : opts_(opts), m_(model.con_count()), nstruct_(model.var_count()) {
        cols_.resize(nstruct_);
        obj_struct_.resize(nstruct_);
        for (int c = 0; c < nstruct_; ++c) obj_struct_[c] = model.obj[c];
        rhs_.resize(m_);
        slack_lo_.resize(m_);
        slack_hi_.resize(m_);
        const double inf = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m_; ++r) {
            const Constraint& con = model.cons[r];
            rhs_[r] = con.rhs;
            for (const LinTerm& term : con.terms) {
                if (term.col < 0 || term.col >= nstruct_)
                    throw std::invalid_argument("LpSolver: constraint references unknown column");
                cols_[term.col].push_back({r, term.coef});
            }
            switch (con.rel) {
                case Relation::LessEq: slack_lo_[r] = 0.0; slack_hi_[r] = inf; break;
                case Relation::GreaterEq: slack_lo_[r] = -inf; slack_hi_[r] = 0.0; break;
                case Relation::Equal: slack_lo_[r] = 0.0; slack_hi_[r] = 0.0; break;
            }
        }
        model_lb_.resize(nstruct_);
        model_ub_.resize(nstruct_);
        for (int c = 0; c < nstruct_; ++c) {
            model_lb_[c] = model.vars[c].lower;
            model_ub_[c] = model.vars[c].upper;
        }
        rhs_scale_ = 1.0;
        for (double b : rhs_) rhs_scale_ = std::max(rhs_scale_, std::abs(b));
    }

    int rows() const { return m_; }
    int structurals() const { return nstruct_; }

    LpResult solve(const Basis* warm = nullptr) {
        return solve(model_lb_, model_ub_, warm);
    }

    LpResult solve(std::span<const double> lower, std::span<const double> upper,
                   const Basis* warm = nullptr) {
        LpResult res;
        if (static_cast<int>(lower.size()) != nstruct_ ||
            static_cast<int>(upper.size()) != nstruct_)
            throw std::invalid_argument("LpSolver::solve: bound vector size mismatch");
        for (int c = 0; c < nstruct_; ++c)
            if (lower[c] > upper[c] + opts_.feas_tol) {
                res.status = LpStatus::Infeasible;
                return res;
            }

        const int nart = m_;
        const int ntotal = nstruct_ + m_ + nart;
        const double inf = std::numeric_limits<double>::infinity();
        lb_.assign(ntotal, 0.0);
        ub_.assign(ntotal, 0.0);
        for (int c = 0; c < nstruct_; ++c) {
            lb_[c] = lower[c];
            ub_[c] = upper[c];
        }
        for (int r = 0; r < m_; ++r) {
            lb_[nstruct_ + r] = slack_lo_[r];
            ub_[nstruct_ + r] = slack_hi_[r];
        }
        // Artificial bounds open up only for rows that need one.
        art_sign_.assign(m_, 1.0);
        stat_.assign(ntotal, ColStatus::AtLower);
        basis_.assign(m_, -1);
        iterations_ = 0;

        bool warm_ok = warm != nullptr && try_warm_start(*warm);
        bool need_phase1 = true;
        if (warm_ok) {
            need_phase1 = false; // warm start is accepted only when feasible
        } else {
            cold_start();
        }

        if (need_phase1) {
            std::vector<double> cost(ntotal, 0.0);
            for (int r = 0; r < m_; ++r) cost[nstruct_ + m_ + r] = 1.0;
            const LpStatus st = run_phase(cost, /*phase1=*/true);
            if (st != LpStatus::Optimal) {
                res.status = st;
                res.iterations = iterations_;
                return res;
            }
            double infeas = 0.0;
            for (int p = 0; p < m_; ++p)
                if (basis_[p] >= nstruct_ + m_) infeas += std::max(0.0, xb_[p]);
            if (infeas > opts_.feas_tol * (1.0 + rhs_scale_)) {
                res.status = LpStatus::Infeasible;
                res.iterations = iterations_;
                return res;
            }
        }
        // Pin the artificials for phase 2.
        for (int r = 0; r < m_; ++r) {
            lb_[nstruct_ + m_ + r] = 0.0;
            ub_[nstruct_ + m_ + r] = 0.0;
        }
        std::vector<double> cost(ntotal, 0.0);
        for (int c = 0; c < nstruct_; ++c) cost[c] = obj_struct_[c];
        const LpStatus st = run_phase(cost, /*phase1=*/false);
        res.status = st;
        res.iterations = iterations_;
        if (st != LpStatus::Optimal) return res;

        res.x.resize(nstruct_);
        for (int c = 0; c < nstruct_; ++c) res.x[c] = col_value(c);
        res.objective = 0.0;
        for (int c = 0; c < nstruct_; ++c) res.objective += obj_struct_[c] * res.x[c];
        res.basis.cols.assign(stat_.begin(), stat_.begin() + nstruct_ + m_);
        return res;
    }

  private:
    // --- column access -----------------------------------------------------

    bool is_artificial(int col) const { return col >= nstruct_ + m_; }
    bool is_slack(int col) const { return col >= nstruct_ && col < nstruct_ + m_; }

    double col_value(int col) const {
        if (stat_[col] == ColStatus::Basic) return xb_[basic_pos_[col]];
        switch (stat_[col]) {
            case ColStatus::AtLower: return lb_[col];
            case ColStatus::AtUpper: return ub_[col];
            default: return 0.0;
        }
    }

    // w += scale * (column col)
    void add_column(int col, double scale, std::vector<double>& w) const {
        if (scale == 0.0) return;
        if (col < nstruct_) {
            for (const auto& [r, a] : cols_[col]) w[r] += scale * a;
        } else if (is_slack(col)) {
            w[col - nstruct_] += scale;
        } else {
            w[col - nstruct_ - m_] += scale * art_sign_[col - nstruct_ - m_];
        }
    }

    double dot_row_prices(int col, const std::vector<double>& y) const {
        if (col < nstruct_) {
            double s = 0.0;
            for (const auto& [r, a] : cols_[col]) s += y[r] * a;
            return s;
        }
        if (is_slack(col)) return y[col - nstruct_];
        return y[col - nstruct_ - m_] * art_sign_[col - nstruct_ - m_];
    }

    // --- basis maintenance --------------------------------------------------

    bool factorize() {
        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        std::vector<double> mat(static_cast<size_t>(m_) * m_, 0.0);
        std::vector<double> colbuf(m_);
        for (int p = 0; p < m_; ++p) {
            std::fill(colbuf.begin(), colbuf.end(), 0.0);
            add_column(basis_[p], 1.0, colbuf);
            for (int r = 0; r < m_; ++r) mat[static_cast<size_t>(r) * m_ + p] = colbuf[r];
        }
        for (int i = 0; i < m_; ++i) binv_[static_cast<size_t>(i) * m_ + i] = 1.0;
        // Gauss-Jordan with partial pivoting.
        for (int k = 0; k < m_; ++k) {
            int piv = k;
            double best = std::abs(mat[static_cast<size_t>(k) * m_ + k]);
            for (int r = k + 1; r < m_; ++r) {
                const double v = std::abs(mat[static_cast<size_t>(r) * m_ + k]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (best < 1e-12) return false;
            if (piv != k) {
                for (int c = 0; c < m_; ++c) {
                    std::swap(mat[static_cast<size_t>(piv) * m_ + c],
                              mat[static_cast<size_t>(k) * m_ + c]);
                    std::swap(binv_[static_cast<size_t>(piv) * m_ + c],
                              binv_[static_cast<size_t>(k) * m_ + c]);
                }
            }
            const double d = mat[static_cast<size_t>(k) * m_ + k];
            for (int c = 0; c < m_; ++c) {
                mat[static_cast<size_t>(k) * m_ + c] /= d;
                binv_[static_cast<size_t>(k) * m_ + c] /= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == k) continue;
                const double f = mat[static_cast<size_t>(r) * m_ + k];
                if (f == 0.0) continue;
                for (int c = 0; c < m_; ++c) {
                    mat[static_cast<size_t>(r) * m_ + c] -= f * mat[static_cast<size_t>(k) * m_ + c];
                    binv_[static_cast<size_t>(r) * m_ + c] -=
                        f * binv_[static_cast<size_t>(k) * m_ + c];
                }
            }
        }
        return true;
    }

    void rebuild_basic_pos() {
        basic_pos_.assign(nstruct_ + 2 * m_, -1);
        for (int p = 0; p < m_; ++p) basic_pos_[basis_[p]] = p;
    }

    void compute_xb() {
        std::vector<double> r(rhs_);
        const int ntotal = nstruct_ + 2 * m_;
        for (int c = 0; c < ntotal; ++c) {
            if (stat_[c] == ColStatus::Basic) continue;
            const double v = col_value(c);
            if (v != 0.0) add_column(c, -v, r);
        }
        xb_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += binv_[static_cast<size_t>(i) * m_ + k] * r[k];
            xb_[i] = s;
        }
    }

    void cold_start() {
        const int ntotal = nstruct_ + 2 * m_;
        for (int c = 0; c < nstruct_; ++c) {
            if (std::isfinite(lb_[c]))
                stat_[c] = ColStatus::AtLower;
            else if (std::isfinite(ub_[c]))
                stat_[c] = ColStatus::AtUpper;
            else
                stat_[c] = ColStatus::NonbasicFree;
        }
        for (int c = nstruct_; c < ntotal; ++c) stat_[c] = ColStatus::AtLower;

        // Row activity with all structurals at their start values.
        std::vector<double> act(m_, 0.0);
        for (int c = 0; c < nstruct_; ++c) {
            const double v = col_value(c);
            if (v != 0.0) add_column(c, v, act);
        }
        for (int r = 0; r < m_; ++r) {
            const int scol = nstruct_ + r;
            const int acol = nstruct_ + m_ + r;
            const double sval = rhs_[r] - act[r];
            if (sval >= slack_lo_[r] - opts_.feas_tol && sval <= slack_hi_[r] + opts_.feas_tol) {
                basis_[r] = scol;
                stat_[scol] = ColStatus::Basic;
            } else {
                const double clamp = sval > slack_hi_[r] ? slack_hi_[r] : slack_lo_[r];
                stat_[scol] = (clamp == slack_hi_[r] && std::isfinite(slack_hi_[r]))
                                  ? ColStatus::AtUpper
                                  : ColStatus::AtLower;
                const double resid = sval - clamp;
                art_sign_[r] = resid >= 0 ? 1.0 : -1.0;
                ub_[acol] = std::numeric_limits<double>::infinity();
                basis_[r] = acol;
                stat_[acol] = ColStatus::Basic;
            }
        }
        rebuild_basic_pos();
        factorize(); // identity-like start, cannot fail
        compute_xb();
    }

    bool try_warm_start(const Basis& warm) {
        if (static_cast<int>(warm.cols.size()) != nstruct_ + m_) return false;
        std::vector<int> basic;
        for (int c = 0; c < nstruct_ + m_; ++c)
            if (warm.cols[c] == ColStatus::Basic) basic.push_back(c);
        if (static_cast<int>(basic.size()) != m_) return false;
        for (int c = 0; c < nstruct_ + m_; ++c) {
            ColStatus st = warm.cols[c];
            if (st != ColStatus::Basic) {
                // Bounds may have changed since the basis was recorded.
                if (st == ColStatus::AtLower && !std::isfinite(lb_[c]))
                    st = std::isfinite(ub_[c]) ? ColStatus::AtUpper : ColStatus::NonbasicFree;
                if (st == ColStatus::AtUpper && !std::isfinite(ub_[c]))
                    st = std::isfinite(lb_[c]) ? ColStatus::AtLower : ColStatus::NonbasicFree;
            }
            stat_[c] = st;
        }
        for (int r = 0; r < m_; ++r) stat_[nstruct_ + m_ + r] = ColStatus::AtLower;
        for (int p = 0; p < m_; ++p) basis_[p] = basic[p];
        rebuild_basic_pos();
        if (!factorize()) return false;
        compute_xb();
        for (int p = 0; p < m_; ++p) {
            const int col = basis_[p];
            if (xb_[p] < lb_[col] - opts_.feas_tol || xb_[p] > ub_[col] + opts_.feas_tol)
                return false; // infeasible start; caller falls back to phase 1
        }
        return true;
    }

    // --- the simplex loop ----------------------------------------------------

    LpStatus run_phase(const std::vector<double>& cost, bool phase1) {
        const int scan_limit = nstruct_ + m_; // artificials never enter
        std::vector<double> y(m_), w(m_);
        int degen_run = 0;
        bool bland = false;
        int since_refactor = 0;

        while (true) {
            if (iterations_ >= opts_.max_iterations) return LpStatus::IterationLimit;
            if (since_refactor >= opts_.refactor_every) {
                if (!factorize()) return LpStatus::Numerical;
                compute_xb();
                since_refactor = 0;
            }

            // Prices: y = c_B' * Binv.
            std::fill(y.begin(), y.end(), 0.0);
            for (int p = 0; p < m_; ++p) {
                const double cb = cost[basis_[p]];
                if (cb == 0.0) continue;
                const double* row = &binv_[static_cast<size_t>(p) * m_];
                for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
            }

            int enter = -1;
            double enter_score = opts_.dual_tol;
            double enter_dir = 0.0;
            for (int c = 0; c < scan_limit; ++c) {
                const ColStatus st = stat_[c];
                if (st == ColStatus::Basic) continue;
                if (lb_[c] == ub_[c]) continue; // fixed, cannot move
                const double d = cost[c] - dot_row_prices(c, y);
                double dir = 0.0;
                if (st == ColStatus::AtLower && d < -opts_.dual_tol) dir = 1.0;
                else if (st == ColStatus::AtUpper && d > opts_.dual_tol) dir = -1.0;
                else if (st == ColStatus::NonbasicFree && std::abs(d) > opts_.dual_tol)
                    dir = d < 0 ? 1.0 : -1.0;
                if (dir == 0.0) continue;
                if (bland) {
                    enter = c;
                    enter_dir = dir;
                    break;
                }
                if (std::abs(d) > enter_score) {
                    enter_score = std::abs(d);
                    enter = c;
                    enter_dir = dir;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            std::fill(w.begin(), w.end(), 0.0);
            {
                std::vector<double> acol(m_, 0.0);
                add_column(enter, 1.0, acol);
                for (int i = 0; i < m_; ++i) {
                    double s = 0.0;
                    const double* row = &binv_[static_cast<size_t>(i) * m_];
                    for (int k = 0; k < m_; ++k) s += row[k] * acol[k];
                    w[i] = s;
                }
            }

            // Ratio test: the entering variable moves by enter_dir * delta.
            double self_limit = std::numeric_limits<double>::infinity();
            if (std::isfinite(lb_[enter]) && std::isfinite(ub_[enter]))
                self_limit = ub_[enter] - lb_[enter];
            double best_ratio = std::numeric_limits<double>::infinity();
            int leave_pos = -1;
            bool leave_at_upper = false;
            double best_pivot = 0.0;
            for (int p = 0; p < m_; ++p) {
                const double eta = enter_dir * w[p];
                if (std::abs(eta) <= opts_.pivot_tol) continue;
                const int bcol = basis_[p];
                double ratio;
                bool to_upper;
                if (eta > 0.0) { // basic decreases, blocked at its lower bound
                    if (!std::isfinite(lb_[bcol])) continue;
                    ratio = (xb_[p] - lb_[bcol]) / eta;
                    to_upper = false;
                } else { // basic increases, blocked at its upper bound
                    if (!std::isfinite(ub_[bcol])) continue;
                    ratio = (xb_[p] - ub_[bcol]) / eta;
                    to_upper = true;
                }
                if (ratio < 0.0) ratio = 0.0;
                bool better = false;
                if (ratio < best_ratio - 1e-12) {
                    better = true;
                } else if (ratio <= best_ratio + 1e-12 && leave_pos >= 0) {
                    if (bland)
                        better = bcol < basis_[leave_pos];
                    else if (std::abs(w[p]) > best_pivot + 1e-12)
                        better = true;
                    else if (std::abs(std::abs(w[p]) - best_pivot) <= 1e-12 &&
                             bcol < basis_[leave_pos])
                        better = true;
                }
                if (better || leave_pos < 0) {
                    best_ratio = std::min(best_ratio, std::max(ratio, 0.0));
                    leave_pos = p;
                    leave_at_upper = to_upper;
                    best_pivot = std::abs(w[p]);
                }
            }

            ++iterations_;
            ++since_refactor;

            if (leave_pos < 0 && !std::isfinite(self_limit))
                return phase1 ? LpStatus::Numerical : LpStatus::Unbounded;

            if (self_limit < best_ratio) {
                // Bound flip: the entering variable crosses to its other bound.
                for (int p = 0; p < m_; ++p) xb_[p] -= enter_dir * self_limit * w[p];
                stat_[enter] =
                    stat_[enter] == ColStatus::AtLower ? ColStatus::AtUpper : ColStatus::AtLower;
                if (self_limit <= 1e-10) ++degen_run;
                else degen_run = 0;
            } else {
                const double delta = best_ratio;
                const double enter_from = col_value(enter);
                for (int p = 0; p < m_; ++p) xb_[p] -= enter_dir * delta * w[p];
                const int lcol = basis_[leave_pos];
                stat_[lcol] = leave_at_upper ? ColStatus::AtUpper : ColStatus::AtLower;
                basic_pos_[lcol] = -1;
                basis_[leave_pos] = enter;
                stat_[enter] = ColStatus::Basic;
                basic_pos_[enter] = leave_pos;
                xb_[leave_pos] = enter_from + enter_dir * delta;
                // Rank-one update of the inverse.
                const double piv = w[leave_pos];
                if (std::abs(piv) < 1e-12) {
                    if (!factorize()) return LpStatus::Numerical;
                    compute_xb();
                    since_refactor = 0;
                } else {
                    double* prow = &binv_[static_cast<size_t>(leave_pos) * m_];
                    for (int k = 0; k < m_; ++k) prow[k] /= piv;
                    for (int i = 0; i < m_; ++i) {
                        if (i == leave_pos) continue;
                        const double f = w[i];
                        if (f == 0.0) continue;
                        double* row = &binv_[static_cast<size_t>(i) * m_];
                        for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
                    }
                }
                if (delta <= 1e-10) ++degen_run;
                else degen_run = 0;
            }
            if (degen_run >= opts_.bland_after) bland = true;
            else if (degen_run == 0) bland = false;
        }
    }

    SimplexOptions opts_;
    int m_ = 0;
    int nstruct_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> obj_struct_;
    std::vector<double> rhs_;
    std::vector<double> slack_lo_, slack_hi_;
    std::vector<double> model_lb_, model_ub_;
    double rhs_scale_ = 1.0;

    // per-solve state
    std::vector<double> lb_, ub_;
    std::vector<ColStatus> stat_;
    std::vector<int> basis_;
    std::vector<int> basic_pos_;
    std::vector<double> binv_;
    std::vector<double> xb_;
    std::vector<double> art_sign_;
    long iterations_ = 0;
};

// Solves the LP relaxation of the model (integrality ignored).
inline LpResult solve_lp(const MilpModel& model, const Basis* warm = nullptr,
                         const SimplexOptions& opts = {}) {
    LpSolver solver(model, opts);
    return solver.solve(warm);
}

} // namespace massflow
