#include "dea/lp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dea/errors.hpp"

namespace dea::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Dense simplex tableau: `rows` constraint rows plus one objective row.
// Column layout: structural vars, then slack/surplus, then artificials,
// then the rhs. Objective row holds reduced costs; its rhs is the negated
// objective value.
class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * cols, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t obj_row() const { return rows_; }
    std::size_t rhs_col() const { return cols_ - 1; }

    void pivot(std::size_t pr, std::size_t pc) {
        double p = at(pr, pc);
        for (std::size_t c = 0; c < cols_; ++c) at(pr, c) /= p;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

  private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
};

enum class IterResult { Optimal, Unbounded };

// Price-out loop. Dantzig rule, switching permanently to Bland's rule once
// the objective stalls, which breaks degenerate cycles.
IterResult iterate(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed,
                   std::size_t& iter, std::size_t iter_cap) {
    const std::size_t obj = t.obj_row();
    const std::size_t rhs = t.rhs_col();
    bool bland = false;
    double last_obj = -t.at(obj, rhs);
    std::size_t stalled = 0;
    const std::size_t stall_limit = 2 * (t.rows() + t.cols());

    for (;;) {
        if (++iter > iter_cap)
            throw NumericalFailure("simplex exceeded iteration cap of " + std::to_string(iter_cap));

        // entering column
        std::size_t enter = t.cols();
        if (bland) {
            for (std::size_t c = 0; c < rhs; ++c)
                if (allowed[c] && t.at(obj, c) < -kFeasTol) { enter = c; break; }
        } else {
            double best = -kFeasTol;
            for (std::size_t c = 0; c < rhs; ++c)
                if (allowed[c] && t.at(obj, c) < best) { best = t.at(obj, c); enter = c; }
        }
        if (enter == t.cols()) return IterResult::Optimal;

        // ratio test; ties resolved toward the smallest basic column index
        std::size_t leave = t.rows();
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            double coef = t.at(r, enter);
            if (coef <= kPivotTol) continue;
            double ratio = t.at(r, rhs) / coef;
            if (ratio < best_ratio - kPivotTol ||
                (ratio < best_ratio + kPivotTol && (leave == t.rows() || basis[r] < basis[leave]))) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == t.rows()) return IterResult::Unbounded;

        t.pivot(leave, enter);
        basis[leave] = enter;

        double cur_obj = -t.at(obj, rhs);
        if (cur_obj < last_obj - 1e-12) {
            last_obj = cur_obj;
            stalled = 0;
        } else if (!bland && ++stalled > stall_limit) {
            bland = true;
        }
    }
}

void check_well_formed(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    if (n == 0) throw Error("linear program has no variables");
    for (double c : lp.objective)
        if (!std::isfinite(c)) throw Error("non-finite objective coefficient");
    for (const auto& con : lp.constraints) {
        if (con.coeffs.size() != n) throw Error("constraint width does not match variable count");
        for (double c : con.coeffs)
            if (!std::isfinite(c)) throw Error("non-finite constraint coefficient");
        if (!std::isfinite(con.rhs)) throw Error("non-finite constraint rhs");
    }
    if (!lp.lower_bounds.empty()) {
        if (lp.lower_bounds.size() != n) throw Error("lower bound width does not match variable count");
        for (double b : lp.lower_bounds)
            if (!std::isfinite(b)) throw Error("non-finite lower bound");
    }
}

}  // namespace

Solution solve(const LinearProgram& lp) {
    check_well_formed(lp);

    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.constraints.size();
    const bool maximize = lp.sense == Sense::Maximize;

    // Shift variables to x = lb + u with u >= 0.
    std::vector<double> lb(n, 0.0);
    if (!lp.lower_bounds.empty()) lb = lp.lower_bounds;

    // Row normalization: equilibrate each row to O(1) magnitude (a pure row
    // scaling, so the solution set is untouched and the feasibility tolerance
    // acts relative to the data scale), then make rhs non-negative by flip.
    std::vector<double> row_sign(m, 1.0);
    std::vector<Relation> rel(m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = lp.constraints[i];
        double shifted = con.rhs;
        for (std::size_t j = 0; j < n; ++j) shifted -= con.coeffs[j] * lb[j];
        double norm = std::fabs(shifted);
        for (std::size_t j = 0; j < n; ++j) norm = std::max(norm, std::fabs(con.coeffs[j]));
        double scale = norm > 0.0 ? 1.0 / norm : 1.0;
        rel[i] = con.rel;
        rhs[i] = shifted * scale;
        row_sign[i] = scale;
        if (rhs[i] < 0.0) {
            row_sign[i] = -scale;
            rhs[i] = -rhs[i];
            if (con.rel == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
            else if (con.rel == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
        }
    }

    std::size_t n_slack = 0, n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (rel[i] != Relation::Equal) ++n_slack;  // slack or surplus
        if (rel[i] != Relation::LessEqual) ++n_art;
    }
    const std::size_t aux0 = n;
    const std::size_t art0 = n + n_slack;
    const std::size_t total = n + n_slack + n_art;
    const std::size_t iter_cap = 50 * (total + m) + 100;

    Tableau t(m, total + 1);
    std::vector<std::size_t> basis(m, 0);
    {
        std::size_t next_aux = aux0, next_art = art0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& con = lp.constraints[i];
            for (std::size_t j = 0; j < n; ++j) t.at(i, j) = row_sign[i] * con.coeffs[j];
            t.at(i, t.rhs_col()) = rhs[i];
            if (rel[i] == Relation::LessEqual) {
                t.at(i, next_aux) = 1.0;
                basis[i] = next_aux++;
            } else if (rel[i] == Relation::GreaterEqual) {
                t.at(i, next_aux) = -1.0;
                ++next_aux;
                t.at(i, next_art) = 1.0;
                basis[i] = next_art++;
            } else {
                t.at(i, next_art) = 1.0;
                basis[i] = next_art++;
            }
        }
    }

    std::vector<bool> allowed(total + 1, true);
    std::size_t iter = 0;

    // Phase 1: minimize the sum of artificials.
    if (n_art > 0) {
        for (std::size_t c = art0; c < total; ++c) t.at(t.obj_row(), c) = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < art0) continue;
            for (std::size_t c = 0; c <= total; ++c) t.at(t.obj_row(), c) -= t.at(i, c);
        }
        if (iterate(t, basis, allowed, iter, iter_cap) == IterResult::Unbounded)
            throw NumericalFailure("phase-1 objective unbounded");
        if (-t.at(t.obj_row(), t.rhs_col()) > kFeasTol) return {Status::Infeasible, 0.0, {}};

        for (std::size_t c = art0; c < total; ++c) allowed[c] = false;
        // Pivot residual artificials out of the basis where possible;
        // rows that offer no pivot are redundant and stay at level zero.
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < art0) continue;
            for (std::size_t c = 0; c < art0; ++c) {
                if (std::fabs(t.at(i, c)) > kPivotTol) {
                    t.pivot(i, c);
                    basis[i] = c;
                    break;
                }
            }
        }
    }

    // Phase 2: original objective in minimization form.
    for (std::size_t c = 0; c <= total; ++c) t.at(t.obj_row(), c) = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        t.at(t.obj_row(), j) = maximize ? -lp.objective[j] : lp.objective[j];
    for (std::size_t i = 0; i < m; ++i) {
        double cb = t.at(t.obj_row(), basis[i]);
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c <= total; ++c) t.at(t.obj_row(), c) -= cb * t.at(i, c);
    }
    if (iterate(t, basis, allowed, iter, iter_cap) == IterResult::Unbounded)
        return {Status::Unbounded, 0.0, {}};

    Solution sol;
    sol.status = Status::Optimal;
    sol.primal.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) sol.primal[basis[i]] = t.at(i, t.rhs_col());
    for (std::size_t j = 0; j < n; ++j) sol.primal[j] += lb[j];
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * sol.primal[j];
    sol.objective_value = obj;
    return sol;
}

}  // namespace dea::lp
