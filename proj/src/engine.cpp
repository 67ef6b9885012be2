#include "dea/engine.hpp"

#include <cmath>
#include <limits>

#include "dea/errors.hpp"
#include "dea/lp.hpp"

namespace dea {

namespace {

constexpr double kLambdaTol = 1e-9;  // peer weights below this are not reported

double snap_to_unity(double score, double tol) {
    return std::fabs(score - 1.0) < tol ? 1.0 : score;
}

// Envelopment program over a reference subset: variables [theta, lambda...].
lp::Solution solve_envelopment(const FactorMatrix& fm, const std::vector<std::size_t>& ref,
                               const std::vector<double>& x0, const std::vector<double>& y0,
                               Rts rts) {
    const std::size_t m = x0.size(), s = y0.size(), nref = ref.size();
    lp::LinearProgram prog;
    prog.objective.assign(1 + nref, 0.0);
    prog.objective[0] = 1.0;

    for (std::size_t i = 0; i < m; ++i) {
        lp::Constraint con;
        con.coeffs.assign(1 + nref, 0.0);
        con.coeffs[0] = -x0[i];
        for (std::size_t r = 0; r < nref; ++r) con.coeffs[1 + r] = fm.inputs[ref[r]][i];
        con.rel = lp::Relation::LessEqual;
        con.rhs = 0.0;
        prog.constraints.push_back(std::move(con));
    }
    for (std::size_t o = 0; o < s; ++o) {
        lp::Constraint con;
        con.coeffs.assign(1 + nref, 0.0);
        for (std::size_t r = 0; r < nref; ++r) con.coeffs[1 + r] = fm.outputs[ref[r]][o];
        con.rel = lp::Relation::GreaterEqual;
        con.rhs = y0[o];
        prog.constraints.push_back(std::move(con));
    }
    if (rts == Rts::Vrs) {
        lp::Constraint con;
        con.coeffs.assign(1 + nref, 0.0);
        for (std::size_t r = 0; r < nref; ++r) con.coeffs[1 + r] = 1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = 1.0;
        prog.constraints.push_back(std::move(con));
    }
    try {
        return lp::solve(prog);
    } catch (const NumericalFailure& e) {
        throw SolverFailure(e.what());
    }
}

// Second stage: maximize total slack at fixed theta.
void fill_slacks(const FactorMatrix& fm, const std::vector<std::size_t>& ref,
                 const std::vector<double>& x0, const std::vector<double>& y0, Rts rts,
                 double theta, DeaResult& out) {
    const std::size_t m = x0.size(), s = y0.size(), nref = ref.size();
    const std::size_t n_vars = nref + m + s;  // lambda, input slacks, output slacks
    lp::LinearProgram prog;
    prog.sense = lp::Sense::Maximize;
    prog.objective.assign(n_vars, 0.0);
    for (std::size_t v = nref; v < n_vars; ++v) prog.objective[v] = 1.0;

    for (std::size_t i = 0; i < m; ++i) {
        lp::Constraint con;
        con.coeffs.assign(n_vars, 0.0);
        for (std::size_t r = 0; r < nref; ++r) con.coeffs[r] = fm.inputs[ref[r]][i];
        con.coeffs[nref + i] = 1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = theta * x0[i];
        prog.constraints.push_back(std::move(con));
    }
    for (std::size_t o = 0; o < s; ++o) {
        lp::Constraint con;
        con.coeffs.assign(n_vars, 0.0);
        for (std::size_t r = 0; r < nref; ++r) con.coeffs[r] = fm.outputs[ref[r]][o];
        con.coeffs[nref + m + o] = -1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = y0[o];
        prog.constraints.push_back(std::move(con));
    }
    if (rts == Rts::Vrs) {
        lp::Constraint con;
        con.coeffs.assign(n_vars, 0.0);
        for (std::size_t r = 0; r < nref; ++r) con.coeffs[r] = 1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = 1.0;
        prog.constraints.push_back(std::move(con));
    }

    lp::Solution sol;
    try {
        sol = lp::solve(prog);
    } catch (const NumericalFailure& e) {
        throw SolverFailure(e.what());
    }
    if (sol.status != lp::Status::Optimal)
        throw SolverFailure("slack stage did not solve at fixed theta");

    for (std::size_t r = 0; r < nref; ++r)
        if (sol.primal[r] > kLambdaTol) out.lambdas[fm.dmu_order[ref[r]].code] = sol.primal[r];
    out.input_slacks.assign(m, 0.0);
    out.output_slacks.assign(s, 0.0);
    for (std::size_t i = 0; i < m; ++i) out.input_slacks[i] = std::max(0.0, sol.primal[nref + i]);
    for (std::size_t o = 0; o < s; ++o) out.output_slacks[o] = std::max(0.0, sol.primal[nref + m + o]);
}

// Residual slacks implied by a stage-1 solution (no slack maximization).
void residual_slacks(const FactorMatrix& fm, const std::vector<std::size_t>& ref,
                     const std::vector<double>& lambda, const std::vector<double>& x0,
                     const std::vector<double>& y0, double theta, DeaResult& out) {
    const std::size_t m = x0.size(), s = y0.size();
    out.input_slacks.assign(m, 0.0);
    out.output_slacks.assign(s, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double used = 0;
        for (std::size_t r = 0; r < ref.size(); ++r) used += lambda[r] * fm.inputs[ref[r]][i];
        out.input_slacks[i] = std::max(0.0, theta * x0[i] - used);
    }
    for (std::size_t o = 0; o < s; ++o) {
        double made = 0;
        for (std::size_t r = 0; r < ref.size(); ++r) made += lambda[r] * fm.outputs[ref[r]][o];
        out.output_slacks[o] = std::max(0.0, made - y0[o]);
    }
    for (std::size_t r = 0; r < ref.size(); ++r)
        if (lambda[r] > kLambdaTol) out.lambdas[fm.dmu_order[ref[r]].code] = lambda[r];
}

DeaResult radial_common(const FactorMatrix& fm, std::size_t k, const DeaConfig& cfg,
                        bool exclude_self) {
    cfg.validate();
    fm.validate(exclude_self ? 2 : 1);
    if (k >= fm.n_dmus()) throw Error("dmu index out of range");

    std::vector<std::size_t> ref;
    for (std::size_t j = 0; j < fm.n_dmus(); ++j)
        if (!exclude_self || j != k) ref.push_back(j);

    DeaResult result;
    result.dmu = fm.dmu_order[k];

    auto sol = solve_envelopment(fm, ref, fm.inputs[k], fm.outputs[k], cfg.rts);
    if (sol.status == lp::Status::Infeasible) {
        result.status = SolveStatus::Infeasible;
        result.score = std::numeric_limits<double>::quiet_NaN();
        return result;
    }
    if (sol.status != lp::Status::Optimal)
        throw SolverFailure("envelopment program unbounded; data violates matrix invariants");

    const double theta = sol.primal[0];
    result.status = SolveStatus::Optimal;
    result.score = snap_to_unity(theta, cfg.unity_tolerance);
    bool stage2_done = false;
    if (cfg.two_stage_slacks) {
        try {
            fill_slacks(fm, ref, fm.inputs[k], fm.outputs[k], cfg.rts, theta, result);
            stage2_done = true;
        } catch (const SolverFailure&) {
            // theta sits at the very edge of the slack stage's feasible set;
            // fall back to the slacks implied by the stage-1 basis
        }
    }
    if (!stage2_done) {
        std::vector<double> lambda(sol.primal.begin() + 1, sol.primal.end());
        residual_slacks(fm, ref, lambda, fm.inputs[k], fm.outputs[k], theta, result);
    }
    return result;
}

}  // namespace

void DeaConfig::validate() const {
    if (!(unity_tolerance > 0.0 && unity_tolerance < 1e-3))
        throw Error("unity_tolerance must lie in (0, 1e-3)");
}

DeaResult radial_efficiency(const FactorMatrix& fm, std::size_t dmu_index, const DeaConfig& cfg) {
    return radial_common(fm, dmu_index, cfg, /*exclude_self=*/false);
}

DeaResult super_efficiency(const FactorMatrix& fm, std::size_t dmu_index, const DeaConfig& cfg) {
    return radial_common(fm, dmu_index, cfg, /*exclude_self=*/true);
}

DeaResult sbm_efficiency(const FactorMatrix& fm, std::size_t k, const DeaConfig& cfg) {
    cfg.validate();
    fm.validate(1);
    if (k >= fm.n_dmus()) throw Error("dmu index out of range");

    const std::size_t n = fm.n_dmus(), m = fm.n_inputs(), s = fm.n_outputs();
    const auto& x0 = fm.inputs[k];
    const auto& y0 = fm.outputs[k];

    std::vector<std::size_t> pos_in, pos_out;
    for (std::size_t i = 0; i < m; ++i)
        if (x0[i] > 0.0) pos_in.push_back(i);
    for (std::size_t o = 0; o < s; ++o)
        if (y0[o] > 0.0) pos_out.push_back(o);
    if (pos_out.size() < s && !cfg.sbm_drop_zero_outputs)
        throw ZeroOutputUnsupported("DMU " + fm.dmu_order[k].code +
                                    " has a zero output and zero-output handling is disabled");

    // Charnes-Cooper transformed program, variables [t, Lambda..., Sin..., Sout...].
    const std::size_t vt = 0, vl = 1, vsi = vl + n, vso = vsi + m;
    const std::size_t n_vars = 1 + n + m + s;
    lp::LinearProgram prog;
    prog.objective.assign(n_vars, 0.0);
    prog.objective[vt] = 1.0;
    for (std::size_t i : pos_in)
        prog.objective[vsi + i] = -1.0 / (static_cast<double>(pos_in.size()) * x0[i]);

    {
        lp::Constraint norm;
        norm.coeffs.assign(n_vars, 0.0);
        norm.coeffs[vt] = 1.0;
        for (std::size_t o : pos_out)
            norm.coeffs[vso + o] = 1.0 / (static_cast<double>(pos_out.size()) * y0[o]);
        norm.rel = lp::Relation::Equal;
        norm.rhs = 1.0;
        prog.constraints.push_back(std::move(norm));
    }
    for (std::size_t i = 0; i < m; ++i) {
        lp::Constraint con;
        con.coeffs.assign(n_vars, 0.0);
        con.coeffs[vt] = -x0[i];
        for (std::size_t j = 0; j < n; ++j) con.coeffs[vl + j] = fm.inputs[j][i];
        con.coeffs[vsi + i] = 1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = 0.0;
        prog.constraints.push_back(std::move(con));
    }
    for (std::size_t o = 0; o < s; ++o) {
        lp::Constraint con;
        con.coeffs.assign(n_vars, 0.0);
        con.coeffs[vt] = -y0[o];
        for (std::size_t j = 0; j < n; ++j) con.coeffs[vl + j] = fm.outputs[j][o];
        con.coeffs[vso + o] = -1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = 0.0;
        prog.constraints.push_back(std::move(con));
    }
    if (cfg.rts == Rts::Vrs) {
        lp::Constraint con;
        con.coeffs.assign(n_vars, 0.0);
        con.coeffs[vt] = -1.0;
        for (std::size_t j = 0; j < n; ++j) con.coeffs[vl + j] = 1.0;
        con.rel = lp::Relation::Equal;
        con.rhs = 0.0;
        prog.constraints.push_back(std::move(con));
    }

    lp::Solution sol;
    try {
        sol = lp::solve(prog);
    } catch (const NumericalFailure& e) {
        throw SolverFailure(e.what());
    }
    if (sol.status != lp::Status::Optimal)
        throw SolverFailure("slack-based program did not reach an optimum");

    DeaResult result;
    result.dmu = fm.dmu_order[k];
    result.status = SolveStatus::Optimal;
    const double t = sol.primal[vt];
    if (t <= kLambdaTol) throw SolverFailure("degenerate Charnes-Cooper scale factor");
    result.score = snap_to_unity(sol.objective_value, cfg.unity_tolerance);
    for (std::size_t j = 0; j < n; ++j) {
        double l = sol.primal[vl + j] / t;
        if (l > kLambdaTol) result.lambdas[fm.dmu_order[j].code] = l;
    }
    result.input_slacks.assign(m, 0.0);
    result.output_slacks.assign(s, 0.0);
    for (std::size_t i = 0; i < m; ++i) result.input_slacks[i] = sol.primal[vsi + i] / t;
    for (std::size_t o = 0; o < s; ++o) result.output_slacks[o] = sol.primal[vso + o] / t;
    return result;
}

double scale_efficiency(const DeaResult& crs, const DeaResult& vrs) {
    if (crs.dmu.code != vrs.dmu.code)
        throw MismatchedInputs("scale efficiency needs CRS and VRS results of the same DMU");
    if (crs.status != SolveStatus::Optimal || vrs.status != SolveStatus::Optimal)
        throw MismatchedInputs("scale efficiency needs two Optimal results");
    return crs.score / vrs.score;
}

BatchResults run_all(const FactorMatrix& fm, const DeaConfig& cfg) {
    cfg.validate();
    if (cfg.method == Method::Bootstrap) throw Error("bootstrap runs through bootstrap_dea, not run_all");
    fm.validate(cfg.method == Method::SuperEfficiency ? 2 : 1);
    BatchResults batch;
    for (std::size_t k = 0; k < fm.n_dmus(); ++k) {
        try {
            switch (cfg.method) {
                case Method::Radial: batch.results.push_back(radial_efficiency(fm, k, cfg)); break;
                case Method::SuperEfficiency: batch.results.push_back(super_efficiency(fm, k, cfg)); break;
                case Method::Sbm: batch.results.push_back(sbm_efficiency(fm, k, cfg)); break;
                case Method::Bootstrap: break;  // rejected above
            }
        } catch (const Error& e) {
            batch.failures.push_back({fm.dmu_order[k].code, e.what()});
        }
    }
    return batch;
}

std::optional<double> radial_score_of_point(const FactorMatrix& reference,
                                            const std::vector<double>& x0,
                                            const std::vector<double>& y0, Rts rts) {
    std::vector<std::size_t> ref(reference.n_dmus());
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] = j;
    auto sol = solve_envelopment(reference, ref, x0, y0, rts);
    if (sol.status == lp::Status::Infeasible) return std::nullopt;
    if (sol.status != lp::Status::Optimal)
        throw SolverFailure("envelopment program unbounded; data violates matrix invariants");
    return sol.primal[0];
}

}  // namespace dea
