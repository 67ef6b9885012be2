#pragma once

#include <cstddef>
#include <vector>

namespace dea::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

/// Generic dense LP. Variables carry finite lower bounds (default 0) and no
/// upper bounds.
struct LinearProgram {
    Sense sense = Sense::Minimize;
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<double> lower_bounds;  // empty means all-zero

    std::size_t num_vars() const { return objective.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double objective_value = 0.0;  // meaningful only when Optimal
    std::vector<double> primal;    // meaningful only when Optimal
};

/// Two-phase primal simplex with Bland's anti-cycling fallback.
/// Deterministic: identical programs yield bit-identical solutions.
/// Throws NumericalFailure past the iteration cap of 50*(columns+rows).
Solution solve(const LinearProgram& lp);

}  // namespace dea::lp
