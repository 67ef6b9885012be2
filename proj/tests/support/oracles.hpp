#pragma once

// Test-only oracles, independent of the library's solve paths.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "dea/lp.hpp"
#include "dea/types.hpp"

namespace oracles {

// CRS input-oriented radial score for single-input/single-output data:
// (y0/x0) / max_j(y_j/x_j).
inline double ratio_score(const dea::FactorMatrix& fm, std::size_t k) {
    double best = 0.0;
    for (std::size_t j = 0; j < fm.n_dmus(); ++j)
        best = std::max(best, fm.outputs[j][0] / fm.inputs[j][0]);
    return (fm.outputs[k][0] / fm.inputs[k][0]) / best;
}

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a,
                                                       std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-10) return std::nullopt;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

struct VertexOptimum {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> point;
};

// Exhaustive vertex enumeration for small LPs (n <= 3) whose feasible region
// is pointed (x >= 0) and bounded by construction. Candidate vertices are
// intersections of every n-subset of {constraints-as-equalities, x_i = 0}.
inline VertexOptimum vertex_enumerate(const dea::lp::LinearProgram& lp) {
    using dea::lp::Relation;
    const std::size_t n = lp.num_vars();
    struct Row {
        std::vector<double> a;
        double b;
        Relation rel;
    };
    std::vector<Row> rows;
    for (const auto& con : lp.constraints) rows.push_back({con.coeffs, con.rhs, con.rel});
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> unit(n, 0.0);
        unit[j] = 1.0;
        rows.push_back({unit, 0.0, Relation::GreaterEqual});
    }

    auto feasible_point = [&](const std::vector<double>& x) {
        for (const auto& row : rows) {
            double lhs = 0;
            for (std::size_t j = 0; j < n; ++j) lhs += row.a[j] * x[j];
            if (row.rel == Relation::LessEqual && lhs > row.b + 1e-7) return false;
            if (row.rel == Relation::GreaterEqual && lhs < row.b - 1e-7) return false;
            if (row.rel == Relation::Equal && std::fabs(lhs - row.b) > 1e-7) return false;
        }
        return true;
    };

    VertexOptimum best;
    best.objective = lp.sense == dea::lp::Sense::Minimize
                         ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> pick(n);
    auto consider = [&](const std::vector<std::size_t>& subset) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t idx : subset) {
            a.push_back(rows[idx].a);
            b.push_back(rows[idx].b);
        }
        auto x = solve_square(std::move(a), std::move(b));
        if (!x || !feasible_point(*x)) return;
        double obj = 0;
        for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * (*x)[j];
        bool better = lp.sense == dea::lp::Sense::Minimize ? obj < best.objective
                                                           : obj > best.objective;
        if (!best.feasible || better) {
            best.feasible = true;
            best.objective = obj;
            best.point = *x;
        }
    };

    // all n-subsets of rows
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<std::size_t> subset;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (subset.size() == n) {
            consider(subset);
            return;
        }
        for (std::size_t i = start; i < rows.size(); ++i) {
            subset.push_back(i);
            self(self, i + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 0);
    return best;
}

}  // namespace oracles
