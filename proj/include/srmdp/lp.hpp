#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace srmdp {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

/// Dense LP: maximize c^T x subject to eq_matrix x = eq_rhs,
/// ub_matrix x <= ub_rhs, and per-variable bounds (+-inf allowed).
/// Variables default to [0, +inf).
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_matrix;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> ub_matrix;
    std::vector<double> ub_rhs;
    std::vector<double> var_lower;
    std::vector<double> var_upper;

    explicit LinearProgram(std::size_t n = 0) { resize(n); }
    void resize(std::size_t n) {
        num_vars = n;
        objective.assign(n, 0.0);
        var_lower.assign(n, 0.0);
        var_upper.assign(n, kLpInf);
    }
    void add_eq(std::vector<double> row, double rhs) {
        eq_matrix.push_back(std::move(row));
        eq_rhs.push_back(rhs);
    }
    void add_ub(std::vector<double> row, double rhs) {
        ub_matrix.push_back(std::move(row));
        ub_rhs.push_back(rhs);
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    /// Duals of eq rows then ub rows (populated when optimal).
    std::vector<double> duals;
};

/// Two-phase primal simplex on the dense tableau. Dantzig pricing with a
/// switch to Bland's rule after a degenerate streak; pivot tolerance 1e-9.
LpSolution solve(const LinearProgram& lp);

} // namespace srmdp
