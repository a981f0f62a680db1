#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "srmdp/lp.hpp"
#include "srmdp/rng.hpp"

using namespace srmdp;

namespace {

// Brute-force oracle: enumerate all basic solutions of the standardized
// system {eq rows; ub rows + slacks}, keep the feasible ones, take the best
// objective. Only for default bounds [0, inf).
double vertex_oracle(const LinearProgram& lp, bool& feasible) {
    const std::size_t n = lp.num_vars;
    const std::size_t m_eq = lp.eq_matrix.size(), m_ub = lp.ub_matrix.size();
    const std::size_t m = m_eq + m_ub, cols = n + m_ub;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, cols);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < m_eq; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = lp.eq_matrix[i][j];
        b(i) = lp.eq_rhs[i];
    }
    for (std::size_t i = 0; i < m_ub; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(m_eq + i, j) = lp.ub_matrix[i][j];
        a(m_eq + i, n + i) = 1.0;
        b(m_eq + i) = lp.ub_rhs[i];
    }
    feasible = false;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(m);
    // iterate over all m-subsets of columns
    std::vector<bool> mask(cols, false);
    std::fill(mask.end() - static_cast<long>(m), mask.end(), true);
    do {
        std::size_t k = 0;
        for (std::size_t j = 0; j < cols; ++j)
            if (mask[j]) pick[k++] = j;
        Eigen::MatrixXd basis(m, m);
        for (std::size_t c = 0; c < m; ++c) basis.col(static_cast<long>(c)) = a.col(static_cast<long>(pick[c]));
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd xb = lu.solve(b);
        if ((xb.array() < -1e-9).any()) continue;
        feasible = true;
        double obj = 0.0;
        for (std::size_t c = 0; c < m; ++c)
            if (pick[c] < n) obj += lp.objective[pick[c]] * xb(static_cast<long>(c));
        best = std::max(best, obj);
    } while (std::next_permutation(mask.begin(), mask.end()));
    return best;
}

LinearProgram random_lp(std::uint64_t seed, std::size_t n, std::size_t m_eq, std::size_t m_ub) {
    Rng rng(seed);
    LinearProgram lp(n);
    for (std::size_t j = 0; j < n; ++j) lp.objective[j] = rng.uniform() * 2.0 - 1.0;
    for (std::size_t i = 0; i < m_eq; ++i) {
        std::vector<double> row(n);
        double rhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = rng.uniform() * 2.0 - 1.0;
            rhs += row[j] * rng.uniform(); // rhs from a feasible point
        }
        lp.add_eq(std::move(row), rhs);
    }
    for (std::size_t i = 0; i < m_ub; ++i) {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = rng.uniform() * 2.0 - 1.0;
        lp.add_ub(std::move(row), rng.uniform() + 0.5);
    }
    // box the problem so it is never unbounded
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(n, 0.0);
        row[j] = 1.0;
        lp.add_ub(std::move(row), 3.0);
    }
    return lp;
}

} // namespace

TEST_CASE("textbook maximum is found") {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    LinearProgram lp(2);
    lp.objective = {3.0, 5.0};
    lp.add_ub({1.0, 0.0}, 4.0);
    lp.add_ub({0.0, 2.0}, 12.0);
    lp.add_ub({3.0, 2.0}, 18.0);
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(36.0).epsilon(1e-10));
    CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sol.x[1] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("equality constraints and free variables") {
    // max x - y with x + y = 1, x <= 0.75, y free below
    LinearProgram lp(2);
    lp.objective = {1.0, -1.0};
    lp.var_lower[1] = -kLpInf;
    lp.add_eq({1.0, 1.0}, 1.0);
    lp.add_ub({1.0, 0.0}, 0.75);
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(sol.x[1] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("infeasible and unbounded programs are classified") {
    LinearProgram infeasible(1);
    infeasible.add_eq({1.0}, -1.0); // x = -1 with x >= 0
    CHECK(solve(infeasible).status == LpStatus::infeasible);

    LinearProgram unbounded(1);
    unbounded.objective = {1.0};
    CHECK(solve(unbounded).status == LpStatus::unbounded);
}

TEST_CASE("variable upper bounds are honored") {
    LinearProgram lp(2);
    lp.objective = {1.0, 1.0};
    lp.var_upper[0] = 0.4;
    lp.var_upper[1] = 0.3;
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("random LPs match the vertex-enumeration oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const LinearProgram lp = random_lp(seed, n, seed % 2, 2);
        bool feasible = false;
        const double oracle = vertex_oracle(lp, feasible);
        const LpSolution sol = solve(lp);
        if (!feasible) {
            CHECK(sol.status == LpStatus::infeasible);
        } else {
            REQUIRE(sol.status == LpStatus::optimal);
            CHECK(sol.objective_value == doctest::Approx(oracle).epsilon(1e-7));
        }
    }
}

TEST_CASE("optimal duals certify the objective and are dual feasible") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const LinearProgram lp = random_lp(seed, 3, 1, 2);
        const LpSolution sol = solve(lp);
        if (sol.status != LpStatus::optimal) continue;
        const std::size_t m_eq = lp.eq_matrix.size();
        REQUIRE(sol.duals.size() == m_eq + lp.ub_matrix.size());
        // strong duality: all primal bounds are default [0, inf)
        double dual_obj = 0.0;
        for (std::size_t i = 0; i < m_eq; ++i) dual_obj += sol.duals[i] * lp.eq_rhs[i];
        for (std::size_t i = 0; i < lp.ub_matrix.size(); ++i)
            dual_obj += sol.duals[m_eq + i] * lp.ub_rhs[i];
        CHECK(dual_obj == doctest::Approx(sol.objective_value).epsilon(1e-7));
        // reduced costs nonpositive, ub duals nonnegative
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            double reduced = lp.objective[j];
            for (std::size_t i = 0; i < m_eq; ++i) reduced -= sol.duals[i] * lp.eq_matrix[i][j];
            for (std::size_t i = 0; i < lp.ub_matrix.size(); ++i)
                reduced -= sol.duals[m_eq + i] * lp.ub_matrix[i][j];
            CHECK(reduced <= 1e-7);
        }
        for (std::size_t i = 0; i < lp.ub_matrix.size(); ++i) CHECK(sol.duals[m_eq + i] >= -1e-9);
    }
}
