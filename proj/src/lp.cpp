#include "srmdp/lp.hpp"

#include "srmdp/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace srmdp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr std::size_t kRefactorInterval = 512;

// Standard-form program: maximize c^T y, A y = b, y >= 0, built by
// substituting out bounds and splitting free variables.
struct StandardForm {
    std::size_t n = 0; // structural + slack columns
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<double> cost;
    double cost_offset = 0.0;
    // per original variable: column(s) and affine map x = sign*y + shift
    struct VarMap {
        std::size_t col = 0;
        std::size_t neg_col = 0; // valid when split
        double shift = 0.0;
        double sign = 1.0;
        bool split = false;
    };
    std::vector<VarMap> vars;
    std::size_t num_eq = 0;       // leading equality rows
    std::vector<std::size_t> slack_col; // slack column per ub row
};

StandardForm to_standard(const LinearProgram& lp) {
    StandardForm sf;
    sf.vars.resize(lp.num_vars);

    std::size_t cols = 0;
    std::vector<std::pair<std::size_t, double>> extra_ub; // (var, bound on shifted var)
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const double lo = lp.var_lower[j], hi = lp.var_upper[j];
        auto& vm = sf.vars[j];
        if (std::isfinite(lo)) {
            vm.col = cols++;
            vm.shift = lo;
            vm.sign = 1.0;
            if (std::isfinite(hi)) extra_ub.emplace_back(j, hi - lo);
        } else if (std::isfinite(hi)) {
            vm.col = cols++;
            vm.shift = hi;
            vm.sign = -1.0;
        } else {
            vm.col = cols++;
            vm.neg_col = cols++;
            vm.split = true;
        }
    }

    const std::size_t num_ub = lp.ub_matrix.size() + extra_ub.size();
    sf.n = cols + num_ub;
    sf.cost.assign(sf.n, 0.0);
    sf.num_eq = lp.eq_matrix.size();

    auto emit = [&](const std::vector<double>& coeffs, double rhs_in,
                    std::vector<double>& row) -> double {
        row.assign(sf.n, 0.0);
        double rhs = rhs_in;
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            const double c = coeffs[j];
            if (c == 0.0) continue;
            const auto& vm = sf.vars[j];
            if (vm.split) {
                row[vm.col] += c;
                row[vm.neg_col] -= c;
            } else {
                row[vm.col] += c * vm.sign;
                rhs -= c * vm.shift;
            }
        }
        return rhs;
    };

    for (std::size_t i = 0; i < lp.eq_matrix.size(); ++i) {
        std::vector<double> row;
        const double rhs = emit(lp.eq_matrix[i], lp.eq_rhs[i], row);
        sf.rows.push_back(std::move(row));
        sf.rhs.push_back(rhs);
    }
    std::size_t slack = cols;
    for (std::size_t i = 0; i < lp.ub_matrix.size(); ++i) {
        std::vector<double> row;
        const double rhs = emit(lp.ub_matrix[i], lp.ub_rhs[i], row);
        row[slack] = 1.0;
        sf.slack_col.push_back(slack++);
        sf.rows.push_back(std::move(row));
        sf.rhs.push_back(rhs);
    }
    for (const auto& [j, bound] : extra_ub) {
        std::vector<double> row(sf.n, 0.0);
        row[sf.vars[j].col] = 1.0;
        row[slack] = 1.0;
        sf.slack_col.push_back(slack++);
        sf.rows.push_back(std::move(row));
        sf.rhs.push_back(bound);
    }

    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const double c = lp.objective[j];
        if (c == 0.0) continue;
        const auto& vm = sf.vars[j];
        if (vm.split) {
            sf.cost[vm.col] += c;
            sf.cost[vm.neg_col] -= c;
        } else {
            sf.cost[vm.col] += c * vm.sign;
            sf.cost_offset += c * vm.shift;
        }
    }
    return sf;
}

class Tableau {
public:
    Tableau(const StandardForm& sf) : sf_(sf), m_(sf.rows.size()), n_(sf.n) {
        // artificials appended for every row; rhs made nonnegative first
        tab_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double flip = sf.rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = flip * sf.rows[i][j];
            tab_[i].back() = flip * sf.rhs[i];
            tab_[i][n_ + i] = 1.0;
            basis_[i] = n_ + i;
        }
        // ub rows with nonnegative rhs start from their slack instead of the
        // artificial, which keeps phase 1 short
        for (std::size_t r = 0; r < sf.slack_col.size(); ++r) {
            const std::size_t i = sf.num_eq + r;
            if (sf.rhs[i] >= 0.0) basis_[i] = sf.slack_col[r];
        }
        init_ = tab_;
    }

    // phase 1: maximize -sum(artificials); returns attained value (<= 0)
    bool run_phase1() {
        phase_cost_.assign(n_ + m_ + 1, 0.0);
        for (std::size_t j = n_; j < n_ + m_; ++j) phase_cost_[j] = -1.0;
        obj_ = phase_cost_;
        price_out();
        iterate(n_ + m_);
        if (-obj_.back() < -kFeasTol) return false; // max of -sum(art) below 0
        drive_out_artificials();
        return true;
    }

    void run_phase2() {
        phase_cost_.assign(n_ + m_ + 1, 0.0);
        for (std::size_t j = 0; j < n_; ++j) phase_cost_[j] = sf_.cost[j];
        obj_ = phase_cost_;
        price_out();
        iterate(n_); // artificial columns excluded from pricing
    }

    bool unbounded() const { return unbounded_; }
    double objective() const { return -obj_.back(); }

    std::vector<double> primal() const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) y[basis_[i]] = tab_[i].back();
        return y;
    }

    // duals from the final basis: solve B^T y = c_B against the original matrix
    std::vector<double> duals() const {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
        Eigen::VectorXd cb = Eigen::VectorXd::Zero(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t col = basis_[i];
            for (std::size_t r = 0; r < m_; ++r)
                B(r, i) = col < n_ ? sf_.rows[r][col] : (r == col - n_ ? 1.0 : 0.0);
            cb(i) = col < n_ ? sf_.cost[col] : 0.0;
        }
        Eigen::VectorXd y = B.transpose().partialPivLu().solve(cb);
        return {y.data(), y.data() + m_};
    }

private:
    void price_out() {
        for (std::size_t i = 0; i < m_; ++i) {
            const double c = obj_[basis_[i]];
            if (c == 0.0) continue;
            for (std::size_t j = 0; j <= n_ + m_; ++j) obj_[j] -= c * tab_[i][j];
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = tab_[row][col];
        for (double& v : tab_[row]) v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = tab_[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_ + m_; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        const double f = obj_[col];
        if (f != 0.0)
            for (std::size_t j = 0; j <= n_ + m_; ++j) obj_[j] -= f * tab_[row][j];
        basis_[row] = col;
    }

    void iterate(std::size_t num_cols) {
        const std::size_t max_iters = 200 * (m_ + n_) + 2000;
        std::size_t degenerate_streak = 0;
        bool bland = false;
        for (std::size_t it = 0; it < max_iters; ++it) {
            // long tableau runs accumulate roundoff; rebuild from the
            // original columns periodically and drop back to Dantzig pricing
            if (it > 0 && it % kRefactorInterval == 0) {
                refactor();
                bland = false;
                degenerate_streak = 0;
            }

            // entering column: Dantzig, or first eligible index under Bland
            std::size_t enter = num_cols;
            double best = kCostTol;
            for (std::size_t j = 0; j < num_cols; ++j) {
                if (obj_[j] <= best) continue;
                enter = j;
                if (bland) break;
                best = obj_[j];
            }
            if (enter == num_cols) return; // optimal

            const std::size_t leave = ratio_test(enter);
            if (leave == m_) {
                unbounded_ = true;
                return;
            }
            const double step = tab_[leave].back() / tab_[leave][enter];
            degenerate_streak = step < 1e-12 ? degenerate_streak + 1 : 0;
            if (degenerate_streak > 64) bland = true;
            pivot(leave, enter);
        }
        throw NumericError("simplex cycling guard exhausted");
    }

    // min-ratio row; prefers well-scaled pivot elements, ties to the
    // smallest basis index (Bland leaving rule)
    std::size_t ratio_test(std::size_t enter) const {
        for (const double eligibility : {1e-7, kPivotTol}) {
            std::size_t leave = m_;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = tab_[i][enter];
                if (a <= eligibility) continue;
                const double ratio = tab_[i].back() / a;
                if (leave == m_ || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave != m_) return leave;
        }
        return m_;
    }

    // rebuild tab_ = B^{-1} * [A I b] from the untouched initial tableau and
    // re-price the current phase objective
    void refactor() {
        Eigen::MatrixXd basis_cols(m_, m_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t r = 0; r < m_; ++r) basis_cols(r, i) = init_[r][basis_[i]];
        Eigen::MatrixXd full(m_, n_ + m_ + 1);
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t j = 0; j <= n_ + m_; ++j) full(r, j) = init_[r][j];
        const Eigen::MatrixXd fresh = basis_cols.partialPivLu().solve(full);
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t j = 0; j <= n_ + m_; ++j) tab_[r][j] = fresh(r, j);
        obj_ = phase_cost_;
        price_out();
    }

    // after phase 1, pivot basic artificials (at zero) out of the basis
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (std::abs(tab_[i][j]) > kPivotTol) {
                    enter = j;
                    break;
                }
            if (enter < n_) pivot(i, enter);
            // else: redundant row, artificial stays basic at zero
        }
    }

    const StandardForm& sf_;
    std::size_t m_, n_;
    std::vector<std::vector<double>> tab_;
    std::vector<std::vector<double>> init_;
    std::vector<double> obj_;
    std::vector<double> phase_cost_;
    std::vector<std::size_t> basis_;
    bool unbounded_ = false;
};

} // namespace

LpSolution solve(const LinearProgram& lp) {
    if (lp.objective.size() != lp.num_vars)
        throw std::invalid_argument("LP objective size mismatch");
    for (const auto& row : lp.eq_matrix)
        if (row.size() != lp.num_vars) throw std::invalid_argument("LP eq row size mismatch");
    for (const auto& row : lp.ub_matrix)
        if (row.size() != lp.num_vars) throw std::invalid_argument("LP ub row size mismatch");
    for (std::size_t j = 0; j < lp.num_vars; ++j)
        if (lp.var_lower[j] > lp.var_upper[j])
            return {LpStatus::infeasible, {}, 0.0, {}};

    const StandardForm sf = to_standard(lp);
    Tableau tab(sf);

    LpSolution sol;
    if (!tab.run_phase1()) {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    tab.run_phase2();
    if (tab.unbounded()) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    const std::vector<double> y = tab.primal();
    sol.status = LpStatus::optimal;
    sol.x.assign(lp.num_vars, 0.0);
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const auto& vm = sf.vars[j];
        sol.x[j] = vm.split ? y[vm.col] - y[vm.neg_col] : vm.sign * y[vm.col] + vm.shift;
    }
    sol.objective_value = tab.objective() + sf.cost_offset;
    // duals for the caller-visible rows only (bound rows dropped)
    const std::vector<double> all_duals = tab.duals();
    sol.duals.assign(all_duals.begin(),
                     all_duals.begin() + static_cast<std::ptrdiff_t>(
                                             lp.eq_matrix.size() + lp.ub_matrix.size()));
    return sol;
}

} // namespace srmdp
