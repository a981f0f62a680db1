#include "srmdp/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srmdp/lp.hpp"

namespace srmdp {

namespace {

constexpr double kDecisionFloor = 1e-10;

std::vector<double> clean_decision(std::vector<double> d) {
    double total = 0.0;
    for (double& x : d) {
        if (x < kDecisionFloor) x = 0.0;
        total += x;
    }
    if (total <= 0.0) throw NumericError("degenerate decision rule from state LP");
    for (double& x : d) x /= total;
    return d;
}

std::vector<double> mixture_q(const std::vector<std::vector<double>>& q,
                              const std::vector<double>& d) {
    const std::size_t num_models = q[0].size();
    std::vector<double> qd(num_models, 0.0);
    for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t w = 0; w < num_models; ++w) qd[w] += d[a] * q[a][w];
    return qd;
}

BellmanResult greedy_on_scores(const std::vector<std::vector<double>>& q,
                               const std::vector<double>& scores,
                               const std::vector<double>& weights,
                               const SoftRobustParams& params) {
    std::size_t best_a = 0;
    for (std::size_t a = 1; a < scores.size(); ++a)
        if (scores[a] > scores[best_a]) best_a = a;
    BellmanResult result;
    result.value = scores[best_a];
    result.decision.assign(q.size(), 0.0);
    result.decision[best_a] = 1.0;
    result.adversarial_xi =
        xi_minimize(q[best_a], xi_box_unbounded(weights, params)).second;
    return result;
}

BellmanResult s_rect_lp(const std::vector<std::vector<double>>& q,
                        const std::vector<double>& weights, const SoftRobustParams& params) {
    const std::size_t num_actions = q.size();
    const std::size_t num_models = weights.size();
    const double inf = std::numeric_limits<double>::infinity();

    LinearProgram lp;
    BellmanResult result;
    if (params.alpha >= 1.0) {
        // essential infimum: maximize (1-l) sum_aw d_a f_w q + l*t,
        // t <= sum_a d_a q[a][w] for every model
        lp.num_vars = num_actions + 1;
        lp.objective.assign(lp.num_vars, 0.0);
        lp.var_lower.assign(lp.num_vars, 0.0);
        lp.var_upper.assign(lp.num_vars, kLpInf);
        lp.var_lower[num_actions] = -inf;
        for (std::size_t a = 0; a < num_actions; ++a)
            for (std::size_t w = 0; w < num_models; ++w)
                lp.objective[a] += (1.0 - params.lambda) * weights[w] * q[a][w];
        lp.objective[num_actions] = params.lambda;

        std::vector<double> simplex_row(lp.num_vars, 0.0);
        for (std::size_t a = 0; a < num_actions; ++a) simplex_row[a] = 1.0;
        lp.add_eq(simplex_row, 1.0);
        for (std::size_t w = 0; w < num_models; ++w) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t a = 0; a < num_actions; ++a) row[a] = -q[a][w];
            row[num_actions] = 1.0;
            lp.add_ub(row, 0.0);
        }
        const LpSolution sol = solve(lp);
        if (sol.status != LpStatus::optimal) throw NumericError("state LP did not solve");
        result.value = sol.objective_value;
        result.decision =
            clean_decision({sol.x.begin(), sol.x.begin() + static_cast<long>(num_actions)});
    } else {
        // vars: d_0..d_{A-1}, b, y_0..y_{N-1}
        lp.num_vars = num_actions + 1 + num_models;
        lp.objective.assign(lp.num_vars, 0.0);
        lp.var_lower.assign(lp.num_vars, 0.0);
        lp.var_upper.assign(lp.num_vars, kLpInf);
        lp.var_lower[num_actions] = -inf;
        const double tail = 1.0 / (1.0 - params.alpha);
        for (std::size_t a = 0; a < num_actions; ++a)
            for (std::size_t w = 0; w < num_models; ++w)
                lp.objective[a] += (1.0 - params.lambda) * weights[w] * q[a][w];
        lp.objective[num_actions] = params.lambda;
        for (std::size_t w = 0; w < num_models; ++w)
            lp.objective[num_actions + 1 + w] = -params.lambda * tail * weights[w];

        std::vector<double> simplex_row(lp.num_vars, 0.0);
        for (std::size_t a = 0; a < num_actions; ++a) simplex_row[a] = 1.0;
        lp.add_eq(simplex_row, 1.0);
        for (std::size_t w = 0; w < num_models; ++w) {
            // b - sum_a d_a q[a][w] - y_w <= 0
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t a = 0; a < num_actions; ++a) row[a] = -q[a][w];
            row[num_actions] = 1.0;
            row[num_actions + 1 + w] = -1.0;
            lp.add_ub(row, 0.0);
        }
        const LpSolution sol = solve(lp);
        if (sol.status != LpStatus::optimal) throw NumericError("state LP did not solve");
        result.value = sol.objective_value;
        result.decision =
            clean_decision({sol.x.begin(), sol.x.begin() + static_cast<long>(num_actions)});
    }
    result.adversarial_xi =
        xi_minimize(mixture_q(q, result.decision), xi_box_unbounded(weights, params)).second;
    return result;
}

void check_q(const std::vector<std::vector<double>>& q, const std::vector<double>& weights) {
    if (q.empty()) throw std::invalid_argument("no actions in state update");
    for (const auto& row : q)
        if (row.size() != weights.size())
            throw std::invalid_argument("q/weights length mismatch");
}

} // namespace

BellmanResult s_rect_bellman_state(const std::vector<std::vector<double>>& q,
                                   const std::vector<double>& weights,
                                   const SoftRobustParams& params) {
    params.validate();
    check_q(q, weights);
    if (params.lambda == 0.0 || weights.size() == 1) {
        std::vector<double> scores(q.size(), 0.0);
        for (std::size_t a = 0; a < q.size(); ++a)
            for (std::size_t w = 0; w < weights.size(); ++w)
                scores[a] += weights[w] * q[a][w];
        return greedy_on_scores(q, scores, weights, params);
    }
    return s_rect_lp(q, weights, params);
}

BellmanResult sa_rect_bellman_state(const std::vector<std::vector<double>>& q,
                                    const std::vector<double>& weights,
                                    const SoftRobustParams& params) {
    params.validate();
    check_q(q, weights);
    std::vector<double> scores(q.size());
    for (std::size_t a = 0; a < q.size(); ++a)
        scores[a] = soft_robust_combine(q[a], weights, params);
    return greedy_on_scores(q, scores, weights, params);
}

namespace {

std::vector<std::vector<double>> lookahead(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                           std::size_t s, const std::vector<double>& v) {
    const std::size_t S = mdp.num_states, A = mdp.num_actions, N = ensemble.size();
    std::vector<std::vector<double>> q(A, std::vector<double>(N, 0.0));
    for (std::size_t a = 0; a < A; ++a) {
        const double* r = mdp.reward_row(s, a);
        for (std::size_t w = 0; w < N; ++w) {
            const double* p = ensemble.models[w].row(s, a);
            double total = 0.0;
            for (std::size_t sp = 0; sp < S; ++sp)
                total += p[sp] * (r[sp] + mdp.discount * v[sp]);
            q[a][w] = total;
        }
    }
    return q;
}

} // namespace

RobustViResult robust_value_iteration(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                      const SoftRobustParams& params, RectangularMode mode,
                                      double tol, std::size_t max_iter) {
    params.validate();
    ensemble.validate();
    const std::size_t S = mdp.num_states, A = mdp.num_actions;

    RobustViResult out;
    std::vector<double> v(S, 0.0), v_next(S, 0.0);
    std::vector<double> decisions(S * A, 0.0);
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        double residual = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            const auto q = lookahead(mdp, ensemble, s, v);
            const BellmanResult r = mode == RectangularMode::s_rect
                                        ? s_rect_bellman_state(q, ensemble.weights, params)
                                        : sa_rect_bellman_state(q, ensemble.weights, params);
            v_next[s] = r.value;
            std::copy(r.decision.begin(), r.decision.end(), decisions.begin() + s * A);
            residual = std::max(residual, std::abs(v_next[s] - v[s]));
        }
        v.swap(v_next);
        out.iterations = iter;
        out.residual = residual;
        if (residual < tol) {
            out.value = ValueFunction{v};
            out.policy = Policy::randomized(decisions, S, A);
            return out;
        }
    }
    throw ConvergenceError("robust value iteration did not converge", out.residual);
}

ValueFunction robust_policy_evaluation(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                       const Policy& policy, const SoftRobustParams& params,
                                       RectangularMode mode, double tol, std::size_t max_iter) {
    params.validate();
    ensemble.validate();
    const std::size_t S = mdp.num_states, A = mdp.num_actions, N = ensemble.size();
    const XiBox box = xi_box_unbounded(ensemble.weights, params);

    std::vector<double> v(S, 0.0), v_next(S, 0.0);
    double residual = 0.0;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        residual = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            const auto q = lookahead(mdp, ensemble, s, v);
            double value = 0.0;
            if (mode == RectangularMode::s_rect) {
                std::vector<double> q_pi(N, 0.0);
                for (std::size_t a = 0; a < A; ++a) {
                    const double pa = policy.prob(s, a);
                    if (pa == 0.0) continue;
                    for (std::size_t w = 0; w < N; ++w) q_pi[w] += pa * q[a][w];
                }
                value = xi_minimize(q_pi, box).first;
            } else {
                for (std::size_t a = 0; a < A; ++a) {
                    const double pa = policy.prob(s, a);
                    if (pa == 0.0) continue;
                    value += pa * xi_minimize(q[a], box).first;
                }
            }
            v_next[s] = value;
            residual = std::max(residual, std::abs(value - v[s]));
        }
        v.swap(v_next);
        if (residual < tol) return ValueFunction{v};
    }
    throw ConvergenceError("robust policy evaluation did not converge", residual);
}

double rho_R(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy,
             const SoftRobustParams& params, RectangularMode mode, double tol) {
    const ValueFunction v = robust_policy_evaluation(mdp, ensemble, policy, params, mode, tol);
    double total = 0.0;
    for (std::size_t s = 0; s < mdp.num_states; ++s) total += mdp.p0[s] * v.values[s];
    return total;
}

} // namespace srmdp
