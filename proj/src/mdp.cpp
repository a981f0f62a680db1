#include "srmdp/mdp.hpp"

#include "srmdp/posterior.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace srmdp {

void policy_transition(const TabularMdp& mdp, const TransitionModel& model, const Policy& policy,
                       std::vector<double>& p_pi, std::vector<double>& r_pi) {
    const std::size_t S = mdp.num_states, A = mdp.num_actions;
    p_pi.assign(S * S, 0.0);
    r_pi.assign(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            const double w = policy.prob(s, a);
            if (w == 0.0) continue;
            const double* p = model.row(s, a);
            const double* r = mdp.reward_row(s, a);
            for (std::size_t sp = 0; sp < S; ++sp) {
                p_pi[s * S + sp] += w * p[sp];
                r_pi[s] += w * p[sp] * r[sp];
            }
        }
    }
}

ValueFunction evaluate_policy(const TabularMdp& mdp, const TransitionModel& model,
                              const Policy& policy) {
    check_dims(mdp, model);
    check_dims(mdp, policy);
    const std::size_t S = mdp.num_states;
    std::vector<double> p_pi, r_pi;
    policy_transition(mdp, model, policy, p_pi, r_pi);

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t sp = 0; sp < S; ++sp) system(s, sp) -= mdp.discount * p_pi[s * S + sp];
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r_pi.data(), S);
    Eigen::VectorXd v = system.partialPivLu().solve(rhs);

    const double residual = (system * v - rhs).lpNorm<Eigen::Infinity>();
    if (!v.allFinite() || residual > 1e-8)
        throw NumericError("policy evaluation solve failed, residual " + std::to_string(residual));

    ValueFunction out(S);
    for (std::size_t s = 0; s < S; ++s) out[s] = v(s);
    return out;
}

double expected_return(const TabularMdp& mdp, const TransitionModel& model, const Policy& policy) {
    const ValueFunction v = evaluate_policy(mdp, model, policy);
    double total = 0.0;
    for (std::size_t s = 0; s < mdp.num_states; ++s) total += mdp.p0[s] * v[s];
    return total;
}

std::vector<double> occupancy_frequency(const TabularMdp& mdp, const TransitionModel& model,
                                        const Policy& policy) {
    check_dims(mdp, model);
    check_dims(mdp, policy);
    const std::size_t S = mdp.num_states;
    std::vector<double> p_pi, r_pi;
    policy_transition(mdp, model, policy, p_pi, r_pi);

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t sp = 0; sp < S; ++sp) system(sp, s) -= mdp.discount * p_pi[s * S + sp];
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(mdp.p0.data(), S);
    Eigen::VectorXd h = system.partialPivLu().solve(rhs);
    if (!h.allFinite()) throw NumericError("occupancy frequency solve failed");

    std::vector<double> out(S);
    for (std::size_t s = 0; s < S; ++s) out[s] = std::max(h(s), 0.0);
    return out;
}

std::pair<ValueFunction, Policy> value_iteration(const TabularMdp& mdp,
                                                 const TransitionModel& model, double tol,
                                                 std::size_t max_iter) {
    check_dims(mdp, model);
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const std::size_t S = mdp.num_states, A = mdp.num_actions;

    ValueFunction v(S), next(S);
    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t s = 0; s < S; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < A; ++a) {
                const double* p = model.row(s, a);
                const double* r = mdp.reward_row(s, a);
                double q = 0.0;
                for (std::size_t sp = 0; sp < S; ++sp)
                    q += p[sp] * (r[sp] + mdp.discount * v[sp]);
                best = std::max(best, q);
            }
            next[s] = best;
        }
        residual = 0.0;
        for (std::size_t s = 0; s < S; ++s) residual = std::max(residual, std::abs(next[s] - v[s]));
        v.values.swap(next.values);
        if (residual <= tol) {
            std::vector<std::size_t> actions(S, 0);
            for (std::size_t s = 0; s < S; ++s) {
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t a = 0; a < A; ++a) {
                    const double* p = model.row(s, a);
                    const double* r = mdp.reward_row(s, a);
                    double q = 0.0;
                    for (std::size_t sp = 0; sp < S; ++sp)
                        q += p[sp] * (r[sp] + mdp.discount * v[sp]);
                    if (q > best) {
                        best = q;
                        actions[s] = a;
                    }
                }
            }
            return {v, Policy::deterministic(std::move(actions), A)};
        }
    }
    throw ConvergenceError("value iteration did not converge", residual);
}

std::vector<double> return_distribution(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                        const Policy& policy) {
    if (ensemble.size() == 0) throw std::invalid_argument("ensemble is empty");
    std::vector<double> out(ensemble.size());
    for (std::size_t w = 0; w < ensemble.size(); ++w)
        out[w] = expected_return(mdp, ensemble.models[w], policy);
    return out;
}

TransitionModel mean_model(const ModelEnsemble& ensemble) {
    if (ensemble.size() == 0) throw std::invalid_argument("ensemble is empty");
    TransitionModel avg(ensemble.models[0].num_states, ensemble.models[0].num_actions);
    for (std::size_t w = 0; w < ensemble.size(); ++w) {
        const double f = ensemble.weights[w];
        const auto& model = ensemble.models[w];
        for (std::size_t i = 0; i < avg.probs.size(); ++i) avg.probs[i] += f * model.probs[i];
    }
    return avg;
}

std::pair<ValueFunction, Policy> mean_model_solve(const TabularMdp& mdp,
                                                  const ModelEnsemble& ensemble, double tol,
                                                  std::size_t max_iter) {
    return value_iteration(mdp, mean_model(ensemble), tol, max_iter);
}

} // namespace srmdp
