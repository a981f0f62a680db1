#pragma once

#include "srmdp/types.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace srmdp {

struct ModelEnsemble; // posterior.hpp

/// Unique solution v of v = r_pi + gamma * P_pi v, by dense LU.
ValueFunction evaluate_policy(const TabularMdp& mdp, const TransitionModel& model,
                              const Policy& policy);

/// p0^T v of the evaluated policy.
double expected_return(const TabularMdp& mdp, const TransitionModel& model,
                       const Policy& policy);

/// Discounted state-visitation vector h = gamma * P_pi^T h + p0.
/// Sums to 1/(1-gamma).
std::vector<double> occupancy_frequency(const TabularMdp& mdp, const TransitionModel& model,
                                        const Policy& policy);

/// Standard Bellman-optimality value iteration; greedy policy ties broken
/// toward the lowest action index.
std::pair<ValueFunction, Policy> value_iteration(const TabularMdp& mdp,
                                                 const TransitionModel& model, double tol,
                                                 std::size_t max_iter);

/// Per-model expected returns of a fixed policy, in ensemble order.
std::vector<double> return_distribution(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                        const Policy& policy);

/// Value iteration on the weight-averaged transition tensor sum_w f_w P^w.
std::pair<ValueFunction, Policy> mean_model_solve(const TabularMdp& mdp,
                                                  const ModelEnsemble& ensemble, double tol,
                                                  std::size_t max_iter);

/// f-weighted average of the ensemble models.
TransitionModel mean_model(const ModelEnsemble& ensemble);

/// Policy-induced transition matrix (S x S, row-major) and one-step reward.
void policy_transition(const TabularMdp& mdp, const TransitionModel& model, const Policy& policy,
                       std::vector<double>& p_pi, std::vector<double>& r_pi);

} // namespace srmdp
