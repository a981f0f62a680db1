#pragma once

#include <cstddef>
#include <vector>

#include "srmdp/mdp.hpp"
#include "srmdp/posterior.hpp"
#include "srmdp/risk.hpp"
#include "srmdp/types.hpp"

namespace srmdp {

// rectangularity granularity of the dynamic relaxation
enum class RectangularMode { s_rect, sa_rect };

struct BellmanResult {
    double value = 0.0;
    std::vector<double> decision;       // action distribution at the state
    std::vector<double> adversarial_xi; // worst-case model mixture at the state
};

// single-state soft-robust Bellman update; q[a][w] is the one-step
// lookahead value of action a under model w
BellmanResult s_rect_bellman_state(const std::vector<std::vector<double>>& q,
                                   const std::vector<double>& weights,
                                   const SoftRobustParams& params);
BellmanResult sa_rect_bellman_state(const std::vector<std::vector<double>>& q,
                                    const std::vector<double>& weights,
                                    const SoftRobustParams& params);

struct RobustViResult {
    ValueFunction value;
    Policy policy;
    std::size_t iterations = 0;
    double residual = 0.0;
};

RobustViResult robust_value_iteration(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                      const SoftRobustParams& params, RectangularMode mode,
                                      double tol = 1e-6, std::size_t max_iter = 100000);

// fixed-policy robust evaluation under the same rectangular adversary
ValueFunction robust_policy_evaluation(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                       const Policy& policy, const SoftRobustParams& params,
                                       RectangularMode mode, double tol = 1e-8,
                                       std::size_t max_iter = 100000);

// rectangular robust return of a fixed policy: p0' v_R
double rho_R(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy,
             const SoftRobustParams& params, RectangularMode mode, double tol = 1e-8);

} // namespace srmdp
