#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srmdp/posterior.hpp"
#include "srmdp/risk.hpp"
#include "srmdp/types.hpp"

namespace srmdp {

struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // numerical/grid slack added to rhs before comparing
    bool pass = false;
};

struct BoundReport {
    double epsilon1 = 0.0;
    double epsilon2 = 0.0;
    std::vector<BoundCheck> checks;
};

// max pairwise L1 distance between per-model discounted occupancies of a policy
double epsilon1(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy);

// dynamic-objective maximizer over deterministic policies, via the xi grid
struct DynamicOptimum {
    Policy policy;
    double value = 0.0;
    std::vector<double> xi;
    ValueFunction v_star;
    double grid_error = 0.0;
};

DynamicOptimum dynamic_optimum(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                               const SoftRobustParams& params, std::size_t grid_resolution);

// rectangularization error: max over (s,a) of the smallest one-step excess of
// the v_star_D lookahead over v_star_D itself, minimizing over the xi box
double epsilon2(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                const SoftRobustParams& params, const ValueFunction& v_star_D);

BoundCheck check_theorem2(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                          const Policy& policy, const SoftRobustParams& params,
                          std::size_t grid_resolution);

BoundReport check_corollary1(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                             const SoftRobustParams& params, std::size_t grid_resolution,
                             std::uint64_t seed = 0);

// L1 gap between the occupancy of a beta-mixed model and the beta-mixture of
// per-model occupancies
double occupancy_convexity_gap(const TabularMdp& mdp,
                               const std::vector<TransitionModel>& models,
                               const std::vector<double>& beta, const Policy& policy);

} // namespace srmdp
