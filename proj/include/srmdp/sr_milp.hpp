#pragma once

#include <cstddef>
#include <vector>

#include "srmdp/lp.hpp"
#include "srmdp/posterior.hpp"
#include "srmdp/risk.hpp"
#include "srmdp/types.hpp"

namespace srmdp {

// variables, in order: pi(s,a) binary, u(s,a,w) occupancy, b, y(w)
struct SrMilpModel {
    LinearProgram relaxation; // pi relaxed to [0,1]
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::size_t num_models = 0;
    const TabularMdp* mdp = nullptr;
    const ModelEnsemble* ensemble = nullptr;
    SoftRobustParams params;

    std::size_t pi_index(std::size_t s, std::size_t a) const { return s * num_actions + a; }
    std::size_t u_index(std::size_t s, std::size_t a, std::size_t w) const {
        return num_states * num_actions + (s * num_actions + a) * num_models + w;
    }
    std::size_t b_index() const {
        return num_states * num_actions * (1 + num_models);
    }
    std::size_t y_index(std::size_t w) const { return b_index() + 1 + w; }
};

struct MilpSolution {
    Policy policy;
    double objective = 0.0;
    std::size_t nodes_explored = 0;
    double gap = 0.0;
    bool complete = true;
};

SrMilpModel build_model(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                        const SoftRobustParams& params);

MilpSolution solve_branch_and_bound(const SrMilpModel& model, double gap_tol = 1e-6,
                                    std::size_t node_limit = 100000);

MilpSolution brute_force_deterministic(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                       const SoftRobustParams& params);

} // namespace srmdp
