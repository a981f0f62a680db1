#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "srmdp/posterior.hpp"
#include "srmdp/robust.hpp"
#include "srmdp/types.hpp"

namespace srmdp {

enum class FeatureKind { one_hot, poly2 };

struct FeatureMap {
    FeatureKind kind = FeatureKind::one_hot;
    std::size_t dimension = 0;

    static FeatureMap one_hot(std::size_t num_states) {
        return {FeatureKind::one_hot, num_states};
    }
    // bias, normalized state index, its square
    static FeatureMap poly2() { return {FeatureKind::poly2, 3}; }

    std::vector<double> encode(std::size_t state, std::size_t num_states) const;
};

struct SrviConfig {
    std::size_t episodes_per_iter = 30;
    std::size_t episode_length = 100;
    std::size_t max_iters = 150;
    double tol = 1e-4;
    double ridge = 1e-8;
    std::uint64_t seed = 0;
    // visit every state once per iteration instead of simulating episodes
    bool exhaustive_states = false;
};

struct SrviSolution {
    std::vector<double> weights;
    std::size_t iterations_used = 0;
    double final_residual = 0.0;

    std::vector<double> state_values(const FeatureMap& features, std::size_t num_states) const;
};

std::vector<double> projected_update(const std::vector<std::vector<double>>& features_visited,
                                     const std::vector<double>& targets, double ridge);

BellmanResult extract_decision(const std::vector<double>& weights, const FeatureMap& features,
                               const TabularMdp& mdp, const ModelEnsemble& ensemble,
                               const SoftRobustParams& params, RectangularMode mode,
                               std::size_t state);

SrviSolution srvi_solve(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                        const SoftRobustParams& params, const FeatureMap& features,
                        const SrviConfig& config, RectangularMode mode);

} // namespace srmdp
