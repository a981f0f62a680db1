#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "srmdp/domains.hpp"
#include "srmdp/mdp.hpp"
#include "srmdp/posterior.hpp"
#include "srmdp/rng.hpp"
#include "srmdp/types.hpp"

namespace srmdp::test {

struct Instance {
    TabularMdp mdp;
    TransitionModel true_model;
    ModelEnsemble ensemble;
};

/// Random MDP plus a posterior ensemble fitted to a logged batch from the
/// true model, i.e. the same pipeline the experiment harness uses.
inline Instance random_instance(std::size_t S, std::size_t A, std::size_t N,
                                std::uint64_t seed, std::size_t batch_size = 300) {
    Instance inst;
    auto [mdp, model] = random_dirichlet_mdp(S, A, seed);
    inst.mdp = std::move(mdp);
    inst.true_model = std::move(model);
    const Policy behavior = uniform_random_policy(S, A);
    const TransitionBatch batch =
        generate_batch(inst.true_model, behavior, batch_size, inst.mdp.p0, seed + 1);
    const DirichletPosterior posterior = dirichlet_from_batch(batch, 1.0);
    inst.ensemble = sample_ensemble(posterior, N, seed + 2);
    return inst;
}

/// Random stochastic policy, one Dirichlet(1) row per state.
inline Policy random_policy(std::size_t S, std::size_t A, Rng& rng) {
    std::vector<double> probs(S * A);
    const std::vector<double> ones(A, 1.0);
    for (std::size_t s = 0; s < S; ++s) rng.dirichlet(ones.data(), probs.data() + s * A, A);
    return Policy::randomized(std::move(probs), S, A);
}

/// Random deterministic policy.
inline Policy random_det_policy(std::size_t S, std::size_t A, Rng& rng) {
    std::vector<std::size_t> actions(S);
    for (auto& a : actions) a = rng.next_u64() % A;
    return Policy::deterministic(std::move(actions), A);
}

} // namespace srmdp::test
