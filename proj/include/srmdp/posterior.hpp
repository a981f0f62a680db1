#pragma once

#include "srmdp/types.hpp"

#include <cstdint>
#include <cstddef>
#include <tuple>
#include <vector>

namespace srmdp {

struct InventorySpec; // domains.hpp

/// Logged (s, a, s') transitions plus the derived count tensor.
struct TransitionBatch {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> samples;
    std::vector<std::uint64_t> counts; // S*A*S

    TransitionBatch() = default;
    TransitionBatch(std::size_t S, std::size_t A)
        : num_states(S), num_actions(A), counts(S * A * S, 0) {}

    void add(std::size_t s, std::size_t a, std::size_t sp);
    std::uint64_t count(std::size_t s, std::size_t a, std::size_t sp) const {
        return counts[(s * num_actions + a) * num_states + sp];
    }
};

/// Finite posterior approximation: N sampled transition models with weights.
struct ModelEnsemble {
    std::vector<TransitionModel> models;
    std::vector<double> weights;

    std::size_t size() const { return models.size(); }
    void validate() const;
};

/// Per-(s,a) Dirichlet concentration parameters over next states.
struct DirichletPosterior {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<double> alpha; // S*A*S, all > 0

    const double* row(std::size_t s, std::size_t a) const {
        return alpha.data() + (s * num_actions + a) * num_states;
    }
};

/// Gamma posterior over a Poisson demand rate.
struct GammaPosterior {
    double shape = 0.0;
    double rate = 0.0;

    double mean() const { return shape / rate; }
};

/// Conjugate update: alpha(s,a,.) = prior + counts(s,a,.).
DirichletPosterior dirichlet_from_batch(const TransitionBatch& batch, double prior_concentration);

/// N models with each (s,a) row drawn Dirichlet(alpha(s,a,.)) from an
/// independent (seed, s, a, model) stream; uniform weights.
ModelEnsemble sample_ensemble(const DirichletPosterior& posterior, std::size_t n_models,
                              std::uint64_t seed);

/// shape += sum(demands), rate += number of demands.
GammaPosterior gamma_poisson_from_demands(const std::vector<std::uint64_t>& demands,
                                          double prior_shape, double prior_scale);

/// Samples demand rates from the posterior and builds an inventory transition
/// model for each; uniform weights.
ModelEnsemble sample_demand_ensemble(const GammaPosterior& posterior, std::size_t n_models,
                                     std::uint64_t seed, const InventorySpec& spec);

enum class EmpiricalFallback { uniform, self_loop };

/// Row-normalized counts; unobserved (s,a) rows use the fallback.
TransitionModel empirical_model(const TransitionBatch& batch, EmpiricalFallback fallback);

} // namespace srmdp
