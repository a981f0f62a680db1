#include "srmdp/posterior.hpp"

#include "srmdp/domains.hpp"
#include "srmdp/rng.hpp"

#include <cmath>

namespace srmdp {

void TransitionBatch::add(std::size_t s, std::size_t a, std::size_t sp) {
    if (s >= num_states || a >= num_actions || sp >= num_states)
        throw std::invalid_argument("batch sample index out of range");
    samples.emplace_back(s, a, sp);
    ++counts[(s * num_actions + a) * num_states + sp];
}

void ModelEnsemble::validate() const {
    if (models.empty()) throw std::invalid_argument("ensemble has no models");
    if (weights.size() != models.size())
        throw std::invalid_argument("ensemble weight count mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("ensemble weight is negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ensemble weights do not sum to 1");
    for (const auto& model : models)
        if (model.num_states != models[0].num_states ||
            model.num_actions != models[0].num_actions)
            throw std::invalid_argument("ensemble models have mixed shapes");
}

DirichletPosterior dirichlet_from_batch(const TransitionBatch& batch,
                                        double prior_concentration) {
    if (!(prior_concentration > 0.0))
        throw std::invalid_argument("prior concentration must be positive");
    DirichletPosterior posterior;
    posterior.num_states = batch.num_states;
    posterior.num_actions = batch.num_actions;
    posterior.alpha.resize(batch.counts.size());
    for (std::size_t i = 0; i < batch.counts.size(); ++i)
        posterior.alpha[i] = prior_concentration + static_cast<double>(batch.counts[i]);
    return posterior;
}

ModelEnsemble sample_ensemble(const DirichletPosterior& posterior, std::size_t n_models,
                              std::uint64_t seed) {
    if (n_models == 0) throw std::invalid_argument("ensemble size must be positive");
    const std::size_t S = posterior.num_states, A = posterior.num_actions;
    ModelEnsemble ensemble;
    ensemble.weights.assign(n_models, 1.0 / static_cast<double>(n_models));
    ensemble.models.reserve(n_models);
    for (std::size_t w = 0; w < n_models; ++w) {
        TransitionModel model(S, A);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a) {
                Rng rng = Rng::stream(seed, std::uint64_t{10}, w, s, a);
                rng.dirichlet(posterior.row(s, a), model.row(s, a), S);
            }
        model.validate();
        ensemble.models.push_back(std::move(model));
    }
    return ensemble;
}

GammaPosterior gamma_poisson_from_demands(const std::vector<std::uint64_t>& demands,
                                          double prior_shape, double prior_scale) {
    if (!(prior_shape > 0.0) || !(prior_scale > 0.0))
        throw std::invalid_argument("gamma prior parameters must be positive");
    GammaPosterior posterior;
    posterior.shape = prior_shape;
    posterior.rate = 1.0 / prior_scale;
    for (std::uint64_t d : demands) posterior.shape += static_cast<double>(d);
    posterior.rate += static_cast<double>(demands.size());
    return posterior;
}

ModelEnsemble sample_demand_ensemble(const GammaPosterior& posterior, std::size_t n_models,
                                     std::uint64_t seed, const InventorySpec& spec) {
    if (n_models == 0) throw std::invalid_argument("ensemble size must be positive");
    ModelEnsemble ensemble;
    ensemble.weights.assign(n_models, 1.0 / static_cast<double>(n_models));
    ensemble.models.reserve(n_models);
    for (std::size_t w = 0; w < n_models; ++w) {
        Rng rng = Rng::stream(seed, std::uint64_t{11}, w);
        const double rate = rng.gamma(posterior.shape) / posterior.rate;
        ensemble.models.push_back(inventory(spec, rate).second);
    }
    return ensemble;
}

TransitionModel empirical_model(const TransitionBatch& batch, EmpiricalFallback fallback) {
    const std::size_t S = batch.num_states, A = batch.num_actions;
    TransitionModel model(S, A);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            std::uint64_t total = 0;
            for (std::size_t sp = 0; sp < S; ++sp) total += batch.count(s, a, sp);
            double* row = model.row(s, a);
            if (total > 0) {
                for (std::size_t sp = 0; sp < S; ++sp)
                    row[sp] = static_cast<double>(batch.count(s, a, sp)) /
                              static_cast<double>(total);
            } else if (fallback == EmpiricalFallback::uniform) {
                for (std::size_t sp = 0; sp < S; ++sp) row[sp] = 1.0 / static_cast<double>(S);
            } else {
                row[s] = 1.0;
            }
        }
    model.validate();
    return model;
}

} // namespace srmdp
