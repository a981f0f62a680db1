#include "srmdp/domains.hpp"

#include "srmdp/rng.hpp"

#include <cmath>

namespace srmdp {

std::pair<TabularMdp, TransitionModel> riverswim(const RiverswimSpec& spec) {
    const std::size_t S = spec.num_states, A = 2;
    TabularMdp mdp(S, A, spec.gamma);
    TransitionModel model(S, A);

    for (std::size_t s = 0; s < S; ++s) {
        // action 0: swim with the current, one state down
        const std::size_t down = s == 0 ? 0 : s - 1;
        model(s, 0, down) = 1.0;

        // action 1: swim against the current; boundary mass folds into stay
        double stay = spec.up_stay;
        if (s + 1 < S)
            model(s, 1, s + 1) = spec.up_advance;
        else
            stay += spec.up_advance;
        if (s > 0)
            model(s, 1, s - 1) = spec.up_back;
        else
            stay += spec.up_back;
        model(s, 1, s) += stay;

        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t sp = 0; sp < S; ++sp) {
                double r = 0.0;
                if (sp == s + 1) r += spec.step_reward;
                if (sp == S - 1) r += spec.goal_reward;
                mdp.r(s, a, sp) = r;
            }
    }
    model.validate();
    mdp.compute_r_max();
    return {std::move(mdp), std::move(model)};
}

namespace {

// Poisson pmf truncated at demand_max with the tail folded into the last atom.
std::vector<double> truncated_poisson(double rate, std::size_t demand_max) {
    std::vector<double> pmf(demand_max + 1, 0.0);
    double p = std::exp(-rate), cumulative = 0.0;
    for (std::size_t d = 0; d < demand_max; ++d) {
        pmf[d] = p;
        cumulative += p;
        p *= rate / static_cast<double>(d + 1);
    }
    pmf[demand_max] = std::max(0.0, 1.0 - cumulative);
    return pmf;
}

} // namespace

std::pair<TabularMdp, TransitionModel> inventory(const InventorySpec& spec, double demand_rate) {
    if (!(demand_rate > 0.0)) throw std::invalid_argument("demand rate must be positive");
    const std::size_t S = spec.capacity + 1;
    const std::size_t A = spec.max_order + 1;
    TabularMdp mdp(S, A, spec.gamma);
    TransitionModel model(S, A);
    const std::vector<double> pmf = truncated_poisson(demand_rate, spec.demand_max);
    const double unit_cost = spec.purchase_price + spec.variable_cost;

    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
            const std::size_t order = std::min(a, spec.capacity - s);
            const std::size_t after = s + order;
            for (std::size_t d = 0; d < pmf.size(); ++d) {
                const std::size_t sold = std::min(d, after);
                model(s, a, after - sold) += pmf[d];
            }
            // reward depends on s' only: sold = after - s'
            for (std::size_t sp = 0; sp <= after; ++sp) {
                const double sold = static_cast<double>(after - sp);
                mdp.r(s, a, sp) = spec.sale_price * sold -
                                  unit_cost * static_cast<double>(order) -
                                  spec.holding_cost * static_cast<double>(sp);
            }
        }
    }
    model.validate();
    mdp.compute_r_max();
    return {std::move(mdp), std::move(model)};
}

std::pair<TabularMdp, TransitionModel> random_dirichlet_mdp(std::size_t num_states,
                                                            std::size_t num_actions,
                                                            std::uint64_t seed) {
    if (num_states == 0 || num_actions == 0)
        throw std::invalid_argument("state and action counts must be positive");
    TabularMdp mdp(num_states, num_actions, 0.9);
    TransitionModel model(num_states, num_actions);
    const std::vector<double> ones(num_states, 1.0);
    for (std::size_t s = 0; s < num_states; ++s)
        for (std::size_t a = 0; a < num_actions; ++a) {
            Rng rng = Rng::stream(seed, std::uint64_t{1}, s, a);
            rng.dirichlet(ones.data(), model.row(s, a), num_states);
            for (std::size_t sp = 0; sp < num_states; ++sp) mdp.r(s, a, sp) = rng.uniform();
        }
    model.validate();
    mdp.compute_r_max();
    return {std::move(mdp), std::move(model)};
}

Policy uniform_random_policy(std::size_t num_states, std::size_t num_actions) {
    return Policy::randomized(
        std::vector<double>(num_states * num_actions, 1.0 / static_cast<double>(num_actions)),
        num_states, num_actions);
}

TransitionBatch generate_batch(const TransitionModel& model, const Policy& behavior,
                               std::size_t n_samples, const std::vector<double>& p0,
                               std::uint64_t seed, std::size_t episode_length) {
    if (n_samples == 0) throw std::invalid_argument("batch size must be positive");
    const std::size_t S = model.num_states, A = model.num_actions;
    TransitionBatch batch(S, A);
    Rng rng = Rng::stream(seed, std::uint64_t{2});

    std::size_t s = rng.categorical(p0.data(), S);
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (i > 0 && i % episode_length == 0) s = rng.categorical(p0.data(), S);
        std::size_t a;
        if (behavior.kind == PolicyKind::deterministic) {
            a = behavior.det_actions[s];
        } else {
            a = rng.categorical(behavior.action_probs.data() + s * A, A);
        }
        const std::size_t sp = rng.categorical(model.row(s, a), S);
        batch.add(s, a, sp);
        s = sp;
    }
    return batch;
}

} // namespace srmdp
