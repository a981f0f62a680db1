#pragma once

#include "srmdp/posterior.hpp"
#include "srmdp/types.hpp"

#include <cstdint>
#include <utility>

namespace srmdp {

/// Inventory control with Poisson demand; all monetary constants per unit.
/// Backlogging is disabled: unmet demand is lost.
struct InventorySpec {
    std::size_t capacity = 50;
    std::size_t max_order = 40;
    std::size_t demand_max = 50;
    double variable_cost = 2.49;
    double purchase_price = 3.99;
    double holding_cost = 0.1;
    double backlog_cost = 0.15; // unused, backlogging disabled
    double sale_price = 4.99;
    double gamma = 0.99;

    /// Capacity-reduced variant for solvers that only handle small S*A.
    static InventorySpec small() {
        InventorySpec spec;
        spec.capacity = 10;
        spec.max_order = 8;
        spec.demand_max = 10;
        return spec;
    }
};

struct RiverswimSpec {
    std::size_t num_states = 20;
    double goal_reward = 100.0;
    double step_reward = 5.0;
    double gamma = 0.95;
    double up_advance = 0.2;
    double up_back = 0.5;
    double up_stay = 0.3;
};

/// Chain MDP: action 0 drifts down deterministically, action 1 swims up
/// with probabilities (advance 0.2, back 0.5, stay 0.3). Out-of-range mass
/// folds into staying. Rewards: +step on each forward move, +goal on every
/// transition that lands in the last state. Uniform p0.
std::pair<TabularMdp, TransitionModel> riverswim(const RiverswimSpec& spec = {});

/// States are stock levels 0..capacity; action a orders min(a, capacity-stock)
/// units. Demand is Poisson(demand_rate) truncated at demand_max with the tail
/// folded into demand_max. Reward = sales - acquisition - holding.
std::pair<TabularMdp, TransitionModel> inventory(const InventorySpec& spec, double demand_rate);

/// Random true model: each transition row ~ Dirichlet(1,...,1), rewards
/// uniform on [0,1] per (s,a,s'); gamma 0.9, uniform p0.
std::pair<TabularMdp, TransitionModel> random_dirichlet_mdp(std::size_t num_states,
                                                            std::size_t num_actions,
                                                            std::uint64_t seed);

/// Single trajectory of n (s,a,s') triples under the behavior policy,
/// restarting from p0 every episode_length steps.
TransitionBatch generate_batch(const TransitionModel& model, const Policy& behavior,
                               std::size_t n_samples, const std::vector<double>& p0,
                               std::uint64_t seed, std::size_t episode_length = 100);

/// Uniform-random behavior policy over A actions.
Policy uniform_random_policy(std::size_t num_states, std::size_t num_actions);

} // namespace srmdp
