#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace srmdp {

/// Thrown when an iterative method fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

/// Thrown on solver breakdown (singular system, simplex cycling guard, ...).
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an input exceeds a desk-scale resource guard.
class UnsupportedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transition probabilities P(s,a,s'), stored dense row-major.
/// Every (s,a) row is a distribution over next states.
struct TransitionModel {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<double> probs; // S*A*S, index (s*A + a)*S + sp

    TransitionModel() = default;
    TransitionModel(std::size_t S, std::size_t A)
        : num_states(S), num_actions(A), probs(S * A * S, 0.0) {}

    double& operator()(std::size_t s, std::size_t a, std::size_t sp) {
        return probs[(s * num_actions + a) * num_states + sp];
    }
    double operator()(std::size_t s, std::size_t a, std::size_t sp) const {
        return probs[(s * num_actions + a) * num_states + sp];
    }
    const double* row(std::size_t s, std::size_t a) const {
        return probs.data() + (s * num_actions + a) * num_states;
    }
    double* row(std::size_t s, std::size_t a) {
        return probs.data() + (s * num_actions + a) * num_states;
    }

    /// Checks that every row is a probability vector. Rows with drift up to
    /// 1e-8 are renormalized in place; larger drift throws.
    void validate();
};

/// Fixed, known part of the decision problem: rewards, discount, initial
/// distribution. Transition probabilities live in TransitionModel.
struct TabularMdp {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<double> reward; // S*A*S, same layout as TransitionModel
    double discount = 0.0;
    std::vector<double> p0;
    double r_max = 0.0;

    TabularMdp() = default;
    TabularMdp(std::size_t S, std::size_t A, double gamma)
        : num_states(S), num_actions(A), reward(S * A * S, 0.0), discount(gamma),
          p0(S, 1.0 / static_cast<double>(S)) {}

    double& r(std::size_t s, std::size_t a, std::size_t sp) {
        return reward[(s * num_actions + a) * num_states + sp];
    }
    double r(std::size_t s, std::size_t a, std::size_t sp) const {
        return reward[(s * num_actions + a) * num_states + sp];
    }
    const double* reward_row(std::size_t s, std::size_t a) const {
        return reward.data() + (s * num_actions + a) * num_states;
    }

    /// Sets r_max to max |r| over the tensor.
    void compute_r_max();
    void validate() const;
};

enum class PolicyKind { deterministic, randomized };

struct Policy {
    PolicyKind kind = PolicyKind::deterministic;
    std::vector<std::size_t> det_actions;   // length S, deterministic kind
    std::vector<double> action_probs;       // S*A row-major, randomized kind
    std::size_t num_states = 0;
    std::size_t num_actions = 0;

    static Policy deterministic(std::vector<std::size_t> actions, std::size_t num_actions);
    static Policy randomized(std::vector<double> probs, std::size_t S, std::size_t A);

    /// Probability of action a in state s (works for both kinds).
    double prob(std::size_t s, std::size_t a) const {
        if (kind == PolicyKind::deterministic) return det_actions[s] == a ? 1.0 : 0.0;
        return action_probs[s * num_actions + a];
    }
    void validate() const;
};

struct ValueFunction {
    std::vector<double> values;

    ValueFunction() = default;
    explicit ValueFunction(std::size_t S, double init = 0.0) : values(S, init) {}
    explicit ValueFunction(std::vector<double> v) : values(std::move(v)) {}
    double operator[](std::size_t s) const { return values[s]; }
    double& operator[](std::size_t s) { return values[s]; }
    std::size_t size() const { return values.size(); }
};

inline void check_dims(const TabularMdp& mdp, const TransitionModel& model) {
    if (mdp.num_states != model.num_states || mdp.num_actions != model.num_actions)
        throw std::invalid_argument("transition model dimensions do not match MDP");
}

inline void check_dims(const TabularMdp& mdp, const Policy& policy) {
    if (policy.num_states != mdp.num_states || policy.num_actions != mdp.num_actions)
        throw std::invalid_argument("policy dimensions do not match MDP");
}

} // namespace srmdp
