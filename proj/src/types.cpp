#include "srmdp/types.hpp"

#include <cmath>
#include <cstdlib>

namespace srmdp {

namespace {
constexpr double kRowTol = 1e-10;       // stochasticity validation
constexpr double kRenormTol = 1e-8;     // drift beyond this is a data error
} // namespace

void TransitionModel::validate() {
    for (std::size_t s = 0; s < num_states; ++s) {
        for (std::size_t a = 0; a < num_actions; ++a) {
            double* p = row(s, a);
            double total = 0.0;
            for (std::size_t sp = 0; sp < num_states; ++sp) {
                if (p[sp] < 0.0 || !std::isfinite(p[sp]))
                    throw std::invalid_argument("transition row (" + std::to_string(s) + "," +
                                                std::to_string(a) + ") has an invalid entry");
                total += p[sp];
            }
            const double drift = std::abs(total - 1.0);
            if (drift > kRenormTol)
                throw std::invalid_argument("transition row (" + std::to_string(s) + "," +
                                            std::to_string(a) + ") sums to " +
                                            std::to_string(total));
            if (drift > kRowTol)
                for (std::size_t sp = 0; sp < num_states; ++sp) p[sp] /= total;
        }
    }
}

void TabularMdp::compute_r_max() {
    double m = 0.0;
    for (double v : reward) m = std::max(m, std::abs(v));
    r_max = m;
}

void TabularMdp::validate() const {
    if (num_states == 0 || num_actions == 0)
        throw std::invalid_argument("MDP must have at least one state and action");
    if (!(discount > 0.0 && discount < 1.0))
        throw std::invalid_argument("discount must lie in (0,1)");
    double total = 0.0;
    for (double p : p0) {
        if (p < 0.0) throw std::invalid_argument("initial distribution has a negative entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("initial distribution does not sum to 1");
    for (double v : reward)
        if (std::abs(v) > r_max + 1e-12)
            throw std::invalid_argument("reward tensor exceeds r_max");
}

Policy Policy::deterministic(std::vector<std::size_t> actions, std::size_t num_actions) {
    Policy p;
    p.kind = PolicyKind::deterministic;
    p.num_states = actions.size();
    p.num_actions = num_actions;
    p.det_actions = std::move(actions);
    p.validate();
    return p;
}

Policy Policy::randomized(std::vector<double> probs, std::size_t S, std::size_t A) {
    Policy p;
    p.kind = PolicyKind::randomized;
    p.num_states = S;
    p.num_actions = A;
    p.action_probs = std::move(probs);
    p.validate();
    return p;
}

void Policy::validate() const {
    if (kind == PolicyKind::deterministic) {
        for (std::size_t a : det_actions)
            if (a >= num_actions) throw std::invalid_argument("policy action out of range");
        return;
    }
    if (action_probs.size() != num_states * num_actions)
        throw std::invalid_argument("randomized policy has wrong shape");
    for (std::size_t s = 0; s < num_states; ++s) {
        double total = 0.0;
        for (std::size_t a = 0; a < num_actions; ++a) {
            const double p = action_probs[s * num_actions + a];
            if (p < 0.0 || !std::isfinite(p))
                throw std::invalid_argument("randomized policy has an invalid entry");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("randomized policy row " + std::to_string(s) +
                                        " does not sum to 1");
    }
}

} // namespace srmdp
