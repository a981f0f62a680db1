#include "srmdp/sr_milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace srmdp {

SrMilpModel build_model(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                        const SoftRobustParams& params) {
    params.validate();
    ensemble.validate();
    if (params.alpha >= 1.0)
        throw std::invalid_argument("MILP requires alpha < 1; use the robust modules at alpha = 1");

    SrMilpModel model;
    model.num_states = mdp.num_states;
    model.num_actions = mdp.num_actions;
    model.num_models = ensemble.size();
    model.mdp = &mdp;
    model.ensemble = &ensemble;
    model.params = params;

    const std::size_t S = mdp.num_states, A = mdp.num_actions, N = ensemble.size();
    const std::vector<double>& f = ensemble.weights;
    const double horizon = 1.0 / (1.0 - mdp.discount);
    const double tail = 1.0 / (1.0 - params.alpha);

    LinearProgram& lp = model.relaxation;
    lp.num_vars = S * A * (1 + N) + 1 + N;
    lp.objective.assign(lp.num_vars, 0.0);
    lp.var_lower.assign(lp.num_vars, 0.0);
    lp.var_upper.assign(lp.num_vars, kLpInf);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) lp.var_upper[model.pi_index(s, a)] = 1.0;
    lp.var_lower[model.b_index()] = -std::numeric_limits<double>::infinity();

    // expected immediate reward of (s,a) under each model
    std::vector<double> rp(S * A * N, 0.0);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            const double* r = mdp.reward_row(s, a);
            for (std::size_t w = 0; w < N; ++w) {
                const double* p = ensemble.models[w].row(s, a);
                double total = 0.0;
                for (std::size_t sp = 0; sp < S; ++sp) total += p[sp] * r[sp];
                rp[(s * A + a) * N + w] = total;
            }
        }

    lp.objective[model.b_index()] = params.lambda;
    for (std::size_t w = 0; w < N; ++w)
        lp.objective[model.y_index(w)] = -params.lambda * tail;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t w = 0; w < N; ++w)
                lp.objective[model.u_index(s, a, w)] =
                    (1.0 - params.lambda) * rp[(s * A + a) * N + w];

    // f_w*b - sum_sa u*rp - y_w <= 0: y_w majorizes the CVaR shortfall of model w
    for (std::size_t w = 0; w < N; ++w) {
        std::vector<double> row(lp.num_vars, 0.0);
        row[model.b_index()] = f[w];
        row[model.y_index(w)] = -1.0;
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t a = 0; a < A; ++a)
                row[model.u_index(s, a, w)] = -rp[(s * A + a) * N + w];
        lp.add_ub(row, 0.0);
    }

    // occupancy flow per (state, model), scaled by f_w
    for (std::size_t sp = 0; sp < S; ++sp)
        for (std::size_t w = 0; w < N; ++w) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t a = 0; a < A; ++a) row[model.u_index(sp, a, w)] += 1.0;
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t a = 0; a < A; ++a)
                    row[model.u_index(s, a, w)] -=
                        mdp.discount * ensemble.models[w].row(s, a)[sp];
            lp.add_eq(row, f[w] * mdp.p0[sp]);
        }

    // one action per state
    for (std::size_t s = 0; s < S; ++s) {
        std::vector<double> row(lp.num_vars, 0.0);
        for (std::size_t a = 0; a < A; ++a) row[model.pi_index(s, a)] = 1.0;
        lp.add_eq(row, 1.0);
    }

    // u(s,a,w) <= f_w*pi(s,a)/(1-gamma): exact coupling at binary pi
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t w = 0; w < N; ++w) {
                std::vector<double> row(lp.num_vars, 0.0);
                row[model.u_index(s, a, w)] = 1.0;
                row[model.pi_index(s, a)] = -f[w] * horizon;
                lp.add_ub(row, 0.0);
            }

    return model;
}

namespace {

struct BranchNode {
    std::vector<int> fixed; // per pi variable: -1 free, 0 or 1
    double bound = 0.0;
    std::size_t depth = 0;
};

struct BoundOrder {
    bool operator()(const BranchNode& a, const BranchNode& b) const {
        return a.bound < b.bound;
    }
};

LpSolution solve_node(const SrMilpModel& model, const std::vector<int>& fixed) {
    LinearProgram lp = model.relaxation;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (fixed[i] == 0) lp.var_upper[i] = 0.0;
        if (fixed[i] == 1) lp.var_lower[i] = 1.0;
    }
    return solve(lp);
}

Policy round_policy(const SrMilpModel& model, const std::vector<double>& x) {
    std::vector<std::size_t> actions(model.num_states, 0);
    for (std::size_t s = 0; s < model.num_states; ++s) {
        std::size_t best = 0;
        for (std::size_t a = 1; a < model.num_actions; ++a)
            if (x[model.pi_index(s, a)] > x[model.pi_index(s, best)]) best = a;
        actions[s] = best;
    }
    return Policy::deterministic(actions, model.num_actions);
}

} // namespace

MilpSolution solve_branch_and_bound(const SrMilpModel& model, double gap_tol,
                                    std::size_t node_limit) {
    if (gap_tol <= 0.0) throw std::invalid_argument("gap tolerance must be positive");
    if (model.mdp == nullptr || model.ensemble == nullptr)
        throw std::invalid_argument("model is not bound to an mdp/ensemble");
    const std::size_t num_pi = model.num_states * model.num_actions;

    MilpSolution out;
    double incumbent = -std::numeric_limits<double>::infinity();
    Policy incumbent_policy;
    double best_bound = std::numeric_limits<double>::infinity();

    std::priority_queue<BranchNode, std::vector<BranchNode>, BoundOrder> open;
    {
        BranchNode root;
        root.fixed.assign(num_pi, -1);
        const LpSolution sol = solve_node(model, root.fixed);
        if (sol.status != LpStatus::optimal) throw NumericError("root relaxation did not solve");
        root.bound = sol.objective_value;

        const Policy rounded = round_policy(model, sol.x);
        incumbent = rho_S(*model.mdp, *model.ensemble, rounded, model.params);
        incumbent_policy = rounded;
        open.push(std::move(root));
        out.nodes_explored = 1;
    }

    while (!open.empty()) {
        BranchNode node = open.top();
        open.pop();
        best_bound = node.bound;
        if (best_bound <= incumbent + gap_tol) break;
        if (out.nodes_explored >= node_limit) {
            out.complete = false;
            break;
        }

        const LpSolution sol = solve_node(model, node.fixed);
        ++out.nodes_explored;
        if (sol.status != LpStatus::optimal) continue;
        if (sol.objective_value <= incumbent + gap_tol) continue;
        node.bound = sol.objective_value;

        const Policy rounded = round_policy(model, sol.x);
        const double rounded_value = rho_S(*model.mdp, *model.ensemble, rounded, model.params);
        if (rounded_value > incumbent) {
            incumbent = rounded_value;
            incumbent_policy = rounded;
        }

        // most fractional free policy variable
        std::size_t branch_var = num_pi;
        double best_frac = 1e-6;
        for (std::size_t i = 0; i < num_pi; ++i) {
            if (node.fixed[i] != -1) continue;
            const double frac = std::min(sol.x[i], 1.0 - sol.x[i]);
            if (frac > best_frac) {
                best_frac = frac;
                branch_var = i;
            }
        }
        if (branch_var == num_pi) continue; // integral node; incumbent already updated

        const std::size_t s = branch_var / model.num_actions;
        BranchNode one = node, zero = node;
        one.depth = zero.depth = node.depth + 1;
        one.fixed[branch_var] = 1;
        for (std::size_t a = 0; a < model.num_actions; ++a)
            if (model.pi_index(s, a) != branch_var) one.fixed[model.pi_index(s, a)] = 0;
        zero.fixed[branch_var] = 0;
        one.bound = zero.bound = sol.objective_value;
        open.push(std::move(one));
        open.push(std::move(zero));
    }

    if (open.empty()) best_bound = incumbent;
    out.policy = incumbent_policy;
    out.objective = incumbent;
    out.gap = std::max(0.0, best_bound - incumbent);
    if (out.complete && out.gap > gap_tol) out.complete = false;
    return out;
}

MilpSolution brute_force_deterministic(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                       const SoftRobustParams& params) {
    params.validate();
    ensemble.validate();
    const std::size_t S = mdp.num_states, A = mdp.num_actions;
    double count = 1.0;
    for (std::size_t s = 0; s < S; ++s) {
        count *= static_cast<double>(A);
        if (count > 1e6)
            throw UnsupportedError("deterministic policy enumeration exceeds 1e6 policies");
    }

    MilpSolution out;
    std::vector<std::size_t> actions(S, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_actions;
    while (true) {
        const Policy policy = Policy::deterministic(actions, A);
        const double value = rho_S(mdp, ensemble, policy, params);
        ++out.nodes_explored;
        if (value > best + 1e-12) {
            best = value;
            best_actions = actions;
        }
        std::size_t i = S;
        while (i > 0) {
            --i;
            if (++actions[i] < A) break;
            actions[i] = 0;
            if (i == 0) {
                out.policy = Policy::deterministic(best_actions, A);
                out.objective = best;
                return out;
            }
        }
    }
}

} // namespace srmdp
