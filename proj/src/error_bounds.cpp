#include "srmdp/error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srmdp/rng.hpp"
#include "srmdp/robust.hpp"
#include "srmdp/sr_milp.hpp"

namespace srmdp {

namespace {

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return total;
}

TransitionModel mix_models(const std::vector<TransitionModel>& models,
                           const std::vector<double>& beta) {
    TransitionModel mix(models[0].num_states, models[0].num_actions);
    for (std::size_t w = 0; w < models.size(); ++w)
        for (std::size_t i = 0; i < mix.probs.size(); ++i)
            mix.probs[i] += beta[w] * models[w].probs[i];
    return mix;
}

} // namespace

double epsilon1(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy) {
    ensemble.validate();
    std::vector<std::vector<double>> occupancies;
    occupancies.reserve(ensemble.size());
    for (const auto& model : ensemble.models)
        occupancies.push_back(occupancy_frequency(mdp, model, policy));
    double worst = 0.0;
    for (std::size_t i = 0; i < occupancies.size(); ++i)
        for (std::size_t j = i + 1; j < occupancies.size(); ++j)
            worst = std::max(worst, l1_distance(occupancies[i], occupancies[j]));
    return worst;
}

DynamicOptimum dynamic_optimum(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                               const SoftRobustParams& params, std::size_t grid_resolution) {
    const std::size_t S = mdp.num_states, A = mdp.num_actions;
    double count = 1.0;
    for (std::size_t s = 0; s < S; ++s) {
        count *= static_cast<double>(A);
        if (count > 1e6)
            throw UnsupportedError("deterministic policy enumeration exceeds 1e6 policies");
    }

    DynamicOptimum best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> actions(S, 0);
    while (true) {
        const Policy policy = Policy::deterministic(actions, A);
        const GridMinResult r = rho_D_grid(mdp, ensemble, policy, params, grid_resolution);
        if (r.value > best.value) {
            best.policy = policy;
            best.value = r.value;
            best.xi = r.xi;
            best.grid_error = r.error_estimate;
        }
        std::size_t i = S;
        bool done = true;
        while (i > 0) {
            --i;
            if (++actions[i] < A) {
                done = false;
                break;
            }
            actions[i] = 0;
        }
        if (done) break;
    }

    const TransitionModel mix = mix_models(ensemble.models, best.xi);
    best.v_star = evaluate_policy(mdp, mix, best.policy);
    return best;
}

double epsilon2(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                const SoftRobustParams& params, const ValueFunction& v_star_D) {
    params.validate();
    ensemble.validate();
    const std::size_t S = mdp.num_states, A = mdp.num_actions, N = ensemble.size();
    const XiBox box = xi_box_unbounded(ensemble.weights, params);
    const std::vector<double>& v = v_star_D.values;

    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a) {
            const double* r = mdp.reward_row(s, a);
            std::vector<double> lookahead(N, 0.0);
            for (std::size_t w = 0; w < N; ++w) {
                const double* p = ensemble.models[w].row(s, a);
                double total = 0.0;
                for (std::size_t sp = 0; sp < S; ++sp)
                    total += p[sp] * (r[sp] + mdp.discount * v[sp]);
                lookahead[w] = total;
            }
            const double delta = xi_minimize(lookahead, box).first - v[s];
            worst = std::max(worst, delta);
        }
    return worst;
}

BoundCheck check_theorem2(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                          const Policy& policy, const SoftRobustParams& params,
                          std::size_t grid_resolution) {
    const GridMinResult dynamic = rho_D_grid(mdp, ensemble, policy, params, grid_resolution);
    const double static_value = rho_S(mdp, ensemble, policy, params);
    const double eps1 = epsilon1(mdp, ensemble, policy);

    BoundCheck check;
    check.name = "static-vs-dynamic gap";
    check.lhs = std::abs(dynamic.value - static_value);
    check.rhs = mdp.discount * mdp.r_max * eps1 / (1.0 - mdp.discount);
    check.margin = dynamic.error_estimate + 1e-9;
    check.pass = check.lhs <= check.rhs + check.margin;
    return check;
}

BoundReport check_corollary1(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                             const SoftRobustParams& params, std::size_t grid_resolution,
                             std::uint64_t seed) {
    const std::size_t S = mdp.num_states, A = mdp.num_actions;

    const MilpSolution static_opt = brute_force_deterministic(mdp, ensemble, params);
    const RobustViResult robust =
        robust_value_iteration(mdp, ensemble, params, RectangularMode::s_rect, 1e-8);
    const double rho_s_robust = rho_S(mdp, ensemble, robust.policy, params);

    // eps1 maximized over deterministic policies plus sampled randomized ones
    double eps1_max = 0.0;
    {
        std::vector<std::size_t> actions(S, 0);
        while (true) {
            eps1_max = std::max(
                eps1_max, epsilon1(mdp, ensemble, Policy::deterministic(actions, A)));
            std::size_t i = S;
            bool done = true;
            while (i > 0) {
                --i;
                if (++actions[i] < A) {
                    done = false;
                    break;
                }
                actions[i] = 0;
            }
            if (done) break;
        }
        Rng rng = Rng::stream(seed, std::uint64_t{4});
        const std::vector<double> ones(A, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> probs(S * A);
            for (std::size_t s = 0; s < S; ++s)
                rng.dirichlet(ones.data(), probs.data() + s * A, A);
            eps1_max = std::max(
                eps1_max, epsilon1(mdp, ensemble, Policy::randomized(probs, S, A)));
        }
    }

    const DynamicOptimum dynamic = dynamic_optimum(mdp, ensemble, params, grid_resolution);
    const double eps2 = epsilon2(mdp, ensemble, params, dynamic.v_star);

    BoundReport report;
    report.epsilon1 = eps1_max;
    report.epsilon2 = eps2;
    BoundCheck check;
    check.name = "static optimum vs rectangular policy";
    check.lhs = static_opt.objective - rho_s_robust;
    check.rhs = (2.0 * mdp.discount * eps1_max * mdp.r_max + eps2) / (1.0 - mdp.discount);
    check.margin = dynamic.grid_error + 1e-9;
    check.pass = check.lhs <= check.rhs + check.margin;
    report.checks.push_back(check);
    return report;
}

double occupancy_convexity_gap(const TabularMdp& mdp,
                               const std::vector<TransitionModel>& models,
                               const std::vector<double>& beta, const Policy& policy) {
    if (models.empty() || models.size() != beta.size())
        throw std::invalid_argument("model/weight length mismatch");
    double total = 0.0;
    for (double b : beta) {
        if (b < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
        total += b;
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument("mixture weights must sum to 1");

    const auto h_mixed = occupancy_frequency(mdp, mix_models(models, beta), policy);
    std::vector<double> h_convex(mdp.num_states, 0.0);
    for (std::size_t w = 0; w < models.size(); ++w) {
        const auto h = occupancy_frequency(mdp, models[w], policy);
        for (std::size_t s = 0; s < mdp.num_states; ++s) h_convex[s] += beta[w] * h[s];
    }
    return l1_distance(h_mixed, h_convex);
}

} // namespace srmdp
