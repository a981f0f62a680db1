// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// if any fails. Each check is standalone and uses only public library calls
// (plus the CLI binary for the determinism check).
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "helpers.hpp"
#include "srmdp/domains.hpp"
#include "srmdp/error_bounds.hpp"
#include "srmdp/experiments.hpp"
#include "srmdp/mdp.hpp"
#include "srmdp/posterior.hpp"
#include "srmdp/risk.hpp"
#include "srmdp/rng.hpp"
#include "srmdp/robust.hpp"
#include "srmdp/sr_milp.hpp"
#include "srmdp/srvi.hpp"

using namespace srmdp;

namespace {

int failures = 0;

void report(int number, const char* name, bool pass) {
    std::printf("criterion %2d (%s): %s\n", number, name, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::vector<std::vector<double>> lookahead(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                                           std::size_t s, const ValueFunction& v) {
    std::vector<std::vector<double>> q(mdp.num_actions,
                                       std::vector<double>(ensemble.size(), 0.0));
    for (std::size_t a = 0; a < mdp.num_actions; ++a)
        for (std::size_t w = 0; w < ensemble.size(); ++w) {
            const double* p = ensemble.models[w].row(s, a);
            const double* r = mdp.reward_row(s, a);
            double acc = 0.0;
            for (std::size_t sp = 0; sp < mdp.num_states; ++sp)
                acc += p[sp] * (r[sp] + mdp.discount * v[sp]);
            q[a][w] = acc;
        }
    return q;
}

ValueFunction bellman_sweep(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                            const SoftRobustParams& params, RectangularMode mode,
                            const ValueFunction& v) {
    ValueFunction next(mdp.num_states);
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        const auto q = lookahead(mdp, ensemble, s, v);
        next[s] = mode == RectangularMode::s_rect
                      ? s_rect_bellman_state(q, ensemble.weights, params).value
                      : sa_rect_bellman_state(q, ensemble.weights, params).value;
    }
    return next;
}

double inf_norm_diff(const ValueFunction& a, const ValueFunction& b) {
    double m = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) m = std::max(m, std::abs(a[s] - b[s]));
    return m;
}

void random_distribution(Rng& rng, std::size_t n, bool with_ties, std::vector<double>& values,
                         std::vector<double>& probs) {
    values.resize(n);
    probs.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = std::floor(rng.uniform() * (with_ties ? 5.0 : 1e6)) * 0.7 - 2.0;
        probs[i] = rng.uniform_pos();
        total += probs[i];
    }
    for (double& p : probs) p /= total;
}

ModelEnsemble riverswim_ensemble(std::size_t n_models, std::size_t batch_size,
                                 std::uint64_t seed, const TabularMdp& mdp,
                                 const TransitionModel& model) {
    const Policy behavior = uniform_random_policy(mdp.num_states, mdp.num_actions);
    const TransitionBatch batch = generate_batch(model, behavior, batch_size, mdp.p0, seed);
    return sample_ensemble(dirichlet_from_batch(batch, 1.0), n_models, seed + 1);
}

// 1. exact solver against exhaustive policy enumeration
bool criterion_milp_oracle() {
    const double alphas[] = {0.5, 0.9};
    const double lambdas[] = {0.0, 0.5, 1.0};
    for (std::uint64_t k = 0; k < 20; ++k) {
        const std::size_t S = 2 + k % 3, A = 2 + k % 2, N = 2 + k % 3;
        const auto inst = test::random_instance(S, A, N, 10000 + k);
        const SoftRobustParams params{alphas[k % 2], lambdas[k % 3]};
        const SrMilpModel model = build_model(inst.mdp, inst.ensemble, params);
        const MilpSolution bb = solve_branch_and_bound(model);
        const MilpSolution brute = brute_force_deterministic(inst.mdp, inst.ensemble, params);
        if (!bb.complete || std::abs(bb.objective - brute.objective) > 1e-6) return false;
    }
    return true;
}

// 2. closed-form soft-robust combination vs box-constrained minimization
bool criterion_combine_equivalence() {
    Rng rng(20001);
    std::vector<double> values, f;
    for (int k = 0; k < 500; ++k) {
        const std::size_t n = 1 + rng.next_u64() % 50;
        random_distribution(rng, n, k % 3 == 0, values, f);
        const SoftRobustParams params{0.99 * rng.uniform(), rng.uniform()};
        const double combined = soft_robust_combine(values, f, params);
        const double minimized = xi_minimize(values, xi_box(f, params)).first;
        if (std::abs(combined - minimized) > 1e-9) return false;
    }
    return true;
}

// 3. CVaR primal maximization vs dual greedy assignment
bool criterion_cvar_agreement() {
    Rng rng(30001);
    const double alphas[] = {0.0, 0.25, 0.75, 0.99};
    std::vector<double> values, probs;
    for (int k = 0; k < 500; ++k) {
        const std::size_t n = 1 + rng.next_u64() % 12;
        random_distribution(rng, n, k % 2 == 0, values, probs);
        const DiscreteDistributionView dist{values, probs};
        const double alpha = alphas[k % 4];
        if (std::abs(cvar_primal(dist, alpha) - cvar_dual(dist, alpha)) > 1e-9) return false;
    }
    return true;
}

// 4. gamma-contraction of the robust Bellman operator, single-model reduction
bool criterion_contraction() {
    const SoftRobustParams params{0.8, 0.5};
    auto contracts = [&](const TabularMdp& mdp, const ModelEnsemble& ensemble) {
        for (RectangularMode mode : {RectangularMode::s_rect, RectangularMode::sa_rect}) {
            ValueFunction v(mdp.num_states, 0.0);
            double prev = -1.0;
            for (int it = 0; it < 30; ++it) {
                ValueFunction next = bellman_sweep(mdp, ensemble, params, mode, v);
                const double res = inf_norm_diff(next, v);
                if (prev > 1e-9 && res > mdp.discount * prev + 1e-9) return false;
                prev = res;
                v = std::move(next);
            }
        }
        return true;
    };
    const auto [river_mdp, river_model] = riverswim();
    if (!contracts(river_mdp, riverswim_ensemble(5, 1500, 40001, river_mdp, river_model)))
        return false;
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto inst = test::random_instance(4, 3, 4, 41000 + k);
        if (!contracts(inst.mdp, inst.ensemble)) return false;
    }
    const double tol = 1e-9;
    const auto single = test::random_instance(5, 2, 1, 42000);
    const ValueFunction v_plain =
        value_iteration(single.mdp, single.ensemble.models[0], tol, 100000).first;
    for (RectangularMode mode : {RectangularMode::s_rect, RectangularMode::sa_rect}) {
        const RobustViResult res =
            robust_value_iteration(single.mdp, single.ensemble, params, mode, tol);
        if (inf_norm_diff(res.value, v_plain) > 2.0 * tol / (1.0 - single.mdp.discount))
            return false;
    }
    return true;
}

// 5. rectangular relaxation lower-bounds the non-rectangular adversary
bool criterion_rectangularization_order() {
    Rng rng(50001);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto inst = test::random_instance(3, 2, 3, 50100 + k);
        const SoftRobustParams params{0.7, 0.6};
        for (int p = 0; p < 5; ++p) {
            const Policy pi = test::random_policy(3, 2, rng);
            const double robust = rho_R(inst.mdp, inst.ensemble, pi, params,
                                        RectangularMode::s_rect);
            const GridMinResult grid = rho_D_grid(inst.mdp, inst.ensemble, pi, params, 12);
            if (robust > grid.value + grid.error_estimate + 1e-8) return false;
        }
        const auto vs = robust_value_iteration(inst.mdp, inst.ensemble, params,
                                               RectangularMode::s_rect, 1e-9);
        const auto vsa = robust_value_iteration(inst.mdp, inst.ensemble, params,
                                                RectangularMode::sa_rect, 1e-9);
        for (std::size_t s = 0; s < inst.mdp.num_states; ++s)
            if (vsa.value[s] > vs.value[s] + 1e-8) return false;
    }
    return true;
}

// 6. static-vs-dynamic gap bound through the occupancy distance
bool criterion_static_dynamic_bound() {
    Rng rng(60001);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto inst = test::random_instance(3, 2, 3, 60100 + k);
        const SoftRobustParams params{0.7, 0.6};
        const Policy pi = k % 2 == 0
                              ? robust_value_iteration(inst.mdp, inst.ensemble, params,
                                                       RectangularMode::s_rect, 1e-8)
                                    .policy
                              : test::random_policy(3, 2, rng);
        if (!check_theorem2(inst.mdp, inst.ensemble, pi, params, 12).pass) return false;
    }
    return true;
}

// 7. optimality-gap bound between static optimum and rectangular optimum
bool criterion_optimality_gap_bound() {
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto inst = test::random_instance(3, 2, 2, 70100 + k);
        const SoftRobustParams params{0.8, 0.5};
        const BoundReport report = check_corollary1(inst.mdp, inst.ensemble, params, 12, k);
        for (const BoundCheck& check : report.checks)
            if (!check.pass) return false;
    }
    return true;
}

// 8. occupancy of a mixture model vs mixture of occupancies
bool criterion_occupancy_mixture_bound() {
    Rng rng(80001);
    for (int k = 0; k < 100; ++k) {
        const auto inst = test::random_instance(4, 2, 2, 80100 + static_cast<std::uint64_t>(k));
        const double beta0 = rng.uniform();
        const std::vector<double> beta = {beta0, 1.0 - beta0};
        const Policy pi = test::random_policy(4, 2, rng);
        ModelEnsemble pair;
        pair.models = inst.ensemble.models;
        pair.weights = beta;
        const double gap = occupancy_convexity_gap(inst.mdp, pair.models, beta, pi);
        const double eps1 = epsilon1(inst.mdp, pair, pi);
        if (gap > inst.mdp.discount * eps1 / (1.0 - inst.mdp.discount) + 1e-9) return false;
    }
    return true;
}

// 9. post-decision surprise statistics on random small MDPs
bool criterion_surprise_stats() {
    ExperimentConfig config;
    config.trials = 200;
    config.n_samples = 100;
    config.seed = 90001;
    auto stat = [](const SurpriseTable& table, const std::string& method) {
        for (const auto& s : table.stats)
            if (s.method == method) return s;
        return SurpriseStats{};
    };
    config.lambda = 0.0;
    const SurpriseTable neutral = run_surprise(config);
    const SurpriseStats static0 = stat(neutral, "static");
    const SurpriseStats empirical = stat(neutral, "empirical");
    if (std::abs(static0.mean) > 2.0 * static0.standard_error) return false;
    if (empirical.mean >= -2.0 * empirical.standard_error) return false;
    config.lambda = 0.5;
    const SurpriseStats static_half = stat(run_surprise(config), "static");
    return static_half.mean >= -2.0 * static_half.standard_error;
}

// 10. function approximation reproduces the tabular solution
bool criterion_approximation_consistency() {
    const auto [mdp, model] = riverswim();
    const ModelEnsemble ensemble = riverswim_ensemble(10, 2000, 100001, mdp, model);
    const SoftRobustParams params{0.8, 0.5};
    const RobustViResult tab =
        robust_value_iteration(mdp, ensemble, params, RectangularMode::sa_rect, 1e-8);

    SrviConfig config;
    config.exhaustive_states = true;
    config.max_iters = 2000;
    config.tol = 1e-9;
    const FeatureMap one_hot = FeatureMap::one_hot(mdp.num_states);
    const SrviSolution exact =
        srvi_solve(mdp, ensemble, params, one_hot, config, RectangularMode::sa_rect);
    const auto values = exact.state_values(one_hot, mdp.num_states);
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        if (std::abs(values[s] - tab.value[s]) > 1e-3) return false;

    // quadratic features: the greedy policy's return stays within 10% of the
    // tabular policy's return (regression baseline, fixed seed)
    config.tol = 1e-6;
    const FeatureMap poly = FeatureMap::poly2();
    const SrviSolution approx =
        srvi_solve(mdp, ensemble, params, poly, config, RectangularMode::sa_rect);
    std::vector<double> probs(mdp.num_states * mdp.num_actions, 0.0);
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        const BellmanResult res = extract_decision(approx.weights, poly, mdp, ensemble, params,
                                                   RectangularMode::sa_rect, s);
        for (std::size_t a = 0; a < mdp.num_actions; ++a)
            probs[s * mdp.num_actions + a] = res.decision[a];
    }
    const Policy approx_pi = Policy::randomized(std::move(probs), mdp.num_states, mdp.num_actions);
    const double tab_return = rho_S(mdp, ensemble, tab.policy, params);
    const double approx_return = rho_S(mdp, ensemble, approx_pi, params);
    return std::abs(approx_return - tab_return) <= 0.1 * std::abs(tab_return);
}

// 11. risk/return tradeoff is monotone in the risk weight
bool criterion_tradeoff_monotone() {
    auto monotone = [](const TabularMdp& mdp, const ModelEnsemble& train,
                       double alpha) {
        double prev_cvar = -1e100, prev_mean = 1e100;
        for (double lambda : {0.0, 0.5, 1.0}) {
            const SoftRobustParams params{alpha, lambda};
            const SrMilpModel model = build_model(mdp, train, params);
            const MilpSolution sol = solve_branch_and_bound(model);
            if (!sol.complete) return false;
            const auto returns = return_distribution(mdp, train, sol.policy);
            double mean = 0.0;
            for (std::size_t w = 0; w < returns.size(); ++w)
                mean += train.weights[w] * returns[w];
            const DiscreteDistributionView dist{returns, train.weights};
            const double cvar = cvar_primal(dist, alpha);
            if (cvar < prev_cvar - 1e-6 || mean > prev_mean + 1e-6) return false;
            prev_cvar = cvar;
            prev_mean = mean;
        }
        return true;
    };

    const auto [river_mdp, river_model] = riverswim();
    if (!monotone(river_mdp, riverswim_ensemble(5, 3000, 110001, river_mdp, river_model), 0.8))
        return false;

    const InventorySpec spec = InventorySpec::small();
    const TabularMdp inv_mdp = inventory(spec, 5.0).first;
    Rng demand_rng(110002);
    std::vector<std::uint64_t> demands(60);
    for (auto& d : demands) d = demand_rng.poisson(5.0);
    const GammaPosterior posterior = gamma_poisson_from_demands(demands, 4.0, 6.0);
    const ModelEnsemble inv_train = sample_demand_ensemble(posterior, 4, 110003, spec);
    return monotone(inv_mdp, inv_train, 0.8);
}

// 12. repeated CLI invocations are byte-identical
bool criterion_determinism() {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() /
        ("srmdp_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    const std::string cli = SRMDP_CLI_PATH;
    const std::vector<std::string> commands = {
        "solve --domain riverswim --algorithm rvi_s --alpha 0.8 --lambda 0.5 --seed 4 --models 8",
        "tradeoff --domain random --algorithm brute --alpha 0.9 --seed 2 --models 6 "
        "--lambda-grid 0,0.5,1",
        "surprise --trials 3 --samples 30 --models 10 --seed 6 --lambda 0",
    };
    bool ok = true;
    for (std::size_t i = 0; i < commands.size() && ok; ++i) {
        const std::string a = (dir / ("a" + std::to_string(i) + ".csv")).string();
        const std::string b = (dir / ("b" + std::to_string(i) + ".csv")).string();
        if (std::system((cli + " " + commands[i] + " --out " + a + " >/dev/null 2>&1").c_str()) ||
            std::system((cli + " " + commands[i] + " --out " + b + " >/dev/null 2>&1").c_str())) {
            ok = false;
            break;
        }
        const std::string text = slurp(a);
        ok = !text.empty() && text == slurp(b);
    }
    std::filesystem::remove_all(dir);
    return ok;
}

} // namespace

int main() {
    report(1, "exact solver matches exhaustive policy search", criterion_milp_oracle());
    report(2, "soft-robust combination equals box minimization", criterion_combine_equivalence());
    report(3, "CVaR primal and dual forms agree", criterion_cvar_agreement());
    report(4, "robust Bellman operator is a gamma-contraction", criterion_contraction());
    report(5, "rectangular relaxation lower-bounds the dynamic adversary",
           criterion_rectangularization_order());
    report(6, "static-dynamic gap bound", criterion_static_dynamic_bound());
    report(7, "optimality-gap bound", criterion_optimality_gap_bound());
    report(8, "mixture occupancy bound", criterion_occupancy_mixture_bound());
    report(9, "post-decision surprise statistics", criterion_surprise_stats());
    report(10, "function approximation consistency", criterion_approximation_consistency());
    report(11, "risk/return tradeoff monotone in lambda", criterion_tradeoff_monotone());
    report(12, "byte-identical deterministic reruns", criterion_determinism());
    return failures == 0 ? 0 : 1;
}
