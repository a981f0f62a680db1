#include "srmdp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

#include "srmdp/mdp.hpp"
#include "srmdp/rng.hpp"
#include "srmdp/robust.hpp"
#include "srmdp/sr_milp.hpp"
#include "srmdp/srvi.hpp"

namespace srmdp {

namespace {

constexpr std::uint64_t kTestSeedOffset = 1000000;
constexpr double kDirichletPrior = 1.0;
constexpr double kDemandPriorShape = 4.0;
constexpr double kDemandPriorScale = 6.0;
constexpr double kInventoryTrueRate = 20.0;
constexpr double kInventorySmallTrueRate = 5.0;

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void ExperimentConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0,1]");
    for (double l : lambda_grid)
        if (l < 0.0 || l > 1.0) throw std::invalid_argument("lambda grid must lie in [0,1]");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (n_models < 1) throw std::invalid_argument("n_models must be >= 1");
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
}

std::string result_csv_header() {
    return "domain,algorithm,alpha,lambda,seed,mean_return,cvar_return,var_return,"
           "soft_robust_return,runtime_ms,iterations";
}

std::string to_csv(const ResultRow& row) {
    std::string out = row.domain;
    out += ',';
    out += row.algorithm;
    out += ',';
    out += fmt(row.alpha);
    out += ',';
    out += fmt(row.lambda);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += fmt(row.mean_return);
    out += ',';
    out += fmt(row.cvar_return);
    out += ',';
    out += fmt(row.var_return);
    out += ',';
    out += fmt(row.soft_robust_return);
    out += ',';
    out += fmt(row.runtime_ms);
    out += ',';
    out += std::to_string(row.iterations);
    return out;
}

DomainSetup build_domain(const ExperimentConfig& config) {
    config.validate();
    DomainSetup setup;
    if (config.domain == "riverswim" || config.domain == "random") {
        if (config.domain == "riverswim") {
            auto [mdp, model] = riverswim();
            setup.mdp = std::move(mdp);
            setup.true_model = std::move(model);
        } else {
            auto [mdp, model] = random_dirichlet_mdp(5, 3, config.seed);
            setup.mdp = std::move(mdp);
            setup.true_model = std::move(model);
        }
        const Policy behavior =
            uniform_random_policy(setup.mdp.num_states, setup.mdp.num_actions);
        const TransitionBatch batch = generate_batch(setup.true_model, behavior,
                                                     config.n_samples, setup.mdp.p0, config.seed);
        const DirichletPosterior posterior = dirichlet_from_batch(batch, kDirichletPrior);
        setup.train = sample_ensemble(posterior, config.n_models, config.seed);
        setup.test = sample_ensemble(posterior, config.n_models, config.seed + kTestSeedOffset);
        setup.empirical = empirical_model(batch, EmpiricalFallback::uniform);
        return setup;
    }
    if (config.domain == "inventory" || config.domain == "inventory-small") {
        const InventorySpec spec =
            config.domain == "inventory" ? InventorySpec{} : InventorySpec::small();
        const double rate =
            config.domain == "inventory" ? kInventoryTrueRate : kInventorySmallTrueRate;
        auto [mdp, model] = inventory(spec, rate);
        setup.mdp = std::move(mdp);
        setup.true_model = std::move(model);

        Rng rng = Rng::stream(config.seed, std::uint64_t{20});
        std::vector<std::uint64_t> demands(config.n_samples);
        for (auto& d : demands) d = rng.poisson(rate);
        const GammaPosterior posterior =
            gamma_poisson_from_demands(demands, kDemandPriorShape, kDemandPriorScale);
        setup.train = sample_demand_ensemble(posterior, config.n_models, config.seed, spec);
        setup.test = sample_demand_ensemble(posterior, config.n_models,
                                            config.seed + kTestSeedOffset, spec);

        const Policy behavior =
            uniform_random_policy(setup.mdp.num_states, setup.mdp.num_actions);
        const TransitionBatch batch = generate_batch(setup.true_model, behavior,
                                                     config.n_samples, setup.mdp.p0, config.seed);
        setup.empirical = empirical_model(batch, EmpiricalFallback::uniform);
        return setup;
    }
    throw std::invalid_argument("unknown domain: " + config.domain);
}

namespace {

struct SolveResult {
    Policy policy;
    std::size_t iterations = 0;
};

SolveResult dispatch_solve(const DomainSetup& setup, const ExperimentConfig& config) {
    const SoftRobustParams params{config.alpha, config.lambda};
    const std::string& alg = config.algorithm;
    if (alg == "vi")
        return {value_iteration(setup.mdp, setup.true_model, config.tol, 100000).second, 0};
    if (alg == "mean_vi")
        return {mean_model_solve(setup.mdp, setup.train, config.tol, 100000).second, 0};
    if (alg == "empirical_vi")
        return {value_iteration(setup.mdp, setup.empirical, config.tol, 100000).second, 0};
    if (alg == "rvi_s" || alg == "rvi_sa") {
        const auto result = robust_value_iteration(
            setup.mdp, setup.train, params,
            alg == "rvi_s" ? RectangularMode::s_rect : RectangularMode::sa_rect, config.tol);
        return {result.policy, result.iterations};
    }
    if (alg == "srvi") {
        const FeatureMap features = FeatureMap::one_hot(setup.mdp.num_states);
        SrviConfig srvi_config;
        srvi_config.seed = config.seed;
        const SrviSolution sol = srvi_solve(setup.mdp, setup.train, params, features,
                                            srvi_config, RectangularMode::sa_rect);
        const std::size_t S = setup.mdp.num_states, A = setup.mdp.num_actions;
        std::vector<double> probs(S * A);
        for (std::size_t s = 0; s < S; ++s) {
            const auto decision = extract_decision(sol.weights, features, setup.mdp, setup.train,
                                                   params, RectangularMode::sa_rect, s);
            std::copy(decision.decision.begin(), decision.decision.end(),
                      probs.begin() + s * A);
        }
        return {Policy::randomized(probs, S, A), sol.iterations_used};
    }
    if (alg == "milp") {
        const SrMilpModel model = build_model(setup.mdp, setup.train, params);
        const MilpSolution sol = solve_branch_and_bound(model);
        if (!sol.complete) throw UnsupportedError("branch-and-bound hit its node limit");
        return {sol.policy, sol.nodes_explored};
    }
    if (alg == "brute") {
        const MilpSolution sol = brute_force_deterministic(setup.mdp, setup.train, params);
        return {sol.policy, sol.nodes_explored};
    }
    throw std::invalid_argument("unknown algorithm: " + alg);
}

ResultRow evaluate_on(const DomainSetup& setup, const ModelEnsemble& ensemble,
                      const ExperimentConfig& config, const Policy& policy) {
    const std::vector<double> returns = return_distribution(setup.mdp, ensemble, policy);
    const DiscreteDistributionView dist{returns, ensemble.weights};
    ResultRow row;
    row.domain = config.domain;
    row.algorithm = config.algorithm;
    row.alpha = config.alpha;
    row.lambda = config.lambda;
    row.seed = config.seed;
    for (std::size_t w = 0; w < returns.size(); ++w)
        row.mean_return += ensemble.weights[w] * returns[w];
    row.cvar_return = cvar_primal(dist, config.alpha);
    row.var_return = value_at_risk(dist, config.alpha);
    row.soft_robust_return =
        (1.0 - config.lambda) * row.mean_return + config.lambda * row.cvar_return;
    return row;
}

} // namespace

SolveOutput run_solve(const ExperimentConfig& config) {
    config.validate();
    const DomainSetup setup = build_domain(config);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult solved = dispatch_solve(setup, config);
    const auto elapsed = std::chrono::steady_clock::now() - start;

    SolveOutput out;
    out.policy = solved.policy;
    out.row = evaluate_on(setup, setup.test, config, solved.policy);
    out.row.iterations = solved.iterations;
    if (config.timing)
        out.row.runtime_ms =
            std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() / 1000.0;
    return out;
}

ResultRow run_eval(const ExperimentConfig& config, const Policy& policy) {
    config.validate();
    const DomainSetup setup = build_domain(config);
    check_dims(setup.mdp, policy);
    return evaluate_on(setup, setup.test, config, policy);
}

SurpriseTable run_surprise(const ExperimentConfig& config) {
    config.validate();
    const SoftRobustParams params{config.alpha, config.lambda};
    SurpriseTable table;

    std::vector<double> by_method[3];
    static const char* kMethods[3] = {"empirical", "mean", "static"};
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t trial_seed = config.seed + trial;
        auto [mdp, true_model] = random_dirichlet_mdp(5, 3, trial_seed);
        const Policy behavior = uniform_random_policy(mdp.num_states, mdp.num_actions);
        const TransitionBatch batch =
            generate_batch(true_model, behavior, config.n_samples, mdp.p0, trial_seed);
        const DirichletPosterior posterior = dirichlet_from_batch(batch, kDirichletPrior);
        const ModelEnsemble ensemble = sample_ensemble(posterior, config.n_models, trial_seed);

        double surprises[3];
        {
            const TransitionModel point = empirical_model(batch, EmpiricalFallback::uniform);
            const Policy pi = value_iteration(mdp, point, config.tol, 100000).second;
            surprises[0] = expected_return(mdp, true_model, pi) - expected_return(mdp, point, pi);
        }
        {
            const TransitionModel point = mean_model(ensemble);
            const Policy pi = value_iteration(mdp, point, config.tol, 100000).second;
            surprises[1] = expected_return(mdp, true_model, pi) - expected_return(mdp, point, pi);
        }
        {
            const MilpSolution sol = brute_force_deterministic(mdp, ensemble, params);
            surprises[2] = expected_return(mdp, true_model, sol.policy) - sol.objective;
        }
        for (int m = 0; m < 3; ++m) {
            table.rows.push_back({trial, kMethods[m], surprises[m]});
            by_method[m].push_back(surprises[m]);
        }
    }

    for (int m = 0; m < 3; ++m) {
        const auto& xs = by_method[m];
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        const double se = xs.size() > 1
                              ? std::sqrt(var / static_cast<double>(xs.size() - 1) /
                                          static_cast<double>(xs.size()))
                              : 0.0;
        table.stats.push_back({kMethods[m], mean, se});
    }
    return table;
}

std::vector<ResultRow> run_tradeoff(const ExperimentConfig& config) {
    config.validate();
    ExperimentConfig local = config;
    const DomainSetup setup = build_domain(config);
    if (local.algorithm != "milp" && local.algorithm != "brute" && local.algorithm != "srvi")
        local.algorithm =
            setup.mdp.num_states * setup.mdp.num_actions <= 128 ? "milp" : "srvi";

    std::vector<double> grid = local.lambda_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<ResultRow> rows;
    for (double lambda : grid) {
        local.lambda = lambda;
        const SolveResult solved = dispatch_solve(setup, local);
        ResultRow row = evaluate_on(setup, setup.test, local, solved.policy);
        row.iterations = solved.iterations;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace srmdp
