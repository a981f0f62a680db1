#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srmdp/domains.hpp"
#include "srmdp/posterior.hpp"
#include "srmdp/risk.hpp"
#include "srmdp/types.hpp"

namespace srmdp {

struct ExperimentConfig {
    std::string domain = "riverswim";
    std::string algorithm = "rvi_s";
    double alpha = 0.8;
    double lambda = 0.5;
    std::vector<double> lambda_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::size_t n_models = 100;
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    double tol = 1e-6;
    std::size_t n_samples = 1000;
    // wall-clock timing breaks byte-identical reruns, so it is opt-in
    bool timing = false;

    void validate() const;
};

struct ResultRow {
    std::string domain;
    std::string algorithm;
    double alpha = 0.0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    double mean_return = 0.0;
    double cvar_return = 0.0;
    double var_return = 0.0;
    double soft_robust_return = 0.0;
    double runtime_ms = 0.0;
    std::size_t iterations = 0;
};

std::string result_csv_header();
std::string to_csv(const ResultRow& row);

/// Domain instance plus train/test posterior ensembles and the empirical
/// point estimate, all derived from one seed.
struct DomainSetup {
    TabularMdp mdp;
    TransitionModel true_model;
    ModelEnsemble train;
    ModelEnsemble test;
    TransitionModel empirical;
};

DomainSetup build_domain(const ExperimentConfig& config);

struct SolveOutput {
    ResultRow row;
    Policy policy;
};

SolveOutput run_solve(const ExperimentConfig& config);

/// Evaluates a fixed policy on the test ensemble of the configured domain.
ResultRow run_eval(const ExperimentConfig& config, const Policy& policy);

struct SurpriseRow {
    std::size_t trial = 0;
    std::string method;
    double surprise = 0.0; // true return minus the solver's own estimate
};

struct SurpriseStats {
    std::string method;
    double mean = 0.0;
    double standard_error = 0.0;
};

struct SurpriseTable {
    std::vector<SurpriseRow> rows;
    std::vector<SurpriseStats> stats;
};

/// Per-trial post-decision surprise of the static soft-robust solver, the
/// mean-model solver, and the empirical-model solver on random small MDPs.
SurpriseTable run_surprise(const ExperimentConfig& config);

std::vector<ResultRow> run_tradeoff(const ExperimentConfig& config);

} // namespace srmdp
