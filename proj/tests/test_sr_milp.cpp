#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <vector>

#include "srmdp/lp.hpp"
#include "srmdp/mdp.hpp"
#include "srmdp/risk.hpp"
#include "srmdp/sr_milp.hpp"

using namespace srmdp;

TEST_CASE("model has the expected size") {
    const auto inst = test::random_instance(3, 2, 4, 1);
    const SoftRobustParams params{0.8, 0.5};
    const SrMilpModel model = build_model(inst.mdp, inst.ensemble, params);
    const std::size_t S = 3, A = 2, N = 4;
    CHECK(model.relaxation.num_vars == S * A + S * A * N + 1 + N);
    // CVaR rows and McCormick envelopes are inequalities; flow balance and
    // per-state policy simplex are equalities
    CHECK(model.relaxation.ub_matrix.size() == N + S * A * N);
    CHECK(model.relaxation.eq_matrix.size() == S * N + S);
    CHECK_THROWS(build_model(inst.mdp, inst.ensemble, SoftRobustParams{1.0, 0.5}));
}

TEST_CASE("relaxation with a pinned deterministic policy scores it exactly") {
    Rng rng(6);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = test::random_instance(3, 3, 3, 400 + seed);
        const SoftRobustParams params{0.6, 0.7};
        const SrMilpModel model = build_model(inst.mdp, inst.ensemble, params);
        const Policy pi = test::random_det_policy(3, 3, rng);

        LinearProgram pinned = model.relaxation;
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t a = 0; a < 3; ++a) {
                const double val = pi.det_actions[s] == a ? 1.0 : 0.0;
                pinned.var_lower[model.pi_index(s, a)] = val;
                pinned.var_upper[model.pi_index(s, a)] = val;
            }
        const LpSolution sol = solve(pinned);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.objective_value ==
              doctest::Approx(rho_S(inst.mdp, inst.ensemble, pi, params)).epsilon(1e-7));

        // the occupancy block reproduces the per-model visitation frequencies
        for (std::size_t w = 0; w < 3; ++w) {
            const auto h = occupancy_frequency(inst.mdp, inst.ensemble.models[w], pi);
            for (std::size_t s = 0; s < 3; ++s) {
                double u_s = 0.0;
                for (std::size_t a = 0; a < 3; ++a) u_s += sol.x[model.u_index(s, a, w)];
                CHECK(u_s ==
                      doctest::Approx(inst.ensemble.weights[w] * h[s]).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("relaxation upper-bounds every deterministic policy") {
    const auto inst = test::random_instance(3, 2, 3, 9);
    const SoftRobustParams params{0.75, 0.6};
    const SrMilpModel model = build_model(inst.mdp, inst.ensemble, params);
    const LpSolution root = solve(model.relaxation);
    REQUIRE(root.status == LpStatus::optimal);
    const MilpSolution brute = brute_force_deterministic(inst.mdp, inst.ensemble, params);
    CHECK(root.objective_value >= brute.objective - 1e-7);
}

TEST_CASE("branch and bound matches brute force on random instances") {
    const double alphas[] = {0.5, 0.9};
    const double lambdas[] = {0.0, 0.5, 1.0};
    for (std::uint64_t k = 0; k < 12; ++k) {
        const std::size_t S = 2 + k % 3, A = 2 + k % 2, N = 2 + k % 3;
        const auto inst = test::random_instance(S, A, N, 700 + k);
        const SoftRobustParams params{alphas[k % 2], lambdas[k % 3]};
        const SrMilpModel model = build_model(inst.mdp, inst.ensemble, params);
        const MilpSolution bb = solve_branch_and_bound(model);
        const MilpSolution brute = brute_force_deterministic(inst.mdp, inst.ensemble, params);
        REQUIRE(bb.complete);
        CHECK(bb.objective == doctest::Approx(brute.objective).epsilon(1e-6));
        // the reported objective always equals the reported policy's score
        CHECK(bb.objective ==
              doctest::Approx(rho_S(inst.mdp, inst.ensemble, bb.policy, params)).epsilon(1e-9));
    }
}

TEST_CASE("brute force refuses exponential instances") {
    const auto inst = test::random_instance(3, 2, 2, 2);
    TabularMdp big(25, 4, 0.9);
    ModelEnsemble ensemble = inst.ensemble;
    CHECK_THROWS_AS(brute_force_deterministic(big, ensemble, SoftRobustParams{0.5, 0.5}),
                    UnsupportedError);
}

TEST_CASE("optimal value is monotone in lambda for fixed alpha") {
    // more risk weight can only lower the best achievable objective
    const auto inst = test::random_instance(3, 2, 4, 33);
    double prev = 1e100;
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const MilpSolution brute =
            brute_force_deterministic(inst.mdp, inst.ensemble, SoftRobustParams{0.8, lambda});
        CHECK(brute.objective <= prev + 1e-9);
        prev = brute.objective;
    }
}
