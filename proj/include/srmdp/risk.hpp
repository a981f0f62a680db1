#pragma once

#include "srmdp/mdp.hpp"
#include "srmdp/posterior.hpp"
#include "srmdp/types.hpp"

#include <utility>
#include <vector>

namespace srmdp {

/// Confidence alpha and risk weight lambda of the soft-robust objective
/// (1-lambda)*mean + lambda*CVaR^alpha. alpha = 1 selects the essential
/// infimum (worst sampled model).
struct SoftRobustParams {
    double alpha = 0.0;
    double lambda = 0.0;

    void validate() const {
        if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
        if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0,1]");
    }
};

/// Box of mixture weights {xi : (1-lambda)f <= xi <= ((1-a+la)/(1-a))f} whose
/// worst-case expectation reproduces the soft-robust combination.
struct XiBox {
    std::vector<double> lower;
    std::vector<double> upper; // entries may be +inf (essential-infimum mode)
    std::vector<double> base_weights;
};

/// Finite distribution of returns over models.
struct DiscreteDistributionView {
    const std::vector<double>& values;
    const std::vector<double>& probs;
};

/// Smallest support value z with P[Z <= z] >= 1-alpha.
double value_at_risk(const DiscreteDistributionView& dist, double alpha);

/// CVaR as the maximum of b - E[max(b-Z,0)]/(1-alpha); the maximum is
/// attained at a support point, so it is evaluated exactly. alpha = 1
/// returns the minimum support value.
double cvar_primal(const DiscreteDistributionView& dist, double alpha);

/// CVaR via the robust representation: greedy mass assignment in ascending
/// value order under the caps f/(1-alpha).
double cvar_dual(const DiscreteDistributionView& dist, double alpha);

/// Throws for alpha = 1; callers wanting the essential infimum should use
/// the robust-Bellman path, which handles it explicitly.
XiBox xi_box(const std::vector<double>& f, const SoftRobustParams& params);

/// As xi_box but alpha = 1 yields +inf upper caps instead of throwing.
XiBox xi_box_unbounded(const std::vector<double>& f, const SoftRobustParams& params);

/// (1-lambda) * f^T returns + lambda * CVaR^alpha(returns, f).
double soft_robust_combine(const std::vector<double>& returns, const std::vector<double>& f,
                           const SoftRobustParams& params);

/// Greedy box-constrained simplex minimization of xi^T values over the box.
std::pair<double, std::vector<double>> xi_minimize(const std::vector<double>& values,
                                                   const XiBox& box);

/// Static soft-robust objective of a fixed policy over the ensemble.
double rho_S(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy,
             const SoftRobustParams& params);

struct GridMinResult {
    double value = 0.0;
    std::vector<double> xi;
    double error_estimate = 0.0; // grid spacing times the return Lipschitz bound
};

/// Desk-scale oracle for the dynamic objective min_xi rho(pi, E_xi[P]):
/// regular grid over the feasible slice of the box (N <= 4), refined once
/// around the incumbent. Never a production solver.
GridMinResult rho_D_grid(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                         const Policy& policy, const SoftRobustParams& params,
                         std::size_t grid_resolution);

} // namespace srmdp
