#include "srmdp/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace srmdp {

namespace {

std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    return order;
}

void check_dist(const DiscreteDistributionView& dist) {
    if (dist.values.empty()) throw std::invalid_argument("distribution has empty support");
    if (dist.values.size() != dist.probs.size())
        throw std::invalid_argument("distribution value/probability length mismatch");
}

} // namespace

double value_at_risk(const DiscreteDistributionView& dist, double alpha) {
    check_dist(dist);
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
    const auto order = ascending_order(dist.values);
    const double threshold = 1.0 - alpha;
    double cumulative = 0.0;
    for (std::size_t i : order) {
        cumulative += dist.probs[i];
        if (cumulative >= threshold - 1e-12) return dist.values[i];
    }
    return dist.values[order.back()];
}

double cvar_primal(const DiscreteDistributionView& dist, double alpha) {
    check_dist(dist);
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
    if (alpha >= 1.0) return *std::min_element(dist.values.begin(), dist.values.end());

    // the objective is piecewise-linear concave in b with breakpoints at
    // support values, so scanning the support finds the exact maximum
    double best = -std::numeric_limits<double>::infinity();
    for (double b : dist.values) {
        double shortfall = 0.0;
        for (std::size_t i = 0; i < dist.values.size(); ++i)
            shortfall += dist.probs[i] * std::max(b - dist.values[i], 0.0);
        best = std::max(best, b - shortfall / (1.0 - alpha));
    }
    return best;
}

double cvar_dual(const DiscreteDistributionView& dist, double alpha) {
    check_dist(dist);
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
    if (alpha >= 1.0) return *std::min_element(dist.values.begin(), dist.values.end());

    const auto order = ascending_order(dist.values);
    const double cap_scale = 1.0 / (1.0 - alpha);
    double remaining = 1.0, total = 0.0;
    for (std::size_t i : order) {
        const double mass = std::min(dist.probs[i] * cap_scale, remaining);
        total += mass * dist.values[i];
        remaining -= mass;
        if (remaining <= 0.0) break;
    }
    return total;
}

XiBox xi_box(const std::vector<double>& f, const SoftRobustParams& params) {
    params.validate();
    if (params.alpha >= 1.0)
        throw std::invalid_argument(
            "alpha = 1 has no finite box; use the essential-infimum path");
    return xi_box_unbounded(f, params);
}

XiBox xi_box_unbounded(const std::vector<double>& f, const SoftRobustParams& params) {
    params.validate();
    XiBox box;
    box.base_weights = f;
    box.lower.resize(f.size());
    box.upper.resize(f.size());
    const double upper_scale =
        params.alpha >= 1.0
            ? std::numeric_limits<double>::infinity()
            : (1.0 - params.alpha + params.lambda * params.alpha) / (1.0 - params.alpha);
    for (std::size_t i = 0; i < f.size(); ++i) {
        box.lower[i] = (1.0 - params.lambda) * f[i];
        box.upper[i] = upper_scale * f[i];
        if (params.alpha >= 1.0 && params.lambda == 0.0) box.upper[i] = f[i];
    }
    return box;
}

double soft_robust_combine(const std::vector<double>& returns, const std::vector<double>& f,
                           const SoftRobustParams& params) {
    params.validate();
    if (returns.size() != f.size())
        throw std::invalid_argument("returns/weights length mismatch");
    double mean = 0.0;
    for (std::size_t i = 0; i < returns.size(); ++i) mean += f[i] * returns[i];
    if (params.lambda == 0.0) return mean;
    const double cvar = cvar_primal({returns, f}, params.alpha);
    return (1.0 - params.lambda) * mean + params.lambda * cvar;
}

std::pair<double, std::vector<double>> xi_minimize(const std::vector<double>& values,
                                                   const XiBox& box) {
    if (values.size() != box.lower.size())
        throw std::invalid_argument("values/box length mismatch");
    std::vector<double> xi = box.lower;
    double remaining = 1.0;
    for (double lo : box.lower) remaining -= lo;
    if (remaining < -1e-9) throw std::invalid_argument("box is infeasible: lower mass exceeds 1");

    for (std::size_t i : ascending_order(values)) {
        const double headroom = box.upper[i] - box.lower[i];
        const double add = std::min(headroom, remaining);
        xi[i] += add;
        remaining -= add;
        if (remaining <= 0.0) break;
    }
    if (remaining > 1e-9) throw std::invalid_argument("box is infeasible: upper mass below 1");

    double objective = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) objective += xi[i] * values[i];
    return {objective, std::move(xi)};
}

double rho_S(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy,
             const SoftRobustParams& params) {
    return soft_robust_combine(return_distribution(mdp, ensemble, policy), ensemble.weights,
                               params);
}

namespace {

double mixture_return(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                      const Policy& policy, const std::vector<double>& xi) {
    TransitionModel mix(ensemble.models[0].num_states, ensemble.models[0].num_actions);
    for (std::size_t w = 0; w < ensemble.size(); ++w) {
        const auto& model = ensemble.models[w];
        for (std::size_t i = 0; i < mix.probs.size(); ++i) mix.probs[i] += xi[w] * model.probs[i];
    }
    return expected_return(mdp, mix, policy);
}

// recursive sweep over the free coordinates of the xi slice
void grid_scan(const TabularMdp& mdp, const ModelEnsemble& ensemble, const Policy& policy,
               const std::vector<double>& lo, const std::vector<double>& hi,
               std::size_t resolution, std::vector<double>& xi, std::size_t dim,
               double& best_value, std::vector<double>& best_xi) {
    const std::size_t n = lo.size();
    if (dim + 1 == n) {
        double last = 1.0;
        for (std::size_t i = 0; i + 1 < n; ++i) last -= xi[i];
        if (last < lo[n - 1] - 1e-9 || last > hi[n - 1] + 1e-9) return;
        xi[n - 1] = std::clamp(last, lo[n - 1], hi[n - 1]);
        const double value = mixture_return(mdp, ensemble, policy, xi);
        if (value < best_value) {
            best_value = value;
            best_xi = xi;
        }
        return;
    }
    const double span = hi[dim] - lo[dim];
    const std::size_t points = span < 1e-15 ? 1 : resolution;
    for (std::size_t k = 0; k < points; ++k) {
        xi[dim] = points == 1 ? lo[dim]
                              : lo[dim] + span * static_cast<double>(k) /
                                              static_cast<double>(points - 1);
        grid_scan(mdp, ensemble, policy, lo, hi, resolution, xi, dim + 1, best_value, best_xi);
    }
}

} // namespace

GridMinResult rho_D_grid(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                         const Policy& policy, const SoftRobustParams& params,
                         std::size_t grid_resolution) {
    params.validate();
    ensemble.validate();
    const std::size_t n = ensemble.size();
    if (n > 4)
        throw UnsupportedError("rho_D grid oracle supports at most 4 models (NP-hard beyond "
                               "desk scale)");
    if (grid_resolution < 10) throw std::invalid_argument("grid resolution must be >= 10");

    GridMinResult result;
    if (n == 1) {
        result.value = expected_return(mdp, ensemble.models[0], policy);
        result.xi = {1.0};
        return result;
    }
    if (params.lambda == 0.0) {
        result.value = mixture_return(mdp, ensemble, policy, ensemble.weights);
        result.xi = ensemble.weights;
        return result;
    }

    XiBox box = xi_box_unbounded(ensemble.weights, params);
    for (double& u : box.upper) u = std::min(u, 1.0);

    std::vector<double> xi(n, 0.0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_xi;
    grid_scan(mdp, ensemble, policy, box.lower, box.upper, grid_resolution, xi, 0, best, best_xi);
    if (best_xi.empty()) throw NumericError("xi grid found no feasible point");

    // coarse-grid spacing fixes the error bar; one refinement around the
    // incumbent only improves the reported value
    double spacing_sum = 0.0;
    std::vector<double> rlo(n), rhi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double spacing =
            (box.upper[i] - box.lower[i]) / static_cast<double>(grid_resolution - 1);
        if (i + 1 < n) spacing_sum += spacing;
        rlo[i] = std::max(box.lower[i], best_xi[i] - spacing);
        rhi[i] = std::min(box.upper[i], best_xi[i] + spacing);
    }
    grid_scan(mdp, ensemble, policy, rlo, rhi, grid_resolution, xi, 0, best, best_xi);

    const double lipschitz =
        mdp.r_max / ((1.0 - mdp.discount) * (1.0 - mdp.discount));
    result.value = best;
    result.xi = best_xi;
    result.error_estimate = lipschitz * spacing_sum;
    return result;
}

} // namespace srmdp
