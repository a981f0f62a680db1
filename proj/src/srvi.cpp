#include "srmdp/srvi.hpp"

#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>

#include "srmdp/rng.hpp"

namespace srmdp {

std::vector<double> FeatureMap::encode(std::size_t state, std::size_t num_states) const {
    if (state >= num_states) throw std::invalid_argument("state index out of range");
    if (kind == FeatureKind::one_hot) {
        if (dimension != num_states)
            throw std::invalid_argument("one-hot feature dimension must equal state count");
        std::vector<double> phi(num_states, 0.0);
        phi[state] = 1.0;
        return phi;
    }
    const double x = num_states > 1
                         ? static_cast<double>(state) / static_cast<double>(num_states - 1)
                         : 0.0;
    return {1.0, x, x * x};
}

std::vector<double> SrviSolution::state_values(const FeatureMap& features,
                                               std::size_t num_states) const {
    std::vector<double> v(num_states);
    for (std::size_t s = 0; s < num_states; ++s) {
        const auto phi = features.encode(s, num_states);
        double total = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) total += phi[i] * weights[i];
        v[s] = total;
    }
    return v;
}

std::vector<double> projected_update(const std::vector<std::vector<double>>& features_visited,
                                     const std::vector<double>& targets, double ridge) {
    const std::size_t m = features_visited.size();
    if (m == 0 || targets.size() != m)
        throw std::invalid_argument("feature/target row mismatch");
    const std::size_t l = features_visited[0].size();

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(l, l);
    Eigen::VectorXd moment = Eigen::VectorXd::Zero(l);
    for (std::size_t t = 0; t < m; ++t) {
        Eigen::Map<const Eigen::VectorXd> phi(features_visited[t].data(), l);
        gram += phi * phi.transpose();
        moment += targets[t] * phi;
    }
    gram /= static_cast<double>(m);
    moment /= static_cast<double>(m);
    gram += ridge * Eigen::MatrixXd::Identity(l, l);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
        throw NumericError("projected update: rank-deficient Gram matrix (rank " +
                           std::to_string(lu.rank()) + " of " + std::to_string(l) + ")");
    Eigen::VectorXd w = lu.solve(moment);
    return {w.data(), w.data() + l};
}

namespace {

std::vector<std::vector<double>> lookahead_at(const TabularMdp& mdp,
                                              const ModelEnsemble& ensemble, std::size_t s,
                                              const std::vector<double>& v) {
    const std::size_t S = mdp.num_states, A = mdp.num_actions, N = ensemble.size();
    std::vector<std::vector<double>> q(A, std::vector<double>(N, 0.0));
    for (std::size_t a = 0; a < A; ++a) {
        const double* r = mdp.reward_row(s, a);
        for (std::size_t w = 0; w < N; ++w) {
            const double* p = ensemble.models[w].row(s, a);
            double total = 0.0;
            for (std::size_t sp = 0; sp < S; ++sp)
                total += p[sp] * (r[sp] + mdp.discount * v[sp]);
            q[a][w] = total;
        }
    }
    return q;
}

BellmanResult state_backup(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                           const SoftRobustParams& params, RectangularMode mode,
                           std::size_t state, const std::vector<double>& v) {
    const auto q = lookahead_at(mdp, ensemble, state, v);
    return mode == RectangularMode::s_rect
               ? s_rect_bellman_state(q, ensemble.weights, params)
               : sa_rect_bellman_state(q, ensemble.weights, params);
}

} // namespace

BellmanResult extract_decision(const std::vector<double>& weights, const FeatureMap& features,
                               const TabularMdp& mdp, const ModelEnsemble& ensemble,
                               const SoftRobustParams& params, RectangularMode mode,
                               std::size_t state) {
    SrviSolution probe{weights, 0, 0.0};
    const auto v = probe.state_values(features, mdp.num_states);
    return state_backup(mdp, ensemble, params, mode, state, v);
}

SrviSolution srvi_solve(const TabularMdp& mdp, const ModelEnsemble& ensemble,
                        const SoftRobustParams& params, const FeatureMap& features,
                        const SrviConfig& config, RectangularMode mode) {
    params.validate();
    ensemble.validate();
    if (config.episodes_per_iter == 0 || config.episode_length == 0 || config.max_iters == 0 ||
        config.tol <= 0.0)
        throw std::invalid_argument("srvi config fields must be positive");
    const std::size_t S = mdp.num_states;
    const TransitionModel mean = mean_model(ensemble);

    SrviSolution sol;
    sol.weights.assign(features.dimension, 0.0);

    for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
        const auto v = sol.state_values(features, S);
        // one backup per distinct state visited this iteration; the SAA
        // moments still weight states by visitation count
        std::unordered_map<std::size_t, BellmanResult> backups;
        auto backup_at = [&](std::size_t s) -> const BellmanResult& {
            auto it = backups.find(s);
            if (it == backups.end())
                it = backups.emplace(s, state_backup(mdp, ensemble, params, mode, s, v)).first;
            return it->second;
        };

        std::vector<std::size_t> visited;
        if (config.exhaustive_states) {
            for (std::size_t s = 0; s < S; ++s) visited.push_back(s);
        } else {
            Rng rng = Rng::stream(config.seed, std::uint64_t{3}, iter);
            for (std::size_t ep = 0; ep < config.episodes_per_iter; ++ep) {
                std::size_t s = rng.categorical(mdp.p0.data(), S);
                for (std::size_t t = 0; t < config.episode_length; ++t) {
                    visited.push_back(s);
                    const BellmanResult& b = backup_at(s);
                    const std::size_t a = rng.categorical(b.decision.data(), b.decision.size());
                    s = rng.categorical(mean.row(s, a), S);
                }
            }
        }

        std::vector<std::vector<double>> phi;
        std::vector<double> targets;
        phi.reserve(visited.size());
        targets.reserve(visited.size());
        for (std::size_t s : visited) {
            phi.push_back(features.encode(s, S));
            targets.push_back(backup_at(s).value);
        }

        const auto w_next = projected_update(phi, targets, config.ridge);
        SrviSolution next{w_next, iter, 0.0};
        const auto v_next = next.state_values(features, S);
        double residual = 0.0;
        for (std::size_t s : visited)
            residual = std::max(residual, std::abs(v_next[s] - v[s]));

        sol.weights = w_next;
        sol.iterations_used = iter;
        sol.final_residual = residual;
        if (residual <= config.tol) break;
    }
    return sol;
}

} // namespace srmdp
