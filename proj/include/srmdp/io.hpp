#pragma once

#include <string>
#include <utility>

#include "srmdp/posterior.hpp"
#include "srmdp/srvi.hpp"
#include "srmdp/types.hpp"

namespace srmdp {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// MDP + model as one document: keys num_states, num_actions, gamma, p0,
// transitions [{s, a, sp, p, r}]; omitted triples carry zero probability
void save_mdp(const std::string& path, const TabularMdp& mdp, const TransitionModel& model);
std::pair<TabularMdp, TransitionModel> load_mdp(const std::string& path);

// {"weights": [...], "models": [{num_states, num_actions, transitions: [{s,a,sp,p}]}]}
void save_ensemble(const std::string& path, const ModelEnsemble& ensemble);
ModelEnsemble load_ensemble(const std::string& path);

void save_policy(const std::string& path, const Policy& policy);
Policy load_policy(const std::string& path);

// {"kind", "dimension", "weights": [...]}
void save_feature_weights(const std::string& path, const FeatureMap& features,
                          const std::vector<double>& weights);

// header s,a,sp, one row per transition
void save_batch_csv(const std::string& path, const TransitionBatch& batch);
TransitionBatch load_batch_csv(const std::string& path, std::size_t num_states,
                               std::size_t num_actions);

} // namespace srmdp
