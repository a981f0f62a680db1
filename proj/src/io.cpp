#include "srmdp/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace srmdp {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return doc;
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out << doc.dump(2) << '\n';
}

json model_to_json(const TransitionModel& model, const TabularMdp* mdp) {
    json doc;
    doc["num_states"] = model.num_states;
    doc["num_actions"] = model.num_actions;
    json transitions = json::array();
    const std::size_t S = model.num_states, A = model.num_actions;
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t sp = 0; sp < S; ++sp) {
                const double p = model.row(s, a)[sp];
                if (p == 0.0) continue;
                json t{{"s", s}, {"a", a}, {"sp", sp}, {"p", p}};
                if (mdp != nullptr) t["r"] = mdp->r(s, a, sp);
                transitions.push_back(std::move(t));
            }
    doc["transitions"] = std::move(transitions);
    return doc;
}

TransitionModel model_from_json(const json& doc, TabularMdp* mdp) {
    const std::size_t S = doc.at("num_states").get<std::size_t>();
    const std::size_t A = doc.at("num_actions").get<std::size_t>();
    TransitionModel model(S, A);
    for (const auto& t : doc.at("transitions")) {
        const std::size_t s = t.at("s").get<std::size_t>();
        const std::size_t a = t.at("a").get<std::size_t>();
        const std::size_t sp = t.at("sp").get<std::size_t>();
        if (s >= S || a >= A || sp >= S)
            throw InputError("transition index out of range at (s=" + std::to_string(s) +
                             ", a=" + std::to_string(a) + ")");
        model.probs[(s * A + a) * S + sp] = t.at("p").get<double>();
        if (mdp != nullptr && t.contains("r"))
            mdp->r(s, a, sp) = t.at("r").get<double>();
    }
    try {
        model.validate();
    } catch (const std::exception& e) {
        throw InputError(std::string("model validation: ") + e.what());
    }
    return model;
}

// rethrows missing-key / wrong-type errors from the json library as InputError
template <typename Fn>
auto checked(const Fn& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed document: ") + e.what());
    }
}

} // namespace

void save_mdp(const std::string& path, const TabularMdp& mdp, const TransitionModel& model) {
    json doc = model_to_json(model, &mdp);
    doc["gamma"] = mdp.discount;
    doc["p0"] = mdp.p0;
    write_json(path, doc);
}

std::pair<TabularMdp, TransitionModel> load_mdp(const std::string& path) {
    const json doc = read_json(path);
    return checked([&]() -> std::pair<TabularMdp, TransitionModel> {
        const std::size_t S = doc.at("num_states").get<std::size_t>();
        const std::size_t A = doc.at("num_actions").get<std::size_t>();
        TabularMdp mdp(S, A, doc.at("gamma").get<double>());
        mdp.p0 = doc.at("p0").get<std::vector<double>>();
        TransitionModel model = model_from_json(doc, &mdp);
        mdp.compute_r_max();
        try {
            mdp.validate();
        } catch (const std::exception& e) {
            throw InputError(std::string("mdp validation: ") + e.what());
        }
        return {std::move(mdp), std::move(model)};
    });
}

void save_ensemble(const std::string& path, const ModelEnsemble& ensemble) {
    json doc;
    doc["weights"] = ensemble.weights;
    json models = json::array();
    for (const auto& model : ensemble.models) models.push_back(model_to_json(model, nullptr));
    doc["models"] = std::move(models);
    write_json(path, doc);
}

ModelEnsemble load_ensemble(const std::string& path) {
    const json doc = read_json(path);
    return checked([&] {
        ModelEnsemble ensemble;
        ensemble.weights = doc.at("weights").get<std::vector<double>>();
        for (const auto& m : doc.at("models"))
            ensemble.models.push_back(model_from_json(m, nullptr));
        try {
            ensemble.validate();
        } catch (const std::exception& e) {
            throw InputError(std::string("ensemble validation: ") + e.what());
        }
        return ensemble;
    });
}

void save_policy(const std::string& path, const Policy& policy) {
    json doc;
    doc["num_states"] = policy.num_states;
    doc["num_actions"] = policy.num_actions;
    if (policy.kind == PolicyKind::deterministic) {
        doc["kind"] = "deterministic";
        doc["actions"] = policy.det_actions;
    } else {
        doc["kind"] = "randomized";
        doc["probs"] = policy.action_probs;
    }
    write_json(path, doc);
}

Policy load_policy(const std::string& path) {
    const json doc = read_json(path);
    return checked([&]() -> Policy {
        const std::size_t S = doc.at("num_states").get<std::size_t>();
        const std::size_t A = doc.at("num_actions").get<std::size_t>();
        const std::string kind = doc.at("kind").get<std::string>();
        try {
            if (kind == "deterministic")
                return Policy::deterministic(doc.at("actions").get<std::vector<std::size_t>>(), A);
            if (kind == "randomized")
                return Policy::randomized(doc.at("probs").get<std::vector<double>>(), S, A);
        } catch (const json::exception&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(std::string("policy validation: ") + e.what());
        }
        throw InputError("unknown policy kind: " + kind);
    });
}

void save_feature_weights(const std::string& path, const FeatureMap& features,
                          const std::vector<double>& weights) {
    json doc;
    doc["kind"] = features.kind == FeatureKind::one_hot ? "one_hot" : "poly2";
    doc["dimension"] = features.dimension;
    doc["weights"] = weights;
    write_json(path, doc);
}

void save_batch_csv(const std::string& path, const TransitionBatch& batch) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out << "s,a,sp\n";
    for (const auto& [s, a, sp] : batch.samples) out << s << ',' << a << ',' << sp << '\n';
}

TransitionBatch load_batch_csv(const std::string& path, std::size_t num_states,
                               std::size_t num_actions) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "s,a,sp")
        throw InputError(path + ": expected header s,a,sp");
    TransitionBatch batch(num_states, num_actions);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::size_t s, a, sp;
        char c1, c2;
        if (!(row >> s >> c1 >> a >> c2 >> sp) || c1 != ',' || c2 != ',')
            throw InputError(path + ": malformed row at line " + std::to_string(line_no));
        if (s >= num_states || a >= num_actions || sp >= num_states)
            throw InputError(path + ": index out of range at line " + std::to_string(line_no));
        batch.add(s, a, sp);
    }
    return batch;
}

} // namespace srmdp
