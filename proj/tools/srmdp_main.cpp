#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "srmdp/experiments.hpp"
#include "srmdp/io.hpp"

namespace {

using srmdp::ExperimentConfig;

struct CliState {
    ExperimentConfig cfg;
    std::string lambda_grid_csv;
    std::string config_path;
    std::string out_path;
    std::string policy_path;
    std::string policy_out_path;
};

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw srmdp::InputError("empty lambda grid");
    return grid;
}

void add_common_options(CLI::App* cmd, CliState& state) {
    cmd->add_option("--domain", state.cfg.domain,
                    "riverswim | inventory | inventory-small | random");
    cmd->add_option("--algorithm", state.cfg.algorithm,
                    "vi | mean_vi | empirical_vi | rvi_s | rvi_sa | srvi | milp | brute");
    cmd->add_option("--alpha", state.cfg.alpha, "CVaR confidence level");
    cmd->add_option("--lambda", state.cfg.lambda, "risk weight");
    cmd->add_option("--lambda-grid", state.lambda_grid_csv, "comma-separated risk weights");
    cmd->add_option("--models", state.cfg.n_models, "posterior sample count");
    cmd->add_option("--seed", state.cfg.seed, "master seed");
    cmd->add_option("--trials", state.cfg.trials, "experiment repetitions");
    cmd->add_option("--tol", state.cfg.tol, "solver tolerance");
    cmd->add_option("--samples", state.cfg.n_samples, "logged transitions / demand draws");
    cmd->add_flag("--timing", state.cfg.timing, "report wall-clock runtime_ms");
    cmd->add_option("--out", state.out_path, "output CSV path (stdout when omitted)");
    cmd->add_option("--config", state.config_path, "JSON config file; flags override its values");
}

// config file supplies defaults; any flag given on the command line wins
void apply_config_file(const CLI::App* cmd, CliState& state) {
    if (state.config_path.empty()) return;
    std::ifstream in(state.config_path);
    if (!in) throw srmdp::InputError("cannot open " + state.config_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw srmdp::InputError(state.config_path + ": " + e.what());
    }
    auto flag_given = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (doc.contains("domain") && !flag_given("--domain"))
        state.cfg.domain = doc["domain"].get<std::string>();
    if (doc.contains("algorithm") && !flag_given("--algorithm"))
        state.cfg.algorithm = doc["algorithm"].get<std::string>();
    if (doc.contains("alpha") && !flag_given("--alpha"))
        state.cfg.alpha = doc["alpha"].get<double>();
    if (doc.contains("lambda") && !flag_given("--lambda"))
        state.cfg.lambda = doc["lambda"].get<double>();
    if (doc.contains("lambda_grid") && !flag_given("--lambda-grid"))
        state.cfg.lambda_grid = doc["lambda_grid"].get<std::vector<double>>();
    if (doc.contains("n_models") && !flag_given("--models"))
        state.cfg.n_models = doc["n_models"].get<std::size_t>();
    if (doc.contains("seed") && !flag_given("--seed"))
        state.cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("trials") && !flag_given("--trials"))
        state.cfg.trials = doc["trials"].get<std::size_t>();
    if (doc.contains("tol") && !flag_given("--tol"))
        state.cfg.tol = doc["tol"].get<double>();
    if (doc.contains("n_samples") && !flag_given("--samples"))
        state.cfg.n_samples = doc["n_samples"].get<std::size_t>();
    if (doc.contains("out") && state.out_path.empty())
        state.out_path = doc["out"].get<std::string>();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw srmdp::InputError("cannot open " + out_path + " for writing");
    out << text;
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int dispatch(const std::string& command, CliState& state) {
    ExperimentConfig& cfg = state.cfg;
    if (!state.lambda_grid_csv.empty()) cfg.lambda_grid = parse_grid(state.lambda_grid_csv);

    if (command == "solve") {
        const srmdp::SolveOutput result = srmdp::run_solve(cfg);
        emit(state.out_path, srmdp::result_csv_header() + "\n" + to_csv(result.row) + "\n");
        if (!state.policy_out_path.empty())
            srmdp::save_policy(state.policy_out_path, result.policy);
        return 0;
    }
    if (command == "eval") {
        if (state.policy_path.empty()) throw srmdp::InputError("eval requires --policy");
        const srmdp::Policy policy = srmdp::load_policy(state.policy_path);
        const srmdp::ResultRow row = srmdp::run_eval(cfg, policy);
        emit(state.out_path, srmdp::result_csv_header() + "\n" + to_csv(row) + "\n");
        return 0;
    }
    if (command == "surprise") {
        const srmdp::SurpriseTable table = srmdp::run_surprise(cfg);
        std::string text = "trial,method,surprise\n";
        for (const auto& row : table.rows)
            text += std::to_string(row.trial) + "," + row.method + "," + fmt(row.surprise) + "\n";
        text += "method,mean_surprise,standard_error\n";
        for (const auto& s : table.stats)
            text += s.method + "," + fmt(s.mean) + "," + fmt(s.standard_error) + "\n";
        emit(state.out_path, text);
        return 0;
    }
    if (command == "tradeoff") {
        const std::vector<srmdp::ResultRow> rows = srmdp::run_tradeoff(cfg);
        std::string text = srmdp::result_csv_header() + "\n";
        for (const auto& row : rows) text += to_csv(row) + "\n";
        emit(state.out_path, text);
        return 0;
    }
    if (command == "domain-export") {
        if (state.out_path.empty()) throw srmdp::InputError("domain-export requires --out");
        if (cfg.domain == "riverswim") {
            const auto [mdp, model] = srmdp::riverswim();
            srmdp::save_mdp(state.out_path, mdp, model);
        } else if (cfg.domain == "inventory" || cfg.domain == "inventory-small") {
            const srmdp::InventorySpec spec = cfg.domain == "inventory"
                                                  ? srmdp::InventorySpec{}
                                                  : srmdp::InventorySpec::small();
            const double rate = cfg.domain == "inventory" ? 20.0 : 5.0;
            const auto [mdp, model] = srmdp::inventory(spec, rate);
            srmdp::save_mdp(state.out_path, mdp, model);
        } else if (cfg.domain == "random") {
            const auto [mdp, model] = srmdp::random_dirichlet_mdp(5, 3, cfg.seed);
            srmdp::save_mdp(state.out_path, mdp, model);
        } else {
            throw srmdp::InputError("unknown domain: " + cfg.domain);
        }
        return 0;
    }
    if (command == "posterior") {
        if (state.out_path.empty()) throw srmdp::InputError("posterior requires --out");
        const srmdp::DomainSetup setup = srmdp::build_domain(cfg);
        srmdp::save_ensemble(state.out_path, setup.train);
        return 0;
    }
    throw srmdp::InputError("unknown command: " + command);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soft-robust policies for batch-trained tabular MDPs"};
    app.require_subcommand(1);

    CliState state;
    const std::pair<const char*, const char*> commands[] = {
        {"solve", "train a policy and report its test-ensemble returns"},
        {"eval", "evaluate a saved policy on the test ensemble"},
        {"surprise", "post-decision surprise of each solver on random MDPs"},
        {"tradeoff", "mean/CVaR frontier across a risk-weight grid"},
        {"domain-export", "write a domain's MDP and true model as JSON"},
        {"posterior", "write the sampled training ensemble as JSON"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* cmd = app.add_subcommand(name, description);
        add_common_options(cmd, state);
        if (std::string(name) == "eval")
            cmd->add_option("--policy", state.policy_path, "policy JSON to evaluate");
        if (std::string(name) == "solve")
            cmd->add_option("--policy-out", state.policy_out_path,
                            "write the solved policy as JSON");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // parsed but unused: the solvers are serial; accepted for interface stability
    if (const char* threads = std::getenv("SRMDP_THREADS")) (void)threads;

    const CLI::App* sub = app.get_subcommands().front();
    try {
        apply_config_file(sub, state);
        return dispatch(sub->get_name(), state);
    } catch (const srmdp::UnsupportedError& e) {
        std::cerr << "{\"error\": \"resource guard\", \"detail\": \"" << e.what() << "\"}\n";
        return 4;
    } catch (const srmdp::ConvergenceError& e) {
        std::cerr << "{\"error\": \"convergence\", \"detail\": \"" << e.what() << "\"}\n";
        return 3;
    } catch (const srmdp::NumericError& e) {
        std::cerr << "{\"error\": \"numeric\", \"detail\": \"" << e.what() << "\"}\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"input\", \"detail\": \"" << e.what() << "\"}\n";
        return 2;
    }
}
