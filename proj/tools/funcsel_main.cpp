#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "funcsel/experiment.hpp"

using json = nlohmann::json;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> criterion;
    std::optional<std::string> j_list;
    std::optional<std::string> out_dir;
    std::optional<int> replicates;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config JSON")->required();
    cmd->add_option("--seed", flags.seed, "Override the experiment seed");
    cmd->add_option("--criterion", flags.criterion, "Override the selection criterion (evidence|val)");
    cmd->add_option("--j", flags.j_list, "Override candidate projection sizes, e.g. 55,60,70,80");
    cmd->add_option("--out", flags.out_dir, "Override the output directory");
    cmd->add_option("--replicates", flags.replicates, "Override the replicate count");
}

funcsel::ExperimentConfig resolve(const CommonFlags& flags) {
    funcsel::ExperimentConfig config = funcsel::load_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.criterion)
        config.selector.criterion = funcsel::criterion_from_name(*flags.criterion);
    if (flags.j_list) {
        std::vector<int> js;
        std::stringstream ss(*flags.j_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) js.push_back(std::stoi(tok));
        config.selector.j_candidates = js;
    }
    if (flags.out_dir) config.output_dir = *flags.out_dir;
    if (flags.replicates) config.replicates = *flags.replicates;
    funcsel::validate_selector_config(config.selector);
    return config;
}

int fail(const std::string& command, const std::exception& e) {
    const json err = {{"error", e.what()}, {"command", command}};
    std::cerr << err.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse Bayesian functional DNN: simulation, fitting and evaluation"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
    CLI::App* fit = app.add_subcommand("fit", "Run projection-size selection and MAP fitting");
    CLI::App* eval = app.add_subcommand("evaluate", "Score a fitted model");
    CLI::App* rep = app.add_subcommand("reproduce", "Run replicated simulate+fit+evaluate chains");
    for (CLI::App* cmd : {sim, fit, eval, rep}) add_common(cmd, flags);

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const funcsel::ExperimentConfig config = resolve(flags);
        if (command == "simulate") funcsel::run_simulate(config);
        else if (command == "fit") funcsel::run_fit(config);
        else if (command == "evaluate") funcsel::run_evaluate(config);
        else funcsel::run_reproduce(config);
    } catch (const std::exception& e) {
        return fail(command, e);
    }
    return 0;
}
