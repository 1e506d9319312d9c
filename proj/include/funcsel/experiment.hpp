#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "funcsel/selector.hpp"
#include "funcsel/simulate.hpp"

namespace funcsel {

/// One experiment = one output directory. Exactly one of `scenario` /
/// `dataset_path` must be present. The experiment seed drives both data
/// generation and training through derived sub-seeds.
struct ExperimentConfig {
    SelectorConfig selector;
    std::optional<SimScenario> scenario;
    std::optional<std::string> dataset_path;
    int replicates = 1;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
};

/// Parses a config JSON file; unknown keys are rejected at the top level.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// simulate: writes dataset.csv and truth.json into the output directory.
void run_simulate(const ExperimentConfig& config);

/// fit: loads or generates the dataset, runs Algorithm 1, writes result.json
/// and model.json.
void run_fit(const ExperimentConfig& config);

/// evaluate: reads the fit outputs back, scores the test split with the
/// ensemble, writes metrics.json and pip_curve.csv.
void run_evaluate(const ExperimentConfig& config);

/// reproduce: `replicates` independent simulate+fit+evaluate chains in
/// rep_<k>/ subdirectories with seeds seed+k, plus per-replicate and
/// aggregate (median, IQR) metric tables.
void run_reproduce(const ExperimentConfig& config);

}  // namespace funcsel
