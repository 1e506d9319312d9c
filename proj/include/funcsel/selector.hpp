#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "funcsel/dataset.hpp"
#include "funcsel/evidence.hpp"
#include "funcsel/region.hpp"
#include "funcsel/trainer.hpp"

namespace funcsel {

enum class Criterion { Evidence, Val };

Criterion criterion_from_name(const std::string& name);
const char* criterion_name(Criterion c);

struct SelectorConfig {
    std::vector<int> j_candidates = {55, 60, 70, 80};
    Criterion criterion = Criterion::Evidence;
    int spline_degree = 4;
    bool denoise_curves = false;
    TrainConfig train;
    SparsityHyper hyper;
    LaplaceOptions laplace;
};

void validate_selector_config(const SelectorConfig& config);

/// One (J, r) cell of the score table.
struct RestartScore {
    bool diverged = false;
    std::string error;
    double val_mse = 0.0;
    std::optional<double> log_evidence;  // absent when diverged or over the cap
    std::string evidence_error;
};

struct CandidateScores {
    int j = 0;
    std::vector<RestartScore> restarts;
    // Means over non-diverged restarts (evidence additionally over restarts
    // where it was computable).
    std::optional<double> mean_evidence;
    std::optional<double> mean_val;
};

/// Fills the aggregate fields of a candidate row.
void aggregate_scores(CandidateScores& row);

struct SelectionChoice {
    int j_star = 0;        // candidate value, not index
    int r_star = 0;        // 0-based restart index within j_star
    Criterion used = Criterion::Val;
    bool fell_back_to_val = false;
};

/// Algorithm steps 6-8 as pure arithmetic over a score table: J* maximizes
/// mean evidence (or minimizes mean validation MSE), r* minimizes validation
/// MSE within J*. Ties break toward the smaller J / smaller restart index.
/// Falls back to the validation criterion when no candidate has an evidence
/// mean. Candidates without any surviving restart are excluded.
SelectionChoice choose_from_scores(const std::vector<CandidateScores>& table,
                                   Criterion criterion);

struct SelectionResult {
    int j_star = 0;
    int r_star = 0;
    SelectionChoice choice;
    SplineBasis basis;                 // basis at j_star
    ResponseStats stats;               // training-set standardization
    Eigen::VectorXd grid;
    NetworkParams final_params;        // unsparsified MAP at (j_star, r_star)
    std::vector<bool> final_mask;
    Eigen::VectorXd pips;              // from the single restart r_star
    Region region;
    std::vector<CandidateScores> per_j;
    std::vector<NetworkParams> ensemble;  // surviving restarts at j_star
};

/// Algorithm 1 end to end over the candidate projection sizes.
SelectionResult run_selection(const FunctionalDataset& dataset, const SelectorConfig& config);

/// Ensemble prediction for curves on the dataset grid, de-standardized to the
/// original response scale.
Eigen::VectorXd predict_ensemble(const SelectionResult& result, const CurveSet& curves);

/// Single-model prediction for one curve.
double predict_point(const NetworkParams& params, const SplineBasis& basis,
                     const ResponseStats& stats, const CurveSet& curve);

}  // namespace funcsel
