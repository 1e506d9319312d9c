#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "funcsel/network.hpp"
#include "funcsel/prior.hpp"

namespace funcsel {

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 64;
    long max_iters = 80001;
    long patience_iters = 3000;   // stop after this many iterations without val improvement
    long eval_every = 50;
    int restarts = 5;
    std::uint64_t seed = 0;
    std::vector<int> hidden_widths = {64, 64, 64};
};

void validate_train_config(const TrainConfig& config);

/// Best-by-validation snapshot of a single MAP run.
struct FitRecord {
    NetworkParams params;
    double train_objective = 0.0;  // full objective at the snapshot
    double val_mse = 0.0;          // on the standardized scale
    long iterations_run = 0;
    std::uint64_t seed_used = 0;
};

/// A restart either produced a FitRecord or diverged with a message.
struct RestartOutcome {
    std::optional<FitRecord> record;
    std::string error;
    bool ok() const { return record.has_value(); }
};

/// Full MAP objective: squared-error data loss plus the negative log
/// marginal prior.
double objective(const NetworkParams& params, const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& responses, const SparsityHyper& hyper);

/// Gradient of the full objective over the given data.
GradientBuffer objective_grad(const NetworkParams& params, const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& responses, const SparsityHyper& hyper);

/// Mini-batch SGD on the MAP objective with early stopping on validation MSE.
/// Batches come from epoch-wise shuffling without replacement; the stochastic
/// data gradient is rescaled to full-data expectation and the full prior
/// gradient is added every step. Throws DivergenceError on NaN/Inf.
FitRecord fit_map(const Eigen::MatrixXd& features_train, const Eigen::VectorXd& y_train,
                  const Eigen::MatrixXd& features_val, const Eigen::VectorXd& y_val,
                  const SparsityHyper& hyper, const TrainConfig& config);

/// R independent fits with seeds config.seed+1 ... config.seed+R. Divergence
/// of a single restart is recorded; throws only when all restarts diverge.
std::vector<RestartOutcome> fit_restarts(const Eigen::MatrixXd& features_train,
                                         const Eigen::VectorXd& y_train,
                                         const Eigen::MatrixXd& features_val,
                                         const Eigen::VectorXd& y_val,
                                         const SparsityHyper& hyper,
                                         const TrainConfig& config);

}  // namespace funcsel
