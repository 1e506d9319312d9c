#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "funcsel/dataset.hpp"
#include "funcsel/region.hpp"

namespace funcsel {

enum class BetaKind { Simple, Medium, Complex };
enum class LinkKind { Linear, Logistic, Sinusoidal, Composite };

BetaKind beta_from_name(const std::string& name);
LinkKind link_from_name(const std::string& name);
const char* beta_name(BetaKind k);
const char* link_name(LinkKind k);

struct SimScenario {
    BetaKind beta_kind = BetaKind::Simple;
    LinkKind link_kind = LinkKind::Linear;
    double response_snr = 10.0;
    double curve_snr = 10.0;
    int grid_len = 101;
    long n_train = 1000;
    long n_val = 200;
    long n_test = 200;
    std::uint64_t seed = 0;
};

struct SimTruth {
    Region true_region;
    Eigen::VectorXd beta_on_grid;
    double sigma_eps_sq = 0.0;
};

/// True coefficient function: normalized quadratic bumps on the scenario's
/// active intervals, zero elsewhere.
double beta_true(BetaKind kind, double t);

/// Active region of beta_true.
Region true_region(BetaKind kind);

/// Link function g applied to the single index.
double link(LinkKind kind, double u);

/// Latent curves from the truncated cosine expansion: per-curve coefficient
/// rows c_{ik} = z_k r_{ik}, r ~ Unif(-sqrt(3), sqrt(3)), K = 50.
Eigen::MatrixXd gen_curve_coefficients(long n, std::uint64_t seed);

/// Evaluates the cosine expansion for the given coefficient rows on a grid.
Eigen::MatrixXd eval_curves(const Eigen::MatrixXd& coefficients, const Eigen::VectorXd& grid);

/// Noiseless latent curves on a grid.
Eigen::MatrixXd gen_curves(long n, int grid_len, std::uint64_t seed);

/// Full generator: latent curves, responses through the single-index model
/// with SNR-calibrated Gaussian noise, then grid measurement noise on the
/// observed curves. Throws NumericalError when the signal variance is zero.
std::pair<FunctionalDataset, SimTruth> gen_dataset(const SimScenario& scenario);

}  // namespace funcsel
