#pragma once

#include <Eigen/Dense>

#include "funcsel/network.hpp"

namespace funcsel {

/// Spike-and-slab / Gaussian prior configuration and the observation noise
/// variance. slab_var > spike_var > 0 is required throughout.
struct SparsityHyper {
    double lambda = 1e-5;      // slab inclusion probability
    double spike_var = 1e-5;   // sigma0^2
    double slab_var = 2e-3;    // sigma1^2
    double deep_var = 1.0;     // sigma^2 for deep weights and all biases
    double noise_var = 1.0;    // sigma_eps^2 (responses standardized)
};

/// Throws ConfigError unless all variances are positive, lambda is in (0,1)
/// and slab_var > spike_var.
void validate_hyper(const SparsityHyper& hyper);

/// Negative log of the marginal prior: a two-component Gaussian mixture per
/// first-layer column (indicators integrated out) plus independent N(0, deep_var)
/// on deep weights and all biases. Mixture evaluated in log-space.
double neg_log_marginal_prior(const NetworkParams& params, const SparsityHyper& hyper);

/// Gradient of neg_log_marginal_prior.
GradientBuffer prior_grad(const NetworkParams& params, const SparsityHyper& hyper);

/// Adds the prior gradient into an existing buffer (training hot path).
void add_prior_grad(const NetworkParams& params, const SparsityHyper& hyper,
                    GradientBuffer& grad);

/// Plug-in posterior inclusion probability per first-layer column, computed
/// in log-space as a sigmoid of the slab/spike log-odds.
Eigen::VectorXd pip(const NetworkParams& params, const SparsityHyper& hyper);

/// PIP for a single column with squared norm `norm_sq` under first-layer
/// width L1.
double pip_from_norm_sq(double norm_sq, int first_layer_width, const SparsityHyper& hyper);

/// Squared-norm threshold tau_n at which the PIP crosses 1/2.
double norm_threshold(const SparsityHyper& hyper, int first_layer_width);

}  // namespace funcsel
