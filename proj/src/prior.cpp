#include "funcsel/prior.hpp"

#include <cmath>

#include "funcsel/errors.hpp"

namespace funcsel {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log A_1 - log A_0 with A_k = lambda-ish * (sigma_k^2)^{-L1/2}; the common
// (2*pi)^{-L1/2} factor cancels in the odds.
double log_prior_odds(const SparsityHyper& h, int width) {
    return std::log(h.lambda) - std::log1p(-h.lambda) +
           0.5 * width * (std::log(h.spike_var) - std::log(h.slab_var));
}

}  // namespace

void validate_hyper(const SparsityHyper& h) {
    if (!(h.lambda > 0.0 && h.lambda < 1.0))
        throw ConfigError("lambda must be in (0,1)");
    if (!(h.spike_var > 0.0) || !(h.slab_var > 0.0) || !(h.deep_var > 0.0) ||
        !(h.noise_var > 0.0))
        throw ConfigError("all prior variances and the noise variance must be positive");
    if (!(h.slab_var > h.spike_var))
        throw ConfigError("slab variance must exceed spike variance");
}

double neg_log_marginal_prior(const NetworkParams& params, const SparsityHyper& hyper) {
    validate_hyper(hyper);
    const int L1 = params.first_layer_width();
    const int J = params.input_dim();

    double neg_log = 0.0;
    // First-layer columns: -log[ lambda N(w; 0, s1 I) + (1-lambda) N(w; 0, s0 I) ].
    for (int j = 0; j < J; ++j) {
        const double nsq = params.weights[0].col(j).squaredNorm();
        const double lg1 = std::log(hyper.lambda) -
                           0.5 * L1 * (kLog2Pi + std::log(hyper.slab_var)) -
                           nsq / (2.0 * hyper.slab_var);
        const double lg0 = std::log1p(-hyper.lambda) -
                           0.5 * L1 * (kLog2Pi + std::log(hyper.spike_var)) -
                           nsq / (2.0 * hyper.spike_var);
        neg_log -= log_add_exp(lg1, lg0);
    }
    // Deep weights and all biases: independent N(0, deep_var).
    const double half_log_norm = 0.5 * (kLog2Pi + std::log(hyper.deep_var));
    const double inv2s = 1.0 / (2.0 * hyper.deep_var);
    for (int h = 0; h < params.num_layers(); ++h) {
        if (h > 0) {
            neg_log += half_log_norm * params.weights[h].size() +
                       inv2s * params.weights[h].squaredNorm();
        }
        neg_log += half_log_norm * params.biases[h].size() +
                   inv2s * params.biases[h].squaredNorm();
    }
    return neg_log;
}

double pip_from_norm_sq(double norm_sq, int first_layer_width, const SparsityHyper& hyper) {
    validate_hyper(hyper);
    // q = sigmoid(l1 - l0), l_k = log A_k - ||w||^2 / (2 sigma_k^2).
    const double log_odds = log_prior_odds(hyper, first_layer_width) +
                            norm_sq * (1.0 / (2.0 * hyper.spike_var) -
                                       1.0 / (2.0 * hyper.slab_var));
    if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
    const double e = std::exp(log_odds);
    return e / (1.0 + e);
}

Eigen::VectorXd pip(const NetworkParams& params, const SparsityHyper& hyper) {
    const int J = params.input_dim();
    const int L1 = params.first_layer_width();
    Eigen::VectorXd q(J);
    for (int j = 0; j < J; ++j)
        q[j] = pip_from_norm_sq(params.weights[0].col(j).squaredNorm(), L1, hyper);
    return q;
}

void add_prior_grad(const NetworkParams& params, const SparsityHyper& hyper,
                    GradientBuffer& grad) {
    validate_hyper(hyper);
    const int J = params.input_dim();
    const int L1 = params.first_layer_width();
    for (int j = 0; j < J; ++j) {
        const double nsq = params.weights[0].col(j).squaredNorm();
        const double q = pip_from_norm_sq(nsq, L1, hyper);
        const double shrink = q / hyper.slab_var + (1.0 - q) / hyper.spike_var;
        grad.weights[0].col(j) += shrink * params.weights[0].col(j);
    }
    const double inv_s = 1.0 / hyper.deep_var;
    for (int h = 0; h < params.num_layers(); ++h) {
        if (h > 0) grad.weights[h] += inv_s * params.weights[h];
        grad.biases[h] += inv_s * params.biases[h];
    }
}

GradientBuffer prior_grad(const NetworkParams& params, const SparsityHyper& hyper) {
    GradientBuffer g = zero_like(params);
    add_prior_grad(params, hyper, g);
    return g;
}

double norm_threshold(const SparsityHyper& hyper, int first_layer_width) {
    validate_hyper(hyper);
    const double denom = 1.0 / (2.0 * hyper.spike_var) - 1.0 / (2.0 * hyper.slab_var);
    const double numer = std::log1p(-hyper.lambda) - std::log(hyper.lambda) +
                         0.5 * first_layer_width *
                             (std::log(hyper.slab_var) - std::log(hyper.spike_var));
    return numer / denom;
}

}  // namespace funcsel
