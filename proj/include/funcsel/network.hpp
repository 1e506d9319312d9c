#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace funcsel {

/// Feedforward ReLU network with a linear scalar output.
///
/// Layer h maps R^{L_{h-1}} -> R^{L_h} via W_h u + b_h; hidden layers apply
/// ReLU, the last layer is affine. The flat-parameter layout is canonical:
/// for each layer in order, the weight matrix row-major, then the bias.
struct NetworkParams {
    std::vector<Eigen::MatrixXd> weights;  // W_h: L_h x L_{h-1}
    std::vector<Eigen::VectorXd> biases;   // b_h: L_h

    int num_layers() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return static_cast<int>(weights.front().cols()); }
    int first_layer_width() const { return static_cast<int>(weights.front().rows()); }

    long flat_size() const;
    Eigen::VectorXd to_flat() const;
    void from_flat(const Eigen::VectorXd& flat);

    /// Flat index of first-layer weight W_1(a, j).
    long first_layer_flat_index(int a, int j) const {
        return static_cast<long>(a) * input_dim() + j;
    }
};

/// Same shape as NetworkParams; holds a gradient.
using GradientBuffer = NetworkParams;

/// widths = (L_0, L_1, ..., L_H) with L_H == 1. Validates dimensions.
NetworkParams make_network(const std::vector<int>& widths);

/// Seeded He-style initialization: weights ~ N(0, 2/fan_in), biases zero.
NetworkParams init_network(const std::vector<int>& widths, std::uint64_t seed);

/// Zero buffer shaped like params.
GradientBuffer zero_like(const NetworkParams& params);

/// Network output for a single feature vector.
double forward(const NetworkParams& params, const Eigen::VectorXd& features);

/// Network outputs for a batch (rows of `features`).
Eigen::VectorXd forward_batch(const NetworkParams& params, const Eigen::MatrixXd& features);

/// Squared-error data loss sum_i (y_i - f(x_i))^2 / (2 noise_var) and its
/// gradient by reverse-mode differentiation. ReLU subgradient at 0 is 0.
double data_loss_and_grad(const NetworkParams& params, const Eigen::MatrixXd& features,
                          const Eigen::VectorXd& responses, double noise_var,
                          GradientBuffer& grad);

/// Loss only (no gradient).
double data_loss(const NetworkParams& params, const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& responses, double noise_var);

}  // namespace funcsel
