#include "funcsel/network.hpp"

#include <cmath>

#include "funcsel/errors.hpp"
#include "funcsel/rng.hpp"

namespace funcsel {

namespace {

void check_widths(const std::vector<int>& widths) {
    if (widths.size() < 3)
        throw ConfigError("network needs at least one hidden layer (H >= 2)");
    if (widths.back() != 1)
        throw ConfigError("output width must be 1");
    for (int w : widths)
        if (w < 1) throw ConfigError("layer widths must be positive");
}

}  // namespace

long NetworkParams::flat_size() const {
    long k = 0;
    for (int h = 0; h < num_layers(); ++h)
        k += weights[h].size() + biases[h].size();
    return k;
}

Eigen::VectorXd NetworkParams::to_flat() const {
    Eigen::VectorXd flat(flat_size());
    long pos = 0;
    for (int h = 0; h < num_layers(); ++h) {
        const auto& W = weights[h];
        for (Eigen::Index a = 0; a < W.rows(); ++a)
            for (Eigen::Index b = 0; b < W.cols(); ++b) flat[pos++] = W(a, b);
        for (Eigen::Index a = 0; a < biases[h].size(); ++a) flat[pos++] = biases[h][a];
    }
    return flat;
}

void NetworkParams::from_flat(const Eigen::VectorXd& flat) {
    if (flat.size() != flat_size())
        throw ShapeError("flat parameter vector has wrong length");
    long pos = 0;
    for (int h = 0; h < num_layers(); ++h) {
        auto& W = weights[h];
        for (Eigen::Index a = 0; a < W.rows(); ++a)
            for (Eigen::Index b = 0; b < W.cols(); ++b) W(a, b) = flat[pos++];
        for (Eigen::Index a = 0; a < biases[h].size(); ++a) biases[h][a] = flat[pos++];
    }
}

NetworkParams make_network(const std::vector<int>& widths) {
    check_widths(widths);
    NetworkParams p;
    for (std::size_t h = 1; h < widths.size(); ++h) {
        p.weights.emplace_back(Eigen::MatrixXd::Zero(widths[h], widths[h - 1]));
        p.biases.emplace_back(Eigen::VectorXd::Zero(widths[h]));
    }
    return p;
}

NetworkParams init_network(const std::vector<int>& widths, std::uint64_t seed) {
    NetworkParams p = make_network(widths);
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& W : p.weights) {
        const double sd = std::sqrt(2.0 / static_cast<double>(W.cols()));
        for (Eigen::Index a = 0; a < W.rows(); ++a)
            for (Eigen::Index b = 0; b < W.cols(); ++b) W(a, b) = sd * normal(rng);
    }
    return p;
}

GradientBuffer zero_like(const NetworkParams& params) {
    GradientBuffer g;
    for (const auto& W : params.weights) g.weights.emplace_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
    for (const auto& b : params.biases) g.biases.emplace_back(Eigen::VectorXd::Zero(b.size()));
    return g;
}

Eigen::VectorXd forward_batch(const NetworkParams& params, const Eigen::MatrixXd& features) {
    if (features.cols() != params.input_dim())
        throw ShapeError("feature dimension " + std::to_string(features.cols()) +
                         " does not match network input " + std::to_string(params.input_dim()));
    const int H = params.num_layers();
    Eigen::MatrixXd act = features;
    for (int h = 0; h < H; ++h) {
        Eigen::MatrixXd z = (act * params.weights[h].transpose()).rowwise() +
                            params.biases[h].transpose();
        if (h + 1 < H) z = z.cwiseMax(0.0);
        act = std::move(z);
    }
    return act.col(0);
}

double forward(const NetworkParams& params, const Eigen::VectorXd& features) {
    return forward_batch(params, features.transpose())[0];
}

double data_loss_and_grad(const NetworkParams& params, const Eigen::MatrixXd& features,
                          const Eigen::VectorXd& responses, double noise_var,
                          GradientBuffer& grad) {
    if (noise_var <= 0.0) throw ConfigError("noise variance must be positive");
    if (features.rows() == 0) throw ConfigError("empty batch");
    if (features.rows() != responses.size())
        throw ShapeError("batch size mismatch between features and responses");
    if (features.cols() != params.input_dim())
        throw ShapeError("feature dimension does not match network input");

    const int H = params.num_layers();
    // Forward pass keeping post-activation values per layer.
    std::vector<Eigen::MatrixXd> acts(H + 1);
    acts[0] = features;
    for (int h = 0; h < H; ++h) {
        Eigen::MatrixXd z = (acts[h] * params.weights[h].transpose()).rowwise() +
                            params.biases[h].transpose();
        if (h + 1 < H) z = z.cwiseMax(0.0);
        acts[h + 1] = std::move(z);
    }

    const Eigen::VectorXd residual = acts[H].col(0) - responses;
    const double loss = residual.squaredNorm() / (2.0 * noise_var);

    // Backward pass. delta holds d(loss)/d(pre-activation of layer h).
    Eigen::MatrixXd delta = residual / noise_var;  // batch x 1
    for (int h = H - 1; h >= 0; --h) {
        grad.weights[h].noalias() = delta.transpose() * acts[h];
        grad.biases[h] = delta.colwise().sum().transpose();
        if (h > 0) {
            // ReLU derivative: 1 where the post-activation is strictly positive.
            delta = (delta * params.weights[h]).array() *
                    (acts[h].array() > 0.0).cast<double>();
        }
    }
    return loss;
}

double data_loss(const NetworkParams& params, const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& responses, double noise_var) {
    if (noise_var <= 0.0) throw ConfigError("noise variance must be positive");
    const Eigen::VectorXd pred = forward_batch(params, features);
    return (pred - responses).squaredNorm() / (2.0 * noise_var);
}

}  // namespace funcsel
