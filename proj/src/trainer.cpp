#include "funcsel/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "funcsel/errors.hpp"
#include "funcsel/rng.hpp"

namespace funcsel {

void validate_train_config(const TrainConfig& c) {
    if (c.learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
    if (c.batch_size < 1) throw ConfigError("batch size must be positive");
    if (c.max_iters < 1) throw ConfigError("max_iters must be positive");
    if (c.patience_iters < 1) throw ConfigError("patience_iters must be positive");
    if (c.eval_every < 1) throw ConfigError("eval_every must be positive");
    if (c.eval_every > c.patience_iters)
        throw ConfigError("eval_every must not exceed patience_iters");
    if (c.restarts < 1) throw ConfigError("restarts must be >= 1");
    if (c.hidden_widths.empty()) throw ConfigError("at least one hidden layer is required");
}

double objective(const NetworkParams& params, const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& responses, const SparsityHyper& hyper) {
    return data_loss(params, features, responses, hyper.noise_var) +
           neg_log_marginal_prior(params, hyper);
}

GradientBuffer objective_grad(const NetworkParams& params, const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& responses, const SparsityHyper& hyper) {
    GradientBuffer g = zero_like(params);
    data_loss_and_grad(params, features, responses, hyper.noise_var, g);
    add_prior_grad(params, hyper, g);
    return g;
}

namespace {

double val_mse(const NetworkParams& params, const Eigen::MatrixXd& X,
               const Eigen::VectorXd& y) {
    return (forward_batch(params, X) - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

FitRecord fit_map(const Eigen::MatrixXd& Xtr, const Eigen::VectorXd& ytr,
                  const Eigen::MatrixXd& Xva, const Eigen::VectorXd& yva,
                  const SparsityHyper& hyper, const TrainConfig& config) {
    validate_train_config(config);
    validate_hyper(hyper);
    if (Xtr.rows() == 0 || Xva.rows() == 0)
        throw DataError("training and validation sets must be nonempty");
    if (Xtr.rows() != ytr.size() || Xva.rows() != yva.size())
        throw ShapeError("feature/response row counts do not match");

    const long n = Xtr.rows();
    const int J = static_cast<int>(Xtr.cols());

    std::vector<int> widths;
    widths.push_back(J);
    widths.insert(widths.end(), config.hidden_widths.begin(), config.hidden_widths.end());
    widths.push_back(1);

    NetworkParams params = init_network(widths, config.seed);
    GradientBuffer grad = zero_like(params);

    std::vector<long> order(n);
    std::iota(order.begin(), order.end(), 0L);
    long epoch = 0;
    long cursor = n;  // forces a shuffle on the first batch

    NetworkParams best = params;
    double best_val = std::numeric_limits<double>::infinity();
    long best_iter = 0;
    long iters = 0;

    Eigen::MatrixXd Xb(config.batch_size, J);
    Eigen::VectorXd yb(config.batch_size);

    for (long t = 0; t < config.max_iters; ++t) {
        iters = t + 1;

        if (t % config.eval_every == 0) {
            const double v = val_mse(params, Xva, yva);
            if (!std::isfinite(v))
                throw DivergenceError("validation MSE diverged at iteration " +
                                          std::to_string(t),
                                      t, config.learning_rate);
            if (v < best_val) {
                best_val = v;
                best = params;
                best_iter = t;
            } else if (t - best_iter >= config.patience_iters) {
                break;
            }
        }

        if (cursor >= n) {
            Rng shuffle_rng(derive_seed(config.seed, 0x53u, static_cast<std::uint64_t>(epoch)));
            std::shuffle(order.begin(), order.end(), shuffle_rng);
            cursor = 0;
            ++epoch;
        }
        const long b = std::min<long>(config.batch_size, n - cursor);
        Xb.resize(b, J);
        yb.resize(b);
        for (long i = 0; i < b; ++i) {
            Xb.row(i) = Xtr.row(order[cursor + i]);
            yb[i] = ytr[order[cursor + i]];
        }
        cursor += b;

        for (auto& W : grad.weights) W.setZero();
        for (auto& bb : grad.biases) bb.setZero();
        const double batch_loss = data_loss_and_grad(params, Xb, yb, hyper.noise_var, grad);
        if (!std::isfinite(batch_loss))
            throw DivergenceError("objective diverged at iteration " + std::to_string(t) +
                                      " (learning rate " + std::to_string(config.learning_rate) + ")",
                                  t, config.learning_rate);

        // Unbiased mini-batch gradient of the per-sample objective
        // (objective / n): rescale the stochastic data part to the full sum,
        // add the exact prior gradient, then divide by n in the step. The
        // per-sample scaling is what keeps the paper's learning rate stable
        // at the n=1000 / width-64 operating point.
        const double scale = static_cast<double>(n) / static_cast<double>(b);
        for (int h = 0; h < params.num_layers(); ++h) {
            grad.weights[h] *= scale;
            grad.biases[h] *= scale;
        }
        add_prior_grad(params, hyper, grad);

        const double step = config.learning_rate / static_cast<double>(n);
        for (int h = 0; h < params.num_layers(); ++h) {
            params.weights[h] -= step * grad.weights[h];
            params.biases[h] -= step * grad.biases[h];
        }
    }

    FitRecord rec;
    rec.params = std::move(best);
    rec.val_mse = best_val;
    rec.train_objective = objective(rec.params, Xtr, ytr, hyper);
    rec.iterations_run = iters;
    rec.seed_used = config.seed;
    if (!std::isfinite(rec.train_objective))
        throw DivergenceError("final objective is not finite", iters, config.learning_rate);
    return rec;
}

std::vector<RestartOutcome> fit_restarts(const Eigen::MatrixXd& Xtr, const Eigen::VectorXd& ytr,
                                         const Eigen::MatrixXd& Xva, const Eigen::VectorXd& yva,
                                         const SparsityHyper& hyper, const TrainConfig& config) {
    validate_train_config(config);
    std::vector<RestartOutcome> out(config.restarts);
    int failures = 0;
    for (int r = 0; r < config.restarts; ++r) {
        TrainConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(r) + 1;
        try {
            out[r].record = fit_map(Xtr, ytr, Xva, yva, hyper, c);
        } catch (const DivergenceError& e) {
            out[r].error = e.what();
            ++failures;
        }
    }
    if (failures == config.restarts)
        throw DivergenceError("all " + std::to_string(config.restarts) + " restarts diverged",
                              -1, config.learning_rate);
    return out;
}

}  // namespace funcsel
