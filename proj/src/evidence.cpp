#include "funcsel/evidence.hpp"

#include <cmath>
#include <iostream>

#include "funcsel/errors.hpp"
#include "funcsel/trainer.hpp"

namespace funcsel {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

int SparsifiedParams::retained_columns() const {
    int k = 0;
    for (bool m : mask) k += m ? 1 : 0;
    return k;
}

SparsifiedParams sparsify(const NetworkParams& params, const SparsityHyper& hyper) {
    const double tau = norm_threshold(hyper, params.first_layer_width());
    SparsifiedParams out;
    out.params = params;
    const int J = params.input_dim();
    out.mask.resize(J);
    for (int j = 0; j < J; ++j) {
        out.mask[j] = params.weights[0].col(j).squaredNorm() > tau;
        if (!out.mask[j]) out.params.weights[0].col(j).setZero();
    }
    return out;
}

std::vector<long> restricted_indices(const SparsifiedParams& sp) {
    const NetworkParams& p = sp.params;
    std::vector<long> idx;
    idx.reserve(p.flat_size());
    long pos = 0;
    for (int h = 0; h < p.num_layers(); ++h) {
        const auto& W = p.weights[h];
        for (Eigen::Index a = 0; a < W.rows(); ++a)
            for (Eigen::Index b = 0; b < W.cols(); ++b) {
                if (h != 0 || sp.mask[b]) idx.push_back(pos);
                ++pos;
            }
        pos += p.biases[h].size();
        for (long k = pos - p.biases[h].size(); k < pos; ++k) idx.push_back(k);
    }
    return idx;
}

Eigen::MatrixXd hessian_fd(const GradFn& grad, const Eigen::VectorXd& x0, double fd_step) {
    if (fd_step <= 0.0) throw ConfigError("finite-difference step must be positive");
    const auto d = x0.size();
    Eigen::MatrixXd H(d, d);
    Eigen::VectorXd x = x0;
    for (Eigen::Index k = 0; k < d; ++k) {
        x[k] = x0[k] + fd_step;
        const Eigen::VectorXd gp = grad(x);
        x[k] = x0[k] - fd_step;
        const Eigen::VectorXd gm = grad(x);
        x[k] = x0[k];
        H.col(k) = (gp - gm) / (2.0 * fd_step);
    }
    if (!H.allFinite())
        throw NumericalError("non-finite entries in finite-difference Hessian");
    return 0.5 * (H + H.transpose());
}

EvidenceReport laplace_from_grad(double h_at_mode, const GradFn& grad_of_h,
                                 const Eigen::VectorXd& x0, long n_train,
                                 const LaplaceOptions& opts) {
    const int d = static_cast<int>(x0.size());
    EvidenceReport rep;
    rep.retained_dim = d;
    rep.n_train = n_train;
    rep.jitter_used = opts.jitter;
    const double n = static_cast<double>(n_train);

    if (d == 0) {
        rep.log_evidence = n * h_at_mode;
        return rep;
    }

    const Eigen::MatrixXd H = hessian_fd(grad_of_h, x0, opts.fd_step);
    Eigen::MatrixXd negH = -H;
    negH.diagonal().array() += opts.jitter;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(negH, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of the negative Hessian failed");

    double sum_log = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        double ev = eig.eigenvalues()[k];
        if (ev < opts.eig_floor) {
            ev = opts.eig_floor;
            ++rep.clamped_eigs;
        }
        sum_log += std::log(ev);
    }
    rep.logdet_term = -0.5 * sum_log;
    rep.log_evidence = n * h_at_mode + 0.5 * d * kLog2Pi - 0.5 * d * std::log(n) +
                       rep.logdet_term;
    if (!std::isfinite(rep.log_evidence))
        throw NumericalError("log-evidence is not finite");
    return rep;
}

namespace {

// h(theta) = -objective(theta)/n as a function of the restricted coordinates,
// with excluded first-layer columns pinned at zero.
struct RestrictedSurrogate {
    const SparsifiedParams* sp;
    const Eigen::MatrixXd* X;
    const Eigen::VectorXd* y;
    const SparsityHyper* hyper;
    std::vector<long> idx;
    Eigen::VectorXd base_flat;

    Eigen::VectorXd mode() const {
        Eigen::VectorXd v(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) v[k] = base_flat[idx[k]];
        return v;
    }

    NetworkParams assemble(const Eigen::VectorXd& v) const {
        Eigen::VectorXd flat = base_flat;
        for (std::size_t k = 0; k < idx.size(); ++k) flat[idx[k]] = v[k];
        NetworkParams p = sp->params;
        p.from_flat(flat);
        return p;
    }

    double value(const Eigen::VectorXd& v) const {
        const NetworkParams p = assemble(v);
        return -objective(p, *X, *y, *hyper) / static_cast<double>(y->size());
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& v) const {
        const NetworkParams p = assemble(v);
        const Eigen::VectorXd full = objective_grad(p, *X, *y, *hyper).to_flat();
        Eigen::VectorXd g(idx.size());
        const double n = static_cast<double>(y->size());
        for (std::size_t k = 0; k < idx.size(); ++k) g[k] = -full[idx[k]] / n;
        return g;
    }
};

RestrictedSurrogate make_surrogate(const SparsifiedParams& sp, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y, const SparsityHyper& hyper,
                                   const LaplaceOptions& opts) {
    validate_hyper(hyper);
    RestrictedSurrogate s{&sp, &X, &y, &hyper, restricted_indices(sp), sp.params.to_flat()};
    const int d = static_cast<int>(s.idx.size());
    if (d > opts.dim_cap)
        throw EvidenceTooLargeError("retained dimension " + std::to_string(d) +
                                        " exceeds the evidence cap " +
                                        std::to_string(opts.dim_cap) +
                                        "; use the validation criterion instead",
                                    d, opts.dim_cap);
    return s;
}

}  // namespace

Eigen::MatrixXd restricted_hessian(const SparsifiedParams& sparsified,
                                   const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& responses,
                                   const SparsityHyper& hyper, const LaplaceOptions& opts) {
    const RestrictedSurrogate s = make_surrogate(sparsified, features, responses, hyper, opts);
    return hessian_fd([&s](const Eigen::VectorXd& v) { return s.gradient(v); }, s.mode(),
                      opts.fd_step);
}

EvidenceReport laplace_log_evidence(const SparsifiedParams& sparsified,
                                    const Eigen::MatrixXd& features,
                                    const Eigen::VectorXd& responses,
                                    const SparsityHyper& hyper, const LaplaceOptions& opts) {
    const RestrictedSurrogate s = make_surrogate(sparsified, features, responses, hyper, opts);
    const Eigen::VectorXd x0 = s.mode();
    const double grad_inf = x0.size() > 0 ? s.gradient(x0).cwiseAbs().maxCoeff() : 0.0;
    if (grad_inf > 1e-2)
        std::cerr << "[funcsel] warning: gradient at evidence mode has max |g| = "
                  << grad_inf << "; Laplace approximation may be poor\n";
    return laplace_from_grad(s.value(x0), [&s](const Eigen::VectorXd& v) { return s.gradient(v); },
                             x0, responses.size(), opts);
}

}  // namespace funcsel
