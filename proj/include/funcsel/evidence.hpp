#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "funcsel/network.hpp"
#include "funcsel/prior.hpp"

namespace funcsel {

/// MAP parameters with sub-threshold first-layer columns zeroed, plus the
/// column mask. Used only for evidence computation.
struct SparsifiedParams {
    NetworkParams params;
    std::vector<bool> mask;  // length J; true = column retained
    int retained_columns() const;
};

/// Zeroes every first-layer column whose squared norm is at or below tau_n.
SparsifiedParams sparsify(const NetworkParams& params, const SparsityHyper& hyper);

/// Flat indices of the free parameters under the surrogate: all biases, all
/// deep weights, and first-layer weights in retained columns.
std::vector<long> restricted_indices(const SparsifiedParams& sparsified);

struct LaplaceOptions {
    double fd_step = 1e-4;     // central-difference step for the Hessian
    double jitter = 1e-6;      // diagonal added to -H before eigendecomposition
    double eig_floor = 1e-10;  // eigenvalues below this are clamped (and counted)
    int dim_cap = 5000;        // hard cap on the dense eigendecomposition size
};

struct EvidenceReport {
    double log_evidence = 0.0;
    int retained_dim = 0;
    long n_train = 0;
    double logdet_term = 0.0;  // -1/2 sum log eigenvalues of the stabilized -H
    double jitter_used = 0.0;
    int clamped_eigs = 0;
};

/// Gradient of a scalar function at a point, as a callable.
using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Symmetric Hessian of the function whose gradient is `grad`, by central
/// finite differences (one +/- gradient pair per coordinate), symmetrized
/// as (M + M^T)/2. Throws NumericalError on non-finite entries.
Eigen::MatrixXd hessian_fd(const GradFn& grad, const Eigen::VectorXd& x0, double fd_step);

/// Laplace log-evidence around a mode of h (the per-sample log-posterior
/// surrogate):  n h(x0) + d/2 log(2 pi) - d/2 log n - 1/2 log det(-H),
/// with the log-determinant computed from stabilized eigenvalues of -H.
/// `grad_of_h` must be the gradient of h over the same coordinates as x0.
EvidenceReport laplace_from_grad(double h_at_mode, const GradFn& grad_of_h,
                                 const Eigen::VectorXd& x0, long n_train,
                                 const LaplaceOptions& opts = {});

/// Restricted Hessian of h(theta) = -objective(theta)/n over the retained
/// index set. Throws EvidenceTooLargeError when the retained dimension
/// exceeds opts.dim_cap.
Eigen::MatrixXd restricted_hessian(const SparsifiedParams& sparsified,
                                   const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& responses,
                                   const SparsityHyper& hyper,
                                   const LaplaceOptions& opts = {});

/// Laplace-approximated log-evidence of the sparsified network on the
/// training data. Warns (stderr) when the restricted gradient at the mode is
/// not small.
EvidenceReport laplace_log_evidence(const SparsifiedParams& sparsified,
                                    const Eigen::MatrixXd& features,
                                    const Eigen::VectorXd& responses,
                                    const SparsityHyper& hyper,
                                    const LaplaceOptions& opts = {});

}  // namespace funcsel
