#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace funcsel {

/// Clamped B-spline basis on [0,1] with equally spaced interior knots.
///
/// The knot vector has length J+p+1 with p+1 repeated endpoints at 0 and 1,
/// so the basis forms a partition of unity on the whole domain and each
/// basis function is supported on [knots[j], knots[j+p+1]].
struct SplineBasis {
    int degree = 0;                  // polynomial degree p >= 1
    int count = 0;                   // number of basis functions J >= p+1
    std::vector<double> knots;       // length J+p+1, nondecreasing on [0,1]
    std::vector<std::pair<double, double>> supports;  // closed intervals, one per basis
};

/// Builds the clamped uniform basis. Throws ConfigError if J < p+1.
SplineBasis build_basis(int count, int degree);

/// Values of all J basis functions at t (exact zeros outside the local span).
/// Throws ConfigError if t is outside [0,1].
Eigen::VectorXd basis_values(const SplineBasis& basis, double t);

/// Single basis function B_j(t), j in [0, J). Right-continuous at shared knots.
double eval_basis(const SplineBasis& basis, int j, double t);

/// Curves observed on a shared strictly increasing grid in [0,1].
struct CurveSet {
    Eigen::VectorXd grid;     // length L
    Eigen::MatrixXd values;   // n x L
};

/// Trapezoidal quadrature weights for a (possibly nonuniform) grid.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid);

/// Spline features x_{ij} ~ integral of X_i(t) B_j(t) dt by the trapezoidal
/// rule on the observation grid. Returns an n x J matrix.
Eigen::MatrixXd project(const CurveSet& curves, const SplineBasis& basis);

/// Least-squares fit of each curve in the span of the basis, evaluated back
/// on the grid. Throws NumericalError when the design is rank deficient
/// (in particular when L < J).
CurveSet denoise(const CurveSet& curves, const SplineBasis& basis);

/// Validates the grid contract: strictly increasing, inside [0,1], long enough
/// for the basis degree. Throws DataError on violation.
void check_grid(const Eigen::VectorXd& grid, int degree);

}  // namespace funcsel
