#include "funcsel/spline.hpp"

#include <algorithm>
#include <cmath>

#include "funcsel/errors.hpp"

namespace funcsel {

SplineBasis build_basis(int count, int degree) {
    if (degree < 1)
        throw ConfigError("spline degree must be >= 1, got " + std::to_string(degree));
    if (count < degree + 1)
        throw ConfigError("basis count J=" + std::to_string(count) +
                          " must be >= degree+1=" + std::to_string(degree + 1));
    SplineBasis basis;
    basis.degree = degree;
    basis.count = count;
    const int p = degree, J = count;
    const int interior = J - p - 1;
    basis.knots.resize(J + p + 1);
    for (int i = 0; i <= p; ++i) basis.knots[i] = 0.0;
    for (int k = 1; k <= interior; ++k)
        basis.knots[p + k] = static_cast<double>(k) / (interior + 1);
    for (int i = J; i <= J + p; ++i) basis.knots[i] = 1.0;

    basis.supports.reserve(J);
    for (int j = 0; j < J; ++j)
        basis.supports.emplace_back(basis.knots[j], basis.knots[j + p + 1]);
    return basis;
}

namespace {

// Knot span index k with knots[k] <= t < knots[k+1]; the last span is closed.
int find_span(const SplineBasis& basis, double t) {
    const int p = basis.degree, J = basis.count;
    if (t >= 1.0) return J - 1;
    auto first = basis.knots.begin() + p;
    auto last = basis.knots.begin() + J + 1;
    auto it = std::upper_bound(first, last, t);
    return static_cast<int>(it - basis.knots.begin()) - 1;
}

}  // namespace

Eigen::VectorXd basis_values(const SplineBasis& basis, double t) {
    if (t < 0.0 || t > 1.0)
        throw ConfigError("basis evaluation point outside [0,1]: " + std::to_string(t));
    const int p = basis.degree;
    const int span = find_span(basis, t);

    // Cox-de Boor triangle over the p+1 basis functions alive on this span.
    std::vector<double> vals(p + 1, 0.0), left(p + 1), right(p + 1);
    vals[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - basis.knots[span + 1 - j];
        right[j] = basis.knots[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = vals[r] / (right[r + 1] + left[j - r]);
            vals[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        vals[j] = saved;
    }

    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.count);
    for (int r = 0; r <= p; ++r) out[span - p + r] = vals[r];
    return out;
}

double eval_basis(const SplineBasis& basis, int j, double t) {
    if (j < 0 || j >= basis.count)
        throw ConfigError("basis index out of range: " + std::to_string(j));
    return basis_values(basis, t)[j];
}

void check_grid(const Eigen::VectorXd& grid, int degree) {
    const auto L = grid.size();
    if (L < degree + 2)
        throw DataError("grid has " + std::to_string(L) + " points; need at least degree+2");
    if (grid[0] < 0.0 || grid[L - 1] > 1.0)
        throw DataError("grid points must lie in [0,1]");
    for (Eigen::Index l = 1; l < L; ++l)
        if (grid[l] <= grid[l - 1])
            throw DataError("grid points must be strictly increasing (violation at index " +
                            std::to_string(l) + ")");
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
    const auto L = grid.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(L);
    for (Eigen::Index l = 0; l + 1 < L; ++l) {
        const double h = grid[l + 1] - grid[l];
        w[l] += 0.5 * h;
        w[l + 1] += 0.5 * h;
    }
    return w;
}

namespace {

// L x J matrix of basis values on the grid.
Eigen::MatrixXd basis_on_grid(const CurveSet& curves, const SplineBasis& basis) {
    check_grid(curves.grid, basis.degree);
    if (curves.values.cols() != curves.grid.size())
        throw DataError("curve rows have length " + std::to_string(curves.values.cols()) +
                        " but the grid has " + std::to_string(curves.grid.size()) + " points");
    Eigen::MatrixXd B(curves.grid.size(), basis.count);
    for (Eigen::Index l = 0; l < curves.grid.size(); ++l)
        B.row(l) = basis_values(basis, curves.grid[l]).transpose();
    return B;
}

}  // namespace

Eigen::MatrixXd project(const CurveSet& curves, const SplineBasis& basis) {
    const Eigen::MatrixXd B = basis_on_grid(curves, basis);
    const Eigen::VectorXd w = trapezoid_weights(curves.grid);
    return curves.values * (w.asDiagonal() * B);
}

CurveSet denoise(const CurveSet& curves, const SplineBasis& basis) {
    const Eigen::MatrixXd B = basis_on_grid(curves, basis);
    if (B.rows() < B.cols())
        throw NumericalError("denoise needs at least as many grid points as basis functions (L=" +
                             std::to_string(B.rows()) + ", J=" + std::to_string(B.cols()) + ")");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    if (qr.rank() < B.cols())
        throw NumericalError("denoise design matrix is rank deficient");
    CurveSet out;
    out.grid = curves.grid;
    out.values.resizeLike(curves.values);
    for (Eigen::Index i = 0; i < curves.values.rows(); ++i) {
        const Eigen::VectorXd coef = qr.solve(curves.values.row(i).transpose());
        out.values.row(i) = (B * coef).transpose();
    }
    return out;
}

}  // namespace funcsel
