#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "funcsel/spline.hpp"

namespace funcsel {

enum class Split { Train, Val, Test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

/// Training-set response statistics used for standardization.
struct ResponseStats {
    double mean = 0.0;
    double sd = 1.0;
};

/// Curves on a shared grid with scalar responses and split labels.
struct FunctionalDataset {
    Eigen::VectorXd grid;      // length L
    Eigen::MatrixXd curves;    // n x L
    Eigen::VectorXd responses; // length n
    std::vector<Split> split;  // length n

    long size() const { return curves.rows(); }
    std::vector<long> rows_of(Split s) const;
    Eigen::MatrixXd curves_of(Split s) const;
    Eigen::VectorXd responses_of(Split s) const;
    CurveSet curve_set() const { return CurveSet{grid, curves}; }

    /// Throws DataError when shapes disagree or train/val rows are missing.
    void validate_for_fitting() const;
};

/// Mean/sd of the training responses. Throws DataError when sd is zero.
ResponseStats training_stats(const FunctionalDataset& data);

Eigen::VectorXd standardize(const Eigen::VectorXd& responses, const ResponseStats& stats);
Eigen::VectorXd destandardize(const Eigen::VectorXd& responses, const ResponseStats& stats);

/// Wide CSV: header `t_<g1>,...,t_<gL>,response,split`; grid values live in
/// the header; one curve per row. A missing split column gets the
/// deterministic 70/15/15 assignment by row order.
FunctionalDataset load_csv(const std::string& path);
void save_csv(const FunctionalDataset& data, const std::string& path);

/// The default chronological 70/15/15 split for n rows.
std::vector<Split> default_split(long n);

}  // namespace funcsel
