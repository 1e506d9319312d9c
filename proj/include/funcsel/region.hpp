#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "funcsel/spline.hpp"

namespace funcsel {

/// Finite union of disjoint closed intervals in [0,1], sorted; intervals that
/// touch at a point are merged.
struct Region {
    std::vector<std::pair<double, double>> intervals;

    double measure() const;
    bool empty() const { return intervals.empty(); }
};

/// Builds a normalized Region from arbitrary (possibly overlapping) intervals.
Region make_region(std::vector<std::pair<double, double>> intervals);

/// Intersection by interval arithmetic.
Region intersect(const Region& a, const Region& b);

/// Indices (0-based) with q_j strictly above tau. Throws ConfigError unless
/// tau is in (0,1).
std::vector<int> select_features(const Eigen::VectorXd& pips, double tau);

/// Union of basis supports over the selected indices, adjacent components
/// merged. Throws ConfigError on out-of-range indices.
Region features_to_region(const std::vector<int>& selected, const SplineBasis& basis);

struct RegionMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

/// Lebesgue-measure recall/precision/F1 of an estimated region against the
/// truth. Empty-denominator conventions: |truth|=0 gives recall 1;
/// |estimate|=0 gives precision 1 iff |truth|=0, else 0.
RegionMetrics region_metrics(const Region& estimated, const Region& truth);

/// (RMSE, MAE) of predictions against targets. Throws DataError on length
/// mismatch or empty input.
std::pair<double, double> prediction_metrics(const Eigen::VectorXd& y_hat,
                                             const Eigen::VectorXd& y_true);

}  // namespace funcsel
