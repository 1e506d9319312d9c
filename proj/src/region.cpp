#include "funcsel/region.hpp"

#include <algorithm>
#include <cmath>

#include "funcsel/errors.hpp"

namespace funcsel {

double Region::measure() const {
    double m = 0.0;
    for (const auto& [a, b] : intervals) m += b - a;
    return m;
}

Region make_region(std::vector<std::pair<double, double>> intervals) {
    for (const auto& [a, b] : intervals)
        if (!(a <= b)) throw ConfigError("interval endpoints out of order");
    std::sort(intervals.begin(), intervals.end());
    Region out;
    for (const auto& iv : intervals) {
        if (!out.intervals.empty() && iv.first <= out.intervals.back().second) {
            out.intervals.back().second = std::max(out.intervals.back().second, iv.second);
        } else {
            out.intervals.push_back(iv);
        }
    }
    return out;
}

Region intersect(const Region& a, const Region& b) {
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0, j = 0;
    while (i < a.intervals.size() && j < b.intervals.size()) {
        const double lo = std::max(a.intervals[i].first, b.intervals[j].first);
        const double hi = std::min(a.intervals[i].second, b.intervals[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a.intervals[i].second < b.intervals[j].second) ++i; else ++j;
    }
    return make_region(std::move(out));
}

std::vector<int> select_features(const Eigen::VectorXd& pips, double tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw ConfigError("selection threshold must be in (0,1)");
    std::vector<int> out;
    for (Eigen::Index j = 0; j < pips.size(); ++j)
        if (pips[j] > tau) out.push_back(static_cast<int>(j));
    return out;
}

Region features_to_region(const std::vector<int>& selected, const SplineBasis& basis) {
    std::vector<std::pair<double, double>> ivs;
    ivs.reserve(selected.size());
    for (int j : selected) {
        if (j < 0 || j >= basis.count)
            throw ConfigError("selected feature index out of range: " + std::to_string(j));
        ivs.push_back(basis.supports[j]);
    }
    return make_region(std::move(ivs));
}

RegionMetrics region_metrics(const Region& estimated, const Region& truth) {
    const double inter = intersect(estimated, truth).measure();
    const double m_true = truth.measure();
    const double m_est = estimated.measure();
    RegionMetrics m;
    m.recall = m_true > 0.0 ? inter / m_true : 1.0;
    m.precision = m_est > 0.0 ? inter / m_est : (m_true > 0.0 ? 0.0 : 1.0);
    const double pr = m.precision + m.recall;
    m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
    return m;
}

std::pair<double, double> prediction_metrics(const Eigen::VectorXd& y_hat,
                                             const Eigen::VectorXd& y_true) {
    if (y_hat.size() != y_true.size())
        throw DataError("prediction and target vectors differ in length");
    if (y_hat.size() == 0) throw DataError("prediction metrics need at least one value");
    const Eigen::ArrayXd r = (y_hat - y_true).array();
    const double n = static_cast<double>(y_hat.size());
    return {std::sqrt(r.square().sum() / n), r.abs().sum() / n};
}

}  // namespace funcsel
