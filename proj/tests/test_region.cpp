#include <doctest.h>

#include "funcsel/errors.hpp"
#include "funcsel/region.hpp"

using namespace funcsel;

TEST_CASE("make_region sorts, merges overlaps, and merges touching intervals") {
    const Region r = make_region({{0.6, 0.8}, {0.1, 0.3}, {0.3, 0.4}, {0.75, 0.9}});
    REQUIRE(r.intervals.size() == 2);
    CHECK(r.intervals[0].first == doctest::Approx(0.1));
    CHECK(r.intervals[0].second == doctest::Approx(0.4));
    CHECK(r.intervals[1].first == doctest::Approx(0.6));
    CHECK(r.intervals[1].second == doctest::Approx(0.9));
    CHECK(r.measure() == doctest::Approx(0.6));
    CHECK(make_region({}).empty());
    CHECK(make_region({}).measure() == 0.0);
}

TEST_CASE("intersection by interval arithmetic") {
    const Region a = make_region({{0.0, 0.5}, {0.7, 1.0}});
    const Region b = make_region({{0.4, 0.8}});
    const Region i = intersect(a, b);
    REQUIRE(i.intervals.size() == 2);
    CHECK(i.intervals[0].first == doctest::Approx(0.4));
    CHECK(i.intervals[0].second == doctest::Approx(0.5));
    CHECK(i.intervals[1].first == doctest::Approx(0.7));
    CHECK(i.intervals[1].second == doctest::Approx(0.8));
    CHECK(intersect(a, make_region({})).empty());
}

TEST_CASE("feature selection is a strict threshold") {
    Eigen::VectorXd q(5);
    q << 0.1, 0.5, 0.50000001, 0.9, 0.49;
    const auto sel = select_features(q, 0.5);
    REQUIRE(sel.size() == 2);
    CHECK(sel[0] == 2);
    CHECK(sel[1] == 3);
    CHECK_THROWS_AS(select_features(q, 0.0), ConfigError);
    CHECK_THROWS_AS(select_features(q, 1.0), ConfigError);
}

TEST_CASE("selected features map to merged basis supports") {
    const SplineBasis basis = build_basis(5, 1);  // hats with knots at k/4
    // bases 0 and 1 touch, basis 4 is separate
    const Region r = features_to_region({0, 1, 4}, basis);
    REQUIRE(r.intervals.size() == 2);
    CHECK(r.intervals[0].first == doctest::Approx(0.0));
    CHECK(r.intervals[0].second == doctest::Approx(0.5));
    CHECK(r.intervals[1].first == doctest::Approx(0.75));
    CHECK(r.intervals[1].second == doctest::Approx(1.0));
    CHECK(features_to_region({}, basis).empty());
    CHECK_THROWS_AS(features_to_region({5}, basis), ConfigError);
    CHECK_THROWS_AS(features_to_region({-1}, basis), ConfigError);
}

TEST_CASE("region metrics on a worked overlap example") {
    const Region truth = make_region({{0.2, 0.6}});
    const Region est = make_region({{0.4, 0.9}});
    const RegionMetrics m = region_metrics(est, truth);
    CHECK(m.recall == doctest::Approx(0.2 / 0.4));
    CHECK(m.precision == doctest::Approx(0.2 / 0.5));
    CHECK(m.f1 == doctest::Approx(2 * 0.5 * 0.4 / (0.5 + 0.4)));
}

TEST_CASE("region metric conventions for empty sets") {
    const Region empty;
    const Region some = make_region({{0.1, 0.2}});
    // empty truth: recall 1; empty estimate too: precision 1, f1 1
    RegionMetrics m = region_metrics(empty, empty);
    CHECK(m.recall == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.f1 == doctest::Approx(1.0));
    // empty estimate, nonempty truth
    m = region_metrics(empty, some);
    CHECK(m.recall == 0.0);
    CHECK(m.precision == 0.0);
    CHECK(m.f1 == 0.0);
    // nonempty estimate, empty truth
    m = region_metrics(some, empty);
    CHECK(m.recall == 1.0);
    CHECK(m.precision == 0.0);
    CHECK(m.f1 == 0.0);
}

TEST_CASE("perfect region recovery scores 1 everywhere") {
    const Region r = make_region({{0.25, 0.45}, {0.6, 0.75}});
    const RegionMetrics m = region_metrics(r, r);
    CHECK(m.recall == doctest::Approx(1.0));
    CHECK(m.precision == doctest::Approx(1.0));
    CHECK(m.f1 == doctest::Approx(1.0));
}

TEST_CASE("prediction metrics on a worked example") {
    Eigen::VectorXd y_hat(4), y(4);
    y_hat << 3, 4, 0, 0;
    y << 0, 0, 0, 0;
    const auto [rmse, mae] = prediction_metrics(y_hat, y);
    CHECK(rmse == doctest::Approx(2.5));
    CHECK(mae == doctest::Approx(1.75));
    Eigen::VectorXd short_y(3);
    CHECK_THROWS_AS(prediction_metrics(y_hat, short_y), DataError);
    Eigen::VectorXd none;
    CHECK_THROWS_AS(prediction_metrics(none, none), DataError);
}
