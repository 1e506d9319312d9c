#include "funcsel/selector.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "funcsel/errors.hpp"
#include "funcsel/rng.hpp"

namespace funcsel {

Criterion criterion_from_name(const std::string& name) {
    if (name == "evidence") return Criterion::Evidence;
    if (name == "val") return Criterion::Val;
    throw ConfigError("unknown criterion '" + name + "' (evidence/val)");
}

const char* criterion_name(Criterion c) {
    return c == Criterion::Evidence ? "evidence" : "val";
}

void validate_selector_config(const SelectorConfig& config) {
    if (config.j_candidates.empty()) throw ConfigError("candidate list for J is empty");
    for (int j : config.j_candidates)
        if (j < config.spline_degree + 1)
            throw ConfigError("candidate J=" + std::to_string(j) +
                              " is below degree+1=" + std::to_string(config.spline_degree + 1));
    validate_train_config(config.train);
    validate_hyper(config.hyper);
}

void aggregate_scores(CandidateScores& row) {
    double val_sum = 0.0, ev_sum = 0.0;
    int val_n = 0, ev_n = 0;
    for (const auto& r : row.restarts) {
        if (r.diverged) continue;
        val_sum += r.val_mse;
        ++val_n;
        if (r.log_evidence) {
            ev_sum += *r.log_evidence;
            ++ev_n;
        }
    }
    row.mean_val = val_n > 0 ? std::optional<double>(val_sum / val_n) : std::nullopt;
    row.mean_evidence = ev_n > 0 ? std::optional<double>(ev_sum / ev_n) : std::nullopt;
}

SelectionChoice choose_from_scores(const std::vector<CandidateScores>& table,
                                   Criterion criterion) {
    if (table.empty()) throw ConfigError("empty score table");

    SelectionChoice choice;
    choice.used = criterion;
    if (criterion == Criterion::Evidence) {
        const bool any_evidence =
            std::any_of(table.begin(), table.end(),
                        [](const CandidateScores& c) { return c.mean_evidence.has_value(); });
        if (!any_evidence) {
            std::cerr << "[funcsel] warning: no candidate has an evidence score; "
                         "falling back to the validation criterion\n";
            choice.used = Criterion::Val;
            choice.fell_back_to_val = true;
        }
    }

    int best_idx = -1;
    double best_score = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& row = table[i];
        std::optional<double> score;
        if (choice.used == Criterion::Evidence) {
            if (row.mean_evidence) score = *row.mean_evidence;      // maximize
        } else if (row.mean_val) {
            score = -*row.mean_val;                                  // minimize
        }
        if (!score) continue;
        // Strict inequality keeps the smaller J on ties (table is in
        // candidate order).
        if (best_idx < 0 || *score > best_score) {
            best_idx = static_cast<int>(i);
            best_score = *score;
        }
    }
    if (best_idx < 0)
        throw NumericalError("no candidate J has a usable score (all restarts diverged)");

    const auto& best_row = table[best_idx];
    choice.j_star = best_row.j;
    int r_star = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < best_row.restarts.size(); ++r) {
        if (best_row.restarts[r].diverged) continue;
        if (best_row.restarts[r].val_mse < best_val) {
            best_val = best_row.restarts[r].val_mse;
            r_star = static_cast<int>(r);
        }
    }
    if (r_star < 0)
        throw NumericalError("selected candidate has no surviving restart");
    choice.r_star = r_star;
    return choice;
}

namespace {

struct CandidateFit {
    CandidateScores scores;
    SplineBasis basis;
    std::vector<std::optional<NetworkParams>> params;  // per restart
    std::vector<std::vector<bool>> masks;
};

}  // namespace

SelectionResult run_selection(const FunctionalDataset& dataset, const SelectorConfig& config) {
    validate_selector_config(config);
    dataset.validate_for_fitting();

    const ResponseStats stats = training_stats(dataset);
    CurveSet all_curves = dataset.curve_set();

    const auto train_rows = dataset.rows_of(Split::Train);
    const auto val_rows = dataset.rows_of(Split::Val);
    const Eigen::VectorXd y_train =
        standardize(dataset.responses_of(Split::Train), stats);
    const Eigen::VectorXd y_val = standardize(dataset.responses_of(Split::Val), stats);

    std::vector<CandidateFit> fits;
    fits.reserve(config.j_candidates.size());

    for (int J : config.j_candidates) {
        CandidateFit fit;
        fit.basis = build_basis(J, config.spline_degree);
        CurveSet curves = all_curves;
        if (config.denoise_curves) curves = denoise(curves, fit.basis);
        const Eigen::MatrixXd features = project(curves, fit.basis);

        Eigen::MatrixXd Xtr(train_rows.size(), J), Xva(val_rows.size(), J);
        for (std::size_t k = 0; k < train_rows.size(); ++k) Xtr.row(k) = features.row(train_rows[k]);
        for (std::size_t k = 0; k < val_rows.size(); ++k) Xva.row(k) = features.row(val_rows[k]);

        TrainConfig tc = config.train;
        // Seeds depend on (J, r) only, so results are order independent.
        tc.seed = derive_seed(config.train.seed, static_cast<std::uint64_t>(J));
        std::vector<RestartOutcome> outcomes;
        try {
            outcomes = fit_restarts(Xtr, y_train, Xva, y_val, config.hyper, tc);
        } catch (const DivergenceError& e) {
            std::cerr << "[funcsel] warning: candidate J=" << J << " excluded: " << e.what()
                      << "\n";
            fit.scores.j = J;
            fit.scores.restarts.assign(config.train.restarts,
                                       RestartScore{true, e.what(), 0.0, std::nullopt, ""});
            fit.params.assign(config.train.restarts, std::nullopt);
            fit.masks.assign(config.train.restarts, {});
            aggregate_scores(fit.scores);
            fits.push_back(std::move(fit));
            continue;
        }

        fit.scores.j = J;
        for (const auto& outcome : outcomes) {
            RestartScore score;
            if (!outcome.ok()) {
                score.diverged = true;
                score.error = outcome.error;
                fit.params.emplace_back(std::nullopt);
                fit.masks.emplace_back();
            } else {
                const FitRecord& rec = *outcome.record;
                score.val_mse = rec.val_mse;
                SparsifiedParams sp = sparsify(rec.params, config.hyper);
                if (config.criterion == Criterion::Evidence) {
                    try {
                        score.log_evidence =
                            laplace_log_evidence(sp, Xtr, y_train, config.hyper, config.laplace)
                                .log_evidence;
                    } catch (const EvidenceTooLargeError& e) {
                        score.evidence_error = e.what();
                    } catch (const NumericalError& e) {
                        score.evidence_error = e.what();
                    }
                }
                fit.params.emplace_back(rec.params);
                fit.masks.push_back(sp.mask);
            }
            fit.scores.restarts.push_back(std::move(score));
        }
        aggregate_scores(fit.scores);
        fits.push_back(std::move(fit));
    }

    std::vector<CandidateScores> table;
    table.reserve(fits.size());
    for (const auto& f : fits) table.push_back(f.scores);

    SelectionResult result;
    result.choice = choose_from_scores(table, config.criterion);
    result.j_star = result.choice.j_star;
    result.r_star = result.choice.r_star;
    result.per_j = std::move(table);
    result.stats = stats;
    result.grid = dataset.grid;

    for (auto& f : fits) {
        if (f.scores.j != result.j_star) continue;
        result.basis = f.basis;
        result.final_params = *f.params[result.r_star];
        result.final_mask = f.masks[result.r_star];
        for (auto& p : f.params)
            if (p) result.ensemble.push_back(std::move(*p));
        break;
    }

    result.pips = pip(result.final_params, config.hyper);
    std::vector<int> selected;
    for (std::size_t j = 0; j < result.final_mask.size(); ++j)
        if (result.final_mask[j]) selected.push_back(static_cast<int>(j));
    result.region = features_to_region(selected, result.basis);
    return result;
}

Eigen::VectorXd predict_ensemble(const SelectionResult& result, const CurveSet& curves) {
    if (curves.grid.size() != result.grid.size() ||
        (curves.grid - result.grid).cwiseAbs().maxCoeff() > 1e-12)
        throw DataError("prediction curves are not on the fitted grid");
    const Eigen::MatrixXd features = project(curves, result.basis);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(curves.values.rows());
    for (const auto& model : result.ensemble) mean += forward_batch(model, features);
    mean /= static_cast<double>(result.ensemble.size());
    return destandardize(mean, result.stats);
}

double predict_point(const NetworkParams& params, const SplineBasis& basis,
                     const ResponseStats& stats, const CurveSet& curve) {
    const Eigen::MatrixXd features = project(curve, basis);
    const Eigen::VectorXd out = destandardize(forward_batch(params, features), stats);
    return out[0];
}

}  // namespace funcsel
