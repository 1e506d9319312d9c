// Acceptance gate. One line per criterion: "CRITERION k: PASS/FAIL - note".
// Usage: funcsel_acceptance [fast|e2e|all]
//   fast: criteria 1,2,3,4,7,8 (oracles, invariants, determinism, arithmetic)
//   e2e:  criteria 5,6 (seeded end-to-end training replicates; slow)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "funcsel/experiment.hpp"
#include "funcsel/rng.hpp"
#include "funcsel/selector.hpp"
#include "funcsel/simulate.hpp"
#include "funcsel/trainer.hpp"

#include <nlohmann/json.hpp>

using namespace funcsel;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int k, bool pass, const std::string& note) {
    std::printf("CRITERION %d: %s - %s\n", k, pass ? "PASS" : "FAIL", note.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

// Full-objective gradient vs central finite differences on random small
// configurations. Draws where a hidden pre-activation sits on the ReLU kink
// are redrawn (the subgradient choice is arbitrary there by construction).
void criterion_gradient_oracle() {
    std::mt19937_64 meta(0xACC1);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> width_dist(2, 10);
    std::uniform_int_distribution<int> depth_dist(1, 3);
    std::uniform_int_distribution<int> batch_dist(1, 12);
    std::uniform_real_distribution<double> lam_dist(0.05, 0.95);
    std::uniform_real_distribution<double> logvar(-3.0, 0.0);

    int done = 0, attempts = 0;
    double worst = 0.0;
    while (done < 50 && attempts < 500) {
        ++attempts;
        std::vector<int> widths{width_dist(meta)};
        const int depth = depth_dist(meta);
        for (int h = 0; h < depth; ++h) widths.push_back(width_dist(meta));
        widths.push_back(1);

        NetworkParams p = init_network(widths, meta());
        for (auto& b : p.biases)
            for (int i = 0; i < b.size(); ++i) b[i] = 0.3 * normal(meta);

        const int n = batch_dist(meta);
        Eigen::MatrixXd X(n, widths.front());
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < widths.front(); ++j) X(i, j) = normal(meta);
            y[i] = normal(meta);
        }

        // reject configurations with a pre-activation on the kink
        bool near_kink = false;
        {
            Eigen::MatrixXd act = X;
            for (std::size_t h = 0; h + 1 < p.weights.size(); ++h) {
                Eigen::MatrixXd pre =
                    (act * p.weights[h].transpose()).rowwise() + p.biases[h].transpose();
                if (pre.cwiseAbs().minCoeff() < 1e-4) {
                    near_kink = true;
                    break;
                }
                act = pre.cwiseMax(0.0);
            }
        }
        if (near_kink) continue;

        SparsityHyper hyper;
        hyper.lambda = lam_dist(meta);
        hyper.spike_var = std::pow(10.0, logvar(meta));
        hyper.slab_var = hyper.spike_var * std::uniform_real_distribution<double>(2.0, 50.0)(meta);
        hyper.deep_var = std::pow(10.0, logvar(meta) * 0.5);
        hyper.noise_var = std::pow(10.0, logvar(meta) * 0.3);

        const Eigen::VectorXd analytic = objective_grad(p, X, y, hyper).to_flat();
        Eigen::VectorXd flat = p.to_flat();
        Eigen::VectorXd fd(flat.size());
        for (int k = 0; k < flat.size(); ++k) {
            const double h = 1e-5 * std::max(1.0, std::abs(flat[k]));
            Eigen::VectorXd fp = flat, fm = flat;
            fp[k] += h;
            fm[k] -= h;
            NetworkParams pp = p, pm = p;
            pp.from_flat(fp);
            pm.from_flat(fm);
            fd[k] = (objective(pp, X, y, hyper) - objective(pm, X, y, hyper)) / (2 * h);
        }
        const double rel = (fd - analytic).norm() / std::max(1e-300, analytic.norm());
        worst = std::max(worst, rel);
        ++done;
    }
    const bool pass = done == 50 && worst < 1e-6;
    report(1, pass,
           "analytic vs finite-difference objective gradient on " + std::to_string(done) +
               "/50 configurations, worst relative error " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 2

void criterion_pip_threshold() {
    std::mt19937_64 rng(0xACC2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> width_dist(4, 64);

    int equiv_bad = 0;
    double worst_half = 0.0, worst_logodds = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        SparsityHyper h;
        h.lambda = 1e-6 + 0.5 * unif(rng);
        h.spike_var = std::pow(10.0, -4.0 + 2.0 * unif(rng));
        h.slab_var = h.spike_var * (2.0 + 98.0 * unif(rng));
        const int L1 = width_dist(rng);
        const double tau = norm_threshold(h, L1);

        // crossing at tau
        worst_half = std::max(worst_half, std::abs(pip_from_norm_sq(tau, L1, h) - 0.5));

        // wide-range draw for the threshold equivalence (q may saturate)
        {
            const double wide_nsq = tau * 4.0 * unif(rng);
            const double q = pip_from_norm_sq(wide_nsq, L1, h);
            if ((q > 0.5) != (wide_nsq > tau) && std::abs(wide_nsq - tau) > 1e-12)
                ++equiv_bad;
        }

        // log-odds draw constrained to +-8, where the logit can be recovered
        // from q without precision loss in the oracle comparison
        const double coef = 0.5 / h.spike_var - 0.5 / h.slab_var;
        const double nsq = std::max(0.0, tau + (2.0 * unif(rng) - 1.0) * 8.0 / coef);
        Eigen::VectorXd w(L1);
        std::normal_distribution<double> normal;
        for (int a = 0; a < L1; ++a) w[a] = normal(rng);
        w *= std::sqrt(nsq) / w.norm();

        NetworkParams p = make_network({1, L1, 1});
        p.weights[0] = w;
        p.biases[0].setZero();
        p.weights[1].setZero();
        p.biases[1].setZero();
        const double q = pip(p, h)[0];
        const double actual_nsq = w.squaredNorm();
        if ((q > 0.5) != (actual_nsq > tau) && std::abs(actual_nsq - tau) > 1e-12)
            ++equiv_bad;

        // direct two-component Bayes computation in extended precision
        long double l1 = 0.0L, l0 = 0.0L;
        const long double log2pi = 1.837877066409345483560659472811L;
        for (int a = 0; a < L1; ++a) {
            const long double wa = w[a];
            l1 += -0.5L * (log2pi + std::log((long double)h.slab_var)) -
                  wa * wa / (2.0L * (long double)h.slab_var);
            l0 += -0.5L * (log2pi + std::log((long double)h.spike_var)) -
                  wa * wa / (2.0L * (long double)h.spike_var);
        }
        const long double oracle = std::log((long double)h.lambda) + l1 -
                                   std::log(1.0L - (long double)h.lambda) - l0;
        const double impl = std::log(q) - std::log1p(-q);
        worst_logodds =
            std::max(worst_logodds, std::abs((double)((long double)impl - oracle)));
    }
    const bool pass = equiv_bad == 0 && worst_half < 1e-10 && worst_logodds < 1e-12;
    report(2, pass,
           "1000 draws: threshold/PIP equivalence violations " + std::to_string(equiv_bad) +
               ", |q(tau)-1/2| max " + fmt(worst_half) + ", log-odds error max " +
               fmt(worst_logodds));
}

// ---------------------------------------------------------------- criterion 3

void criterion_spline_suite() {
    std::mt19937_64 rng(0xACC3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double worst_pu = 0.0;
    for (auto [J, p] : {std::pair{55, 4}, {80, 4}, {20, 8}}) {
        const SplineBasis b = build_basis(J, p);
        for (int t = 0; t < 1000; ++t)
            worst_pu = std::max(worst_pu, std::abs(basis_values(b, unif(rng)).sum() - 1.0));
    }

    CurveSet ones;
    ones.grid = Eigen::VectorXd::LinSpaced(101, 0.0, 1.0);
    ones.values = Eigen::MatrixXd::Ones(1, 101);
    const SplineBasis b55 = build_basis(55, 4);
    const double row_sum_err = std::abs(project(ones, b55).row(0).sum() - 1.0);

    const SplineBasis b10 = build_basis(10, 4);
    auto feat = [&](int L) {
        CurveSet c;
        c.grid = Eigen::VectorXd::LinSpaced(L, 0.0, 1.0);
        c.values.resize(1, L);
        for (int l = 0; l < L; ++l)
            c.values(0, l) = std::sin(3.0 * c.grid[l]) + c.grid[l] * c.grid[l];
        return project(c, b10);
    };
    const Eigen::MatrixXd ref = feat(10001);
    const double ratio = (feat(101) - ref).norm() / (feat(201) - ref).norm();

    const bool pass = worst_pu < 1e-12 && row_sum_err < 1e-10 && ratio > 3.0 && ratio < 5.0;
    report(3, pass,
           "partition of unity max dev " + fmt(worst_pu) + ", unit-curve feature sum error " +
               fmt(row_sum_err) + ", quadrature halving ratio " + fmt(ratio));
}

// ---------------------------------------------------------------- criterion 4

void criterion_laplace_oracle() {
    std::mt19937_64 rng(0xACC4);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> dim_dist(1, 8);
    std::uniform_real_distribution<double> var_dist(0.2, 3.0);

    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int d = dim_dist(rng);
        const long n = 15 + (trial % 4) * 10;
        const double noise_var = var_dist(rng), prior_var = var_dist(rng);
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd y(n);
        for (long i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) X(i, j) = normal(rng);
            y[i] = normal(rng);
        }
        const Eigen::MatrixXd A =
            X.transpose() * X / noise_var + Eigen::MatrixXd::Identity(d, d) / prior_var;
        const Eigen::VectorXd b = X.transpose() * y / noise_var;
        const double c = y.squaredNorm() / (2 * noise_var) +
                         0.5 * d * std::log(2 * M_PI * prior_var);
        const Eigen::VectorXd mode = A.ldlt().solve(b);
        const double exact = -c + 0.5 * b.dot(mode) + 0.5 * d * std::log(2 * M_PI) -
                             0.5 * std::log(A.determinant());
        const double L_mode = c - b.dot(mode) + 0.5 * mode.dot(A * mode);
        const GradFn grad_h = [&](const Eigen::VectorXd& th) -> Eigen::VectorXd {
            return -(A * th - b) / static_cast<double>(n);
        };
        const EvidenceReport rep =
            laplace_from_grad(-L_mode / static_cast<double>(n), grad_h, mode, n);
        worst = std::max(worst, std::abs(rep.log_evidence - exact));
    }
    report(4, worst < 1e-4,
           "20 conjugate linear-Gaussian problems, worst |laplace - exact| " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 5

// Frozen regression medians from the first recorded run of this criterion
// (deterministic given the seeds below). Negative means not yet pinned.
constexpr double kPinnedMedianF1 = 0.92422820191906552;
constexpr double kPinnedMedianRecall = 0.95753588516746424;

void criterion_region_recovery() {
    std::vector<double> f1s, recalls;
    for (int k = 0; k < 10; ++k) {
        SimScenario scn;
        scn.beta_kind = BetaKind::Simple;
        scn.link_kind = LinkKind::Linear;
        scn.response_snr = 10.0;
        scn.seed = derive_seed(1000 + k, 0x51D0u);
        const auto [data, truth] = gen_dataset(scn);

        SelectorConfig cfg;
        cfg.train.max_iters = 20001;
        cfg.train.seed = derive_seed(1000 + k, 0xF17Au);
        const SelectionResult res = run_selection(data, cfg);
        const RegionMetrics m = region_metrics(res.region, truth.true_region);
        f1s.push_back(m.f1);
        recalls.push_back(m.recall);
        std::cerr << "[acceptance] replicate " << k << ": J*=" << res.j_star
                  << " f1=" << m.f1 << " recall=" << m.recall << "\n";
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    };
    const double med_f1 = median(f1s), med_recall = median(recalls);
    bool pass = med_f1 >= 0.7 && med_recall >= 0.9;
    std::string note = "10 replicates (simple/linear/SNR10): median F1 " + fmt(med_f1) +
                       " (>=0.7), median recall " + fmt(med_recall) + " (>=0.9)";
    if (kPinnedMedianF1 >= 0.0) {
        const bool frozen = std::abs(med_f1 - kPinnedMedianF1) < 1e-9 &&
                            std::abs(med_recall - kPinnedMedianRecall) < 1e-9;
        pass = pass && frozen;
        note += frozen ? "; matches frozen medians" : "; DRIFTED from frozen medians";
    } else {
        std::printf("CRITERION 5 (pin): median_f1=%.17g median_recall=%.17g\n", med_f1,
                    med_recall);
    }
    report(5, pass, note);
}

// ---------------------------------------------------------------- criterion 6

// Ridge regression of standardized responses on centered spline features,
// regularization chosen on the validation split.
double ridge_test_rmse(const FunctionalDataset& data, int J) {
    const SplineBasis basis = build_basis(J, 4);
    const Eigen::MatrixXd features = project(data.curve_set(), basis);
    const ResponseStats stats = training_stats(data);

    auto rows_to = [&](Split s) {
        const auto rows = data.rows_of(s);
        Eigen::MatrixXd X(rows.size(), J);
        for (std::size_t k = 0; k < rows.size(); ++k) X.row(k) = features.row(rows[k]);
        return X;
    };
    Eigen::MatrixXd Xtr = rows_to(Split::Train), Xva = rows_to(Split::Val),
                    Xte = rows_to(Split::Test);
    const Eigen::RowVectorXd mu = Xtr.colwise().mean();
    Xtr.rowwise() -= mu;
    Xva.rowwise() -= mu;
    Xte.rowwise() -= mu;
    const Eigen::VectorXd ytr = standardize(data.responses_of(Split::Train), stats);
    const Eigen::VectorXd yva = standardize(data.responses_of(Split::Val), stats);
    const Eigen::VectorXd yte = data.responses_of(Split::Test);

    const Eigen::MatrixXd gram = Xtr.transpose() * Xtr;
    const Eigen::VectorXd xty = Xtr.transpose() * ytr;
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_theta = Eigen::VectorXd::Zero(J);
    for (double alpha : {1e-8, 1e-6, 1e-4, 1e-2, 1e-1, 1.0, 10.0, 100.0}) {
        const Eigen::VectorXd theta =
            (gram + alpha * Eigen::MatrixXd::Identity(J, J)).ldlt().solve(xty);
        const double v = (Xva * theta - yva).squaredNorm() / yva.size();
        if (v < best_val) {
            best_val = v;
            best_theta = theta;
        }
    }
    const Eigen::VectorXd pred = destandardize(Xte * best_theta, stats);
    return std::sqrt((pred - yte).squaredNorm() / yte.size());
}

void criterion_nonlinearity_advantage() {
    int wins = 0;
    for (int k = 0; k < 10; ++k) {
        SimScenario scn;
        scn.beta_kind = BetaKind::Medium;
        scn.link_kind = LinkKind::Composite;
        scn.response_snr = 10.0;
        scn.seed = derive_seed(2000 + k, 0x51D0u);
        const auto [data, truth] = gen_dataset(scn);

        SelectorConfig cfg;
        cfg.j_candidates = {60};  // one projection size; the comparison is about the link
        cfg.train.max_iters = 20001;
        cfg.train.seed = derive_seed(2000 + k, 0xF17Au);
        const SelectionResult res = run_selection(data, cfg);
        const CurveSet test{data.grid, data.curves_of(Split::Test)};
        const Eigen::VectorXd pred = predict_ensemble(res, test);
        const Eigen::VectorXd yte = data.responses_of(Split::Test);
        const double net_rmse = std::sqrt((pred - yte).squaredNorm() / yte.size());
        const double lin_rmse = ridge_test_rmse(data, 60);
        if (net_rmse < lin_rmse) ++wins;
        std::cerr << "[acceptance] seed " << k << ": network rmse " << net_rmse
                  << " vs ridge " << lin_rmse << "\n";
    }
    report(6, wins >= 7,
           "ensemble beat the linear ridge baseline on " + std::to_string(wins) +
               "/10 seeds (medium/composite/SNR10, need >= 7)");
}

// ---------------------------------------------------------------- criterion 7

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    // Bitwise repeatability of the reproduce pipeline is scale independent;
    // a reduced configuration keeps this criterion in the fast set.
    ExperimentConfig base;
    SimScenario scn;
    scn.grid_len = 41;
    scn.n_train = 80;
    scn.n_val = 20;
    scn.n_test = 20;
    base.scenario = scn;
    base.selector.j_candidates = {8};
    base.selector.criterion = Criterion::Val;
    base.selector.train.hidden_widths = {8, 8};
    base.selector.train.max_iters = 1201;
    base.selector.train.patience_iters = 600;
    base.selector.train.restarts = 2;
    base.replicates = 2;
    base.seed = 7;

    const fs::path root = fs::temp_directory_path() / "funcsel_acc7";
    fs::remove_all(root);
    std::string first, second;
    nlohmann::json agg1, agg2;
    for (int run = 0; run < 2; ++run) {
        ExperimentConfig c = base;
        c.output_dir = (root / ("run" + std::to_string(run))).string();
        run_reproduce(c);
        const std::string table = read_file(fs::path(c.output_dir) / "metrics_table.csv");
        std::ifstream in(fs::path(c.output_dir) / "aggregate.json");
        nlohmann::json agg;
        in >> agg;
        // provenance records the (necessarily different) output directory
        agg.erase("provenance");
        (run == 0 ? first : second) = table;
        (run == 0 ? agg1 : agg2) = agg;
    }
    fs::remove_all(root);
    const bool pass = !first.empty() && first == second && agg1 == agg2;
    report(7, pass, "reproduce --replicates 2 --seed 7 twice: metric tables " +
                        std::string(pass ? "bit-identical" : "DIFFER"));
}

// ---------------------------------------------------------------- criterion 8

void criterion_selection_arithmetic() {
    const std::vector<int> js = {55, 60, 70, 80};
    const double vals[] = {1.0, 2.0, 3.0};
    long cases = 0, bad = 0;

    // Exhaustive over all 3^4 score assignments for each criterion, covering
    // every tie pattern on a 4-candidate grid.
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    const double score[4] = {vals[a], vals[b], vals[c], vals[d]};

                    // evidence criterion: maximize, ties to the smaller J
                    std::vector<CandidateScores> ev_table;
                    for (int i = 0; i < 4; ++i) {
                        CandidateScores row;
                        row.j = js[i];
                        RestartScore s;
                        s.val_mse = 0.5;
                        s.log_evidence = score[i];
                        row.restarts = {s};
                        aggregate_scores(row);
                        ev_table.push_back(row);
                    }
                    int expect = 0;
                    for (int i = 1; i < 4; ++i)
                        if (score[i] > score[expect]) expect = i;
                    ++cases;
                    if (choose_from_scores(ev_table, Criterion::Evidence).j_star != js[expect])
                        ++bad;

                    // validation criterion: minimize, ties to the smaller J
                    std::vector<CandidateScores> val_table;
                    for (int i = 0; i < 4; ++i) {
                        CandidateScores row;
                        row.j = js[i];
                        RestartScore s;
                        s.val_mse = score[i];
                        row.restarts = {s};
                        aggregate_scores(row);
                        val_table.push_back(row);
                    }
                    expect = 0;
                    for (int i = 1; i < 4; ++i)
                        if (score[i] < score[expect]) expect = i;
                    ++cases;
                    if (choose_from_scores(val_table, Criterion::Val).j_star != js[expect])
                        ++bad;
                }

    // restart argmin with smaller-index tie-breaking, exhaustive over 3^3
    // restart val patterns in the winning candidate
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                CandidateScores row;
                row.j = 55;
                const double rv[3] = {vals[a], vals[b], vals[c]};
                for (int r = 0; r < 3; ++r) {
                    RestartScore s;
                    s.val_mse = rv[r];
                    row.restarts.push_back(s);
                }
                aggregate_scores(row);
                int expect = 0;
                for (int r = 1; r < 3; ++r)
                    if (rv[r] < rv[expect]) expect = r;
                ++cases;
                if (choose_from_scores({row}, Criterion::Val).r_star != expect) ++bad;
            }

    report(8, bad == 0,
           "exhaustive 4-candidate / 3-restart score tables: " + std::to_string(bad) +
               " of " + std::to_string(cases) + " cases disagree with the reference argmax/argmin");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "all";
    const bool fast = mode == "fast" || mode == "all";
    const bool e2e = mode == "e2e" || mode == "all";
    if (!fast && !e2e) {
        std::fprintf(stderr, "usage: %s [fast|e2e|all]\n", argv[0]);
        return 2;
    }
    if (fast) {
        criterion_gradient_oracle();
        criterion_pip_threshold();
        criterion_spline_suite();
        criterion_laplace_oracle();
        criterion_determinism();
        criterion_selection_arithmetic();
    }
    if (e2e) {
        criterion_region_recovery();
        criterion_nonlinearity_advantage();
    }
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
