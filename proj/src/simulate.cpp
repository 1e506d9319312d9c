#include "funcsel/simulate.hpp"

#include <cmath>

#include "funcsel/errors.hpp"
#include "funcsel/rng.hpp"

namespace funcsel {

namespace {

constexpr int kNumCosineTerms = 50;
constexpr double kPi = 3.14159265358979323846;

// Normalized bump: 4 (t-a)(b-t) / (b-a)^2 on [a,b], peak 1 at the midpoint.
double bump(double t, double a, double b) {
    if (t < a || t > b) return 0.0;
    const double w = b - a;
    return 4.0 * (t - a) * (b - t) / (w * w);
}

double cosine_scale(int k) {
    // z_1 = 20, z_2 = z_3 = 15, z_k = 1 for k >= 4 (1-based).
    if (k == 1) return 20.0;
    if (k == 2 || k == 3) return 15.0;
    return 1.0;
}

}  // namespace

BetaKind beta_from_name(const std::string& name) {
    if (name == "simple") return BetaKind::Simple;
    if (name == "medium") return BetaKind::Medium;
    if (name == "complex") return BetaKind::Complex;
    throw ConfigError("unknown beta scenario '" + name + "' (simple/medium/complex)");
}

LinkKind link_from_name(const std::string& name) {
    if (name == "linear") return LinkKind::Linear;
    if (name == "logistic") return LinkKind::Logistic;
    if (name == "sinusoidal") return LinkKind::Sinusoidal;
    if (name == "composite") return LinkKind::Composite;
    throw ConfigError("unknown link '" + name + "' (linear/logistic/sinusoidal/composite)");
}

const char* beta_name(BetaKind k) {
    switch (k) {
        case BetaKind::Simple: return "simple";
        case BetaKind::Medium: return "medium";
        default: return "complex";
    }
}

const char* link_name(LinkKind k) {
    switch (k) {
        case LinkKind::Linear: return "linear";
        case LinkKind::Logistic: return "logistic";
        case LinkKind::Sinusoidal: return "sinusoidal";
        default: return "composite";
    }
}

double beta_true(BetaKind kind, double t) {
    switch (kind) {
        case BetaKind::Simple:
            return 5.0 * bump(t, 0.4, 0.6);
        case BetaKind::Medium:
            return 5.0 * bump(t, 0.1, 0.3);
        case BetaKind::Complex:
            return 2.5 * (bump(t, 0.05, 0.15) + bump(t, 0.75, 0.85)) *
                   std::sin(2.0 * kPi * (t + 0.1));
    }
    return 0.0;
}

Region true_region(BetaKind kind) {
    switch (kind) {
        case BetaKind::Simple: return make_region({{0.4, 0.6}});
        case BetaKind::Medium: return make_region({{0.1, 0.3}});
        default: return make_region({{0.05, 0.15}, {0.75, 0.85}});
    }
}

double link(LinkKind kind, double u) {
    switch (kind) {
        case LinkKind::Linear: return u;
        case LinkKind::Logistic: return 1.0 / (1.0 + std::exp(u));
        case LinkKind::Sinusoidal: return std::sin(u);
        case LinkKind::Composite:
            return std::tanh(u) + std::sin(4.0 * u) * std::exp(-0.01 * u * u);
    }
    return u;
}

Eigen::MatrixXd gen_curve_coefficients(long n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("need at least one curve");
    Eigen::MatrixXd c(n, kNumCosineTerms);
    const double bound = std::sqrt(3.0);
    for (long i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, 0xC0u, static_cast<std::uint64_t>(i)));
        std::uniform_real_distribution<double> unif(-bound, bound);
        for (int k = 0; k < kNumCosineTerms; ++k)
            c(i, k) = cosine_scale(k + 1) * unif(rng);
    }
    return c;
}

Eigen::MatrixXd eval_curves(const Eigen::MatrixXd& coefficients, const Eigen::VectorXd& grid) {
    // Basis matrix phi(grid): phi_1 = 1, phi_k(t) = sqrt(2) cos((k-1) pi t).
    Eigen::MatrixXd phi(grid.size(), kNumCosineTerms);
    phi.col(0).setOnes();
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 1; k < kNumCosineTerms; ++k)
        phi.col(k) = (sqrt2 * (static_cast<double>(k) * kPi * grid.array()).cos()).matrix();
    return coefficients * phi.transpose();
}

Eigen::MatrixXd gen_curves(long n, int grid_len, std::uint64_t seed) {
    if (grid_len < 2) throw ConfigError("grid_len must be >= 2");
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(grid_len, 0.0, 1.0);
    return eval_curves(gen_curve_coefficients(n, seed), grid);
}

std::pair<FunctionalDataset, SimTruth> gen_dataset(const SimScenario& scn) {
    if (scn.response_snr <= 0.0 || scn.curve_snr <= 0.0)
        throw ConfigError("SNR values must be positive");
    if (scn.n_train < 1 || scn.n_val < 1 || scn.n_test < 1)
        throw ConfigError("sample sizes must be positive");
    if (scn.grid_len < 2) throw ConfigError("grid_len must be >= 2");

    const long n = scn.n_train + scn.n_val + scn.n_test;
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(scn.grid_len, 0.0, 1.0);
    // Ground-truth index integrals use a 10x refined grid so the truth does
    // not depend on the observation resolution.
    const int fine_len = (scn.grid_len - 1) * 10 + 1;
    const Eigen::VectorXd fine = Eigen::VectorXd::LinSpaced(fine_len, 0.0, 1.0);

    const Eigen::MatrixXd coef = gen_curve_coefficients(n, scn.seed);
    const Eigen::MatrixXd latent_fine = eval_curves(coef, fine);
    const Eigen::MatrixXd latent = eval_curves(coef, grid);

    Eigen::VectorXd beta_fine(fine_len);
    for (int l = 0; l < fine_len; ++l) beta_fine[l] = beta_true(scn.beta_kind, fine[l]);
    const Eigen::VectorXd w = trapezoid_weights(fine);
    const Eigen::VectorXd index = latent_fine * w.cwiseProduct(beta_fine);

    Eigen::VectorXd signal(n);
    for (long i = 0; i < n; ++i) signal[i] = link(scn.link_kind, index[i]);

    const double mean_s = signal.mean();
    const double var_s = (signal.array() - mean_s).square().sum() / static_cast<double>(n - 1);
    if (!(var_s > 0.0))
        throw NumericalError("signal variance is zero; cannot calibrate response noise");
    const double sigma_eps_sq = var_s / scn.response_snr;

    FunctionalDataset data;
    data.grid = grid;
    data.responses.resize(n);
    {
        Rng rng(derive_seed(scn.seed, 0xE5u));
        std::normal_distribution<double> normal(0.0, std::sqrt(sigma_eps_sq));
        for (long i = 0; i < n; ++i) data.responses[i] = signal[i] + normal(rng);
    }

    // Measurement noise on the observed grid: per-grid-point variance of the
    // latent curves divided by the curve SNR.
    data.curves = latent;
    {
        Rng rng(derive_seed(scn.seed, 0x0Bu));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index l = 0; l < latent.cols(); ++l) {
            const double mu = latent.col(l).mean();
            const double var_l =
                (latent.col(l).array() - mu).square().sum() / static_cast<double>(n - 1);
            const double sd = std::sqrt(var_l / scn.curve_snr);
            for (long i = 0; i < n; ++i) data.curves(i, l) += sd * normal(rng);
        }
    }

    data.split.resize(n);
    for (long i = 0; i < n; ++i)
        data.split[i] = i < scn.n_train ? Split::Train
                        : (i < scn.n_train + scn.n_val ? Split::Val : Split::Test);

    SimTruth truth;
    truth.true_region = true_region(scn.beta_kind);
    truth.beta_on_grid.resize(scn.grid_len);
    for (int l = 0; l < scn.grid_len; ++l) truth.beta_on_grid[l] = beta_true(scn.beta_kind, grid[l]);
    truth.sigma_eps_sq = sigma_eps_sq;
    return {std::move(data), std::move(truth)};
}

}  // namespace funcsel
