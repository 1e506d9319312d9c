#include "funcsel/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "funcsel/errors.hpp"
#include "funcsel/parallel.hpp"
#include "funcsel/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace funcsel {

namespace {

// Sub-seed tags: data generation and training draw from disjoint streams.
constexpr std::uint64_t kSimTag = 0x51D0u;
constexpr std::uint64_t kFitTag = 0xF17Au;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open JSON file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("failed to parse " + path + ": " + e.what());
    }
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write JSON file: " + path);
    out << j.dump(2) << "\n";
}

json params_to_json(const NetworkParams& p) {
    json j;
    j["weights"] = json::array();
    j["biases"] = json::array();
    for (const auto& W : p.weights) {
        json rows = json::array();
        for (Eigen::Index a = 0; a < W.rows(); ++a) {
            json row = json::array();
            for (Eigen::Index b = 0; b < W.cols(); ++b) row.push_back(W(a, b));
            rows.push_back(std::move(row));
        }
        j["weights"].push_back(std::move(rows));
    }
    for (const auto& b : p.biases) {
        json vec = json::array();
        for (Eigen::Index a = 0; a < b.size(); ++a) vec.push_back(b[a]);
        j["biases"].push_back(std::move(vec));
    }
    return j;
}

NetworkParams params_from_json(const json& j) {
    NetworkParams p;
    for (const auto& rows : j.at("weights")) {
        Eigen::MatrixXd W(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows[a].size(); ++b)
                W(static_cast<long>(a), static_cast<long>(b)) = rows[a][b].get<double>();
        p.weights.push_back(std::move(W));
    }
    for (const auto& vec : j.at("biases")) {
        Eigen::VectorXd b(vec.size());
        for (std::size_t a = 0; a < vec.size(); ++a) b[static_cast<long>(a)] = vec[a].get<double>();
        p.biases.push_back(std::move(b));
    }
    return p;
}

json region_to_json(const Region& region) {
    json j = json::array();
    for (const auto& [a, b] : region.intervals) j.push_back(json::array({a, b}));
    return j;
}

Region region_from_json(const json& j) {
    std::vector<std::pair<double, double>> ivs;
    for (const auto& iv : j) ivs.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
    return make_region(std::move(ivs));
}

json provenance(const ExperimentConfig& config) {
    return json{{"config", config_to_json(config)}, {"seed", config.seed}};
}

SimScenario resolved_scenario(const ExperimentConfig& config) {
    if (!config.scenario)
        throw ConfigError("this command needs a 'scenario' block in the config");
    SimScenario s = *config.scenario;
    s.seed = derive_seed(config.seed, kSimTag);
    return s;
}

SelectorConfig resolved_selector(const ExperimentConfig& config) {
    SelectorConfig s = config.selector;
    s.train.seed = derive_seed(config.seed, kFitTag);
    return s;
}

FunctionalDataset obtain_dataset(const ExperimentConfig& config) {
    if (config.dataset_path) return load_csv(*config.dataset_path);
    return gen_dataset(resolved_scenario(config)).first;
}

std::string out_path(const ExperimentConfig& config, const char* name) {
    return (fs::path(config.output_dir) / name).string();
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    static const char* known[] = {"selector", "scenario", "dataset",
                                  "replicates", "output_dir", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return it.key() == k;
            }) == std::end(known))
            throw ConfigError("unknown top-level config key: " + it.key());
    }

    ExperimentConfig c;
    c.seed = j.value("seed", 0ULL);
    c.replicates = j.value("replicates", 1);
    c.output_dir = j.value("output_dir", std::string("out"));
    if (c.replicates < 1) throw ConfigError("replicates must be >= 1");

    if (j.contains("scenario")) {
        const json& s = j["scenario"];
        SimScenario scn;
        scn.beta_kind = beta_from_name(s.value("beta", "simple"));
        scn.link_kind = link_from_name(s.value("link", "linear"));
        scn.response_snr = s.value("response_snr", 10.0);
        scn.curve_snr = s.value("curve_snr", 10.0);
        scn.grid_len = s.value("grid_len", 101);
        scn.n_train = s.value("n_train", 1000L);
        scn.n_val = s.value("n_val", 200L);
        scn.n_test = s.value("n_test", 200L);
        c.scenario = scn;
    }
    if (j.contains("dataset")) c.dataset_path = j["dataset"].get<std::string>();
    if (c.scenario.has_value() == c.dataset_path.has_value())
        throw ConfigError("config must contain exactly one of 'scenario' and 'dataset'");

    if (j.contains("selector")) {
        const json& s = j["selector"];
        SelectorConfig& sel = c.selector;
        if (s.contains("j_candidates"))
            sel.j_candidates = s["j_candidates"].get<std::vector<int>>();
        sel.criterion = criterion_from_name(s.value("criterion", "evidence"));
        sel.spline_degree = s.value("spline_degree", 4);
        sel.denoise_curves = s.value("denoise", false);
        if (s.contains("train")) {
            const json& t = s["train"];
            sel.train.learning_rate = t.value("learning_rate", sel.train.learning_rate);
            sel.train.batch_size = t.value("batch_size", sel.train.batch_size);
            sel.train.max_iters = t.value("max_iters", sel.train.max_iters);
            sel.train.patience_iters = t.value("patience_iters", sel.train.patience_iters);
            sel.train.eval_every = t.value("eval_every", sel.train.eval_every);
            sel.train.restarts = t.value("restarts", sel.train.restarts);
            if (t.contains("hidden_widths"))
                sel.train.hidden_widths = t["hidden_widths"].get<std::vector<int>>();
        }
        if (s.contains("hyper")) {
            const json& h = s["hyper"];
            sel.hyper.lambda = h.value("lambda", sel.hyper.lambda);
            sel.hyper.spike_var = h.value("spike_var", sel.hyper.spike_var);
            sel.hyper.slab_var = h.value("slab_var", sel.hyper.slab_var);
            sel.hyper.deep_var = h.value("deep_var", sel.hyper.deep_var);
            sel.hyper.noise_var = h.value("noise_var", sel.hyper.noise_var);
        }
        if (s.contains("laplace")) {
            const json& l = s["laplace"];
            sel.laplace.fd_step = l.value("fd_step", sel.laplace.fd_step);
            sel.laplace.jitter = l.value("jitter", sel.laplace.jitter);
            sel.laplace.eig_floor = l.value("eig_floor", sel.laplace.eig_floor);
            sel.laplace.dim_cap = l.value("dim_cap", sel.laplace.dim_cap);
        }
    }
    validate_selector_config(c.selector);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_json(path));
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["replicates"] = c.replicates;
    j["output_dir"] = c.output_dir;
    if (c.scenario) {
        const SimScenario& s = *c.scenario;
        j["scenario"] = {{"beta", beta_name(s.beta_kind)},
                         {"link", link_name(s.link_kind)},
                         {"response_snr", s.response_snr},
                         {"curve_snr", s.curve_snr},
                         {"grid_len", s.grid_len},
                         {"n_train", s.n_train},
                         {"n_val", s.n_val},
                         {"n_test", s.n_test}};
    }
    if (c.dataset_path) j["dataset"] = *c.dataset_path;
    const SelectorConfig& sel = c.selector;
    j["selector"] = {
        {"j_candidates", sel.j_candidates},
        {"criterion", criterion_name(sel.criterion)},
        {"spline_degree", sel.spline_degree},
        {"denoise", sel.denoise_curves},
        {"train",
         {{"learning_rate", sel.train.learning_rate},
          {"batch_size", sel.train.batch_size},
          {"max_iters", sel.train.max_iters},
          {"patience_iters", sel.train.patience_iters},
          {"eval_every", sel.train.eval_every},
          {"restarts", sel.train.restarts},
          {"hidden_widths", sel.train.hidden_widths}}},
        {"hyper",
         {{"lambda", sel.hyper.lambda},
          {"spike_var", sel.hyper.spike_var},
          {"slab_var", sel.hyper.slab_var},
          {"deep_var", sel.hyper.deep_var},
          {"noise_var", sel.hyper.noise_var}}},
        {"laplace",
         {{"fd_step", sel.laplace.fd_step},
          {"jitter", sel.laplace.jitter},
          {"eig_floor", sel.laplace.eig_floor},
          {"dim_cap", sel.laplace.dim_cap}}}};
    return j;
}

void run_simulate(const ExperimentConfig& config) {
    fs::create_directories(config.output_dir);
    const SimScenario scn = resolved_scenario(config);
    auto [data, truth] = gen_dataset(scn);
    save_csv(data, out_path(config, "dataset.csv"));

    json t;
    t["provenance"] = provenance(config);
    t["true_region"] = region_to_json(truth.true_region);
    t["sigma_eps_sq"] = truth.sigma_eps_sq;
    t["beta_on_grid"] = std::vector<double>(truth.beta_on_grid.begin(), truth.beta_on_grid.end());
    write_json(t, out_path(config, "truth.json"));
}

void run_fit(const ExperimentConfig& config) {
    fs::create_directories(config.output_dir);
    const FunctionalDataset data = obtain_dataset(config);
    const SelectionResult result = run_selection(data, resolved_selector(config));

    json res;
    res["provenance"] = provenance(config);
    res["j_star"] = result.j_star;
    res["r_star"] = result.r_star;
    res["criterion_used"] = criterion_name(result.choice.used);
    res["fell_back_to_val"] = result.choice.fell_back_to_val;
    res["region"] = region_to_json(result.region);
    res["mask"] = json::array();
    for (bool m : result.final_mask) res["mask"].push_back(m ? 1 : 0);
    res["pips"] = json::array();
    for (Eigen::Index j = 0; j < result.pips.size(); ++j) {
        const auto& [a, b] = result.basis.supports[j];
        res["pips"].push_back(
            {{"j", j}, {"t", 0.5 * (a + b)}, {"q", result.pips[j]}});
    }
    res["per_j"] = json::array();
    for (const auto& row : result.per_j) {
        json r;
        r["j"] = row.j;
        if (row.mean_val) r["mean_val"] = *row.mean_val;
        if (row.mean_evidence) r["mean_evidence"] = *row.mean_evidence;
        r["restarts"] = json::array();
        for (const auto& rs : row.restarts) {
            json e;
            e["diverged"] = rs.diverged;
            if (rs.diverged) e["error"] = rs.error;
            else e["val_mse"] = rs.val_mse;
            if (rs.log_evidence) e["log_evidence"] = *rs.log_evidence;
            if (!rs.evidence_error.empty()) e["evidence_error"] = rs.evidence_error;
            r["restarts"].push_back(std::move(e));
        }
        res["per_j"].push_back(std::move(r));
    }
    write_json(res, out_path(config, "result.json"));

    json model;
    model["provenance"] = provenance(config);
    model["j_star"] = result.j_star;
    model["spline_degree"] = result.basis.degree;
    model["grid"] = std::vector<double>(result.grid.begin(), result.grid.end());
    model["stats"] = {{"mean", result.stats.mean}, {"sd", result.stats.sd}};
    model["mask"] = res["mask"];
    model["final"] = params_to_json(result.final_params);
    model["ensemble"] = json::array();
    for (const auto& p : result.ensemble) model["ensemble"].push_back(params_to_json(p));
    write_json(model, out_path(config, "model.json"));
}

namespace {

// Rebuilds the prediction-relevant part of a SelectionResult from model.json
// and result.json.
SelectionResult load_fit(const ExperimentConfig& config) {
    const json model = read_json(out_path(config, "model.json"));
    const json res = read_json(out_path(config, "result.json"));
    SelectionResult r;
    r.j_star = model.at("j_star").get<int>();
    r.r_star = res.at("r_star").get<int>();
    r.basis = build_basis(r.j_star, model.at("spline_degree").get<int>());
    const auto grid = model.at("grid").get<std::vector<double>>();
    r.grid = Eigen::Map<const Eigen::VectorXd>(grid.data(), static_cast<long>(grid.size()));
    r.stats.mean = model.at("stats").at("mean").get<double>();
    r.stats.sd = model.at("stats").at("sd").get<double>();
    for (const auto& m : model.at("mask")) r.final_mask.push_back(m.get<int>() != 0);
    r.final_params = params_from_json(model.at("final"));
    for (const auto& p : model.at("ensemble")) r.ensemble.push_back(params_from_json(p));
    r.region = region_from_json(res.at("region"));
    const auto& pips = res.at("pips");
    r.pips.resize(static_cast<long>(pips.size()));
    for (std::size_t j = 0; j < pips.size(); ++j)
        r.pips[static_cast<long>(j)] = pips[j].at("q").get<double>();
    return r;
}

}  // namespace

void run_evaluate(const ExperimentConfig& config) {
    fs::create_directories(config.output_dir);
    const FunctionalDataset data = obtain_dataset(config);
    const SelectionResult result = load_fit(config);

    const CurveSet test_curves{data.grid, data.curves_of(Split::Test)};
    if (test_curves.values.rows() == 0) throw DataError("dataset has no test rows");
    const Eigen::VectorXd y_hat = predict_ensemble(result, test_curves);
    const auto [rmse, mae] = prediction_metrics(y_hat, data.responses_of(Split::Test));

    json m;
    m["provenance"] = provenance(config);
    m["rmse"] = rmse;
    m["mae"] = mae;
    m["j_star"] = result.j_star;
    m["region"] = region_to_json(result.region);

    const std::string truth_path = out_path(config, "truth.json");
    if (fs::exists(truth_path)) {
        const json t = read_json(truth_path);
        const Region truth = region_from_json(t.at("true_region"));
        const RegionMetrics rm = region_metrics(result.region, truth);
        m["region_metrics"] = {
            {"recall", rm.recall}, {"precision", rm.precision}, {"f1", rm.f1}};
    }
    write_json(m, out_path(config, "metrics.json"));

    std::ofstream pc(out_path(config, "pip_curve.csv"));
    if (!pc) throw DataError("cannot write pip_curve.csv");
    pc << "t,pip\n";
    for (Eigen::Index j = 0; j < result.pips.size(); ++j) {
        const auto& [a, b] = result.basis.supports[j];
        pc << format_g17(0.5 * (a + b)) << "," << format_g17(result.pips[j]) << "\n";
    }
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Interquartile range with linear interpolation between order statistics.
double iqr(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        return lo + 1 < v.size() ? (1.0 - frac) * v[lo] + frac * v[lo + 1] : v[lo];
    };
    return quantile(0.75) - quantile(0.25);
}

}  // namespace

void run_reproduce(const ExperimentConfig& config) {
    fs::create_directories(config.output_dir);
    std::vector<json> rep_metrics(config.replicates);

    parallel_for(config.replicates, [&](long k) {
        ExperimentConfig sub = config;
        sub.output_dir = (fs::path(config.output_dir) / ("rep_" + std::to_string(k))).string();
        sub.seed = config.seed + static_cast<std::uint64_t>(k);
        sub.replicates = 1;
        run_simulate(sub);
        run_fit(sub);
        run_evaluate(sub);
        rep_metrics[k] = read_json(out_path(sub, "metrics.json"));
    });

    std::ofstream table(out_path(config, "metrics_table.csv"));
    if (!table) throw DataError("cannot write metrics_table.csv");
    table << "replicate,seed,j_star,rmse,mae,recall,precision,f1\n";
    std::map<std::string, std::vector<double>> columns;
    for (int k = 0; k < config.replicates; ++k) {
        const json& m = rep_metrics[k];
        const json& rm = m.at("region_metrics");
        table << k << "," << (config.seed + static_cast<std::uint64_t>(k)) << ","
              << m.at("j_star").get<int>() << "," << format_g17(m.at("rmse").get<double>())
              << "," << format_g17(m.at("mae").get<double>()) << ","
              << format_g17(rm.at("recall").get<double>()) << ","
              << format_g17(rm.at("precision").get<double>()) << ","
              << format_g17(rm.at("f1").get<double>()) << "\n";
        columns["rmse"].push_back(m.at("rmse").get<double>());
        columns["mae"].push_back(m.at("mae").get<double>());
        columns["recall"].push_back(rm.at("recall").get<double>());
        columns["precision"].push_back(rm.at("precision").get<double>());
        columns["f1"].push_back(rm.at("f1").get<double>());
    }

    json agg;
    agg["provenance"] = provenance(config);
    agg["replicates"] = config.replicates;
    for (const auto& [name, values] : columns)
        agg[name] = {{"median", median(values)}, {"iqr", iqr(values)}};
    write_json(agg, out_path(config, "aggregate.json"));
}

}  // namespace funcsel
