#include "zigzag/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "zigzag/comparator.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/rademacher.hpp"
#include "zigzag/tuning.hpp"

namespace zigzag {

Algorithm parse_algorithm(std::string_view name) {
    if (name == "zigzag") return Algorithm::ZigZag;
    if (name == "zigzag-doubling-realized") return Algorithm::DoublingRealized;
    if (name == "zigzag-doubling-expected") return Algorithm::DoublingExpected;
    if (name == "adaptive-gd") return Algorithm::AdaptiveGd;
    if (name == "spectral") return Algorithm::Spectral;
    throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::ZigZag: return "zigzag";
        case Algorithm::DoublingRealized: return "zigzag-doubling-realized";
        case Algorithm::DoublingExpected: return "zigzag-doubling-expected";
        case Algorithm::AdaptiveGd: return "adaptive-gd";
        case Algorithm::Spectral: return "spectral";
    }
    return "?";
}

namespace {

Matrix matrix_from_json(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::invalid_argument("matrix must be non-empty");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols) throw DimensionError("ragged matrix in configuration");
        for (std::size_t k = 0; k < m.cols; ++k) m(i, k) = rows[i][k];
    }
    return m;
}

void require_dim(std::size_t have, std::size_t want, const std::string& what) {
    if (have != want)
        throw DimensionError(what + " needs d = " + std::to_string(want) + ", got " + std::to_string(have));
}

}  // namespace

BurkholderSpec spec_from_json(const json& j, std::size_t d) {
    const Construction c = parse_construction(j.at("construction").get<std::string>());
    const double p = j.value("p", 2.0);
    switch (c) {
        case Construction::ScalarP:
            require_dim(d, 1, "scalar");
            return BurkholderSpec::scalar(p);
        case Construction::LpSum: return BurkholderSpec::lp_sum(p, d);
        case Construction::WeightedL2: {
            Matrix a;
            if (j.contains("weight")) a = matrix_from_json(j.at("weight"));
            else if (j.contains("diag")) a = Matrix::diag(j.at("diag").get<std::vector<double>>());
            else a = Matrix::identity(d);
            require_dim(d, a.rows, "weighted-l2");
            return BurkholderSpec::weighted_l2(std::move(a));
        }
        case Construction::HilbertP:
            if (j.contains("gram")) {
                Matrix g = matrix_from_json(j.at("gram"));
                require_dim(d, g.rows, "hilbert with Gram matrix");
                return BurkholderSpec::hilbert_gram(p, std::move(g));
            }
            return BurkholderSpec::hilbert(p, d);
        case Construction::GroupP2: {
            const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
            require_dim(d, rows * cols, "group-p2");
            return BurkholderSpec::group_p2(p, rows, cols);
        }
        case Construction::ElementaryScalarK:
            require_dim(d, 1, "elementary");
            return BurkholderSpec::elementary_scalar(j.value("k", 4));
        case Construction::ZetaL1Weak:
        case Construction::U1Composed: {
            ZetaL1Params z;
            z.d = d;
            z.a = j.value("a", std::max(10.0, d * std::log(static_cast<double>(d))));
            auto weak = weak_type_from_zeta(z);
            if (c == Construction::ZetaL1Weak) return weak;
            return compose_u1(weak, j.value("bound", 4.0), j.value("eps", 0.5));
        }
    }
    throw std::invalid_argument("unsupported construction");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    c.algorithm = parse_algorithm(j.value("algorithm", std::string("zigzag")));
    if (j.contains("spec")) c.spec = j.at("spec");
    c.loss = parse_loss(j.value("loss", std::string("hinge")));
    c.n = j.value("n", c.n);
    c.d = j.value("d", c.d);
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (c.seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
    c.output_dir = j.value("output_dir", std::string());
    if (j.contains("eta") && !j.at("eta").is_null()) c.eta = j.at("eta").get<double>();
    if (j.contains("eta0") && !j.at("eta0").is_null()) c.eta0 = j.at("eta0").get<double>();
    c.certify = j.value("certify", false);
    c.rad_samples = j.value("rad_samples", c.rad_samples);
    c.fw_iters = j.value("fw_iters", c.fw_iters);
    c.expected_samples = j.value("expected_samples", c.expected_samples);

    const json adv = j.value("adversary", json::object());
    c.adversary.kind = parse_adversary(adv.value("name", std::string("iid-gaussian")));
    c.adversary.dim = c.d;
    c.adversary.normalize = adv.value("normalize", true);
    c.adversary.label_noise = adv.value("noise", 0.1);
    c.adversary.rank = adv.value("rank", std::size_t{2});
    c.adversary.file = adv.value("file", std::string());
    c.adversary.matrix_d = adv.value("matrix_d", static_cast<std::size_t>(std::llround(std::sqrt(c.d))));

    const json sp = j.value("spectral", json::object());
    c.spectral.d = sp.value("d", c.spectral.d);
    c.spectral.r = sp.value("r", c.spectral.r);
    c.spectral.tau = sp.value("tau", c.spectral.tau);
    c.spectral.net_size = sp.value("net_size", c.spectral.net_size);
    c.spectral.distribution = parse_entry_distribution(sp.value("entry_distribution", std::string("uniform")));
    c.spectral.file = sp.value("file", std::string());
    if (sp.contains("eta")) c.spectral.eta = sp.at("eta").get<double>();
    if (sp.contains("net_alpha")) c.spectral.net_alpha = sp.at("net_alpha").get<double>();
    c.spectral.certify = sp.value("certify", true);
    c.spectral.n = c.n;
    c.spectral.loss = c.loss;

    if (c.algorithm != Algorithm::Spectral) spec_from_json(c.spec, c.d);
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["algorithm"] = algorithm_name(algorithm);
    j["spec"] = spec;
    j["loss"] = loss_name(loss);
    j["n"] = n;
    j["d"] = d;
    j["seeds"] = seeds;
    j["output_dir"] = output_dir;
    j["eta"] = eta ? json(*eta) : json(nullptr);
    j["eta0"] = eta0 ? json(*eta0) : json(nullptr);
    j["certify"] = certify;
    j["rad_samples"] = rad_samples;
    j["fw_iters"] = fw_iters;
    j["expected_samples"] = expected_samples;
    j["adversary"] = {{"name", adversary_name(adversary.kind)},
                      {"normalize", adversary.normalize},
                      {"noise", adversary.label_noise},
                      {"rank", adversary.rank},
                      {"file", adversary.file},
                      {"matrix_d", adversary.matrix_d}};
    if (algorithm == Algorithm::Spectral) {
        j["spectral"] = {{"d", spectral.d},
                         {"r", spectral.r},
                         {"tau", spectral.tau},
                         {"net_size", spectral.net_size},
                         {"entry_distribution", entry_distribution_name(spectral.distribution)},
                         {"file", spectral.file},
                         {"eta", spectral.eta ? json(*spectral.eta) : json(nullptr)},
                         {"net_alpha", spectral.net_alpha ? json(*spectral.net_alpha) : json(nullptr)},
                         {"certify", spectral.certify}};
    }
    return j;
}

namespace {

CellOutput run_spectral_cell(const ExperimentConfig& config, std::size_t index) {
    SpectralOptions o = config.spectral;
    o.seed = config.seeds[index];
    const SpectralResult r = run_spectral(o);
    CellOutput out;
    CellResult& c = out.result;
    c.index = index;
    c.seed = o.seed;
    c.algorithm = algorithm_name(config.algorithm);
    c.n = r.stream.size();
    c.cum_loss = r.trace.cum_loss;
    c.regret = r.regret;
    c.comparator_loss = r.comparator_loss;
    c.comparator_gap = std::numeric_limits<double>::quiet_NaN();
    c.min_certificate_slack = r.min_certificate_slack;
    c.certificate_failures = r.certificate_failures;
    c.telescoping_excess = std::numeric_limits<double>::quiet_NaN();
    c.residual = std::numeric_limits<double>::quiet_NaN();
    c.max_feature_norm = r.stream.size() ? 1.0 : 0.0;

    // Rad of the trace-norm ball: τ·E‖Σ ε_t ℓ′_t X_t‖_σ.
    const std::size_t d = r.stream.d;
    std::vector<Vec> zs;
    Matrix s(d, d, 0.0);
    double payoff = 0.0;
    for (std::size_t t = 0; t < c.n; ++t) {
        Vec z(d * d, 0.0);
        const auto [i, j] = r.stream.entries[t];
        z[i * d + j] = r.trace.rows[t].dloss;
        s(i, j) += r.trace.rows[t].dloss;
        payoff += r.trace.rows[t].yhat * r.trace.rows[t].dloss;
        zs.push_back(std::move(z));
    }
    const Norm spectral = Norm::spectral(d, d);
    const Rng root(o.seed);
    if (!zs.empty()) {
        const auto samples = rad_samples(zs, spectral, config.rad_samples, root.split(21)());
        c.rad = mean_se(samples.plain, batch_count(config.rad_samples));
        c.maximal_rad = mean_se(samples.maximal, batch_count(config.rad_samples));
        c.rad.mean *= o.tau;
        c.rad.se *= o.tau;
        c.maximal_rad.mean *= o.tau;
        c.maximal_rad.se *= o.tau;
    }
    c.benchmark_linearized = payoff + o.tau * norm(s, spectral);
    c.ratio_to_rad = c.rad.mean > 0.0 ? c.regret / c.rad.mean : std::numeric_limits<double>::quiet_NaN();
    json curve = json::array();
    for (const auto& [t, reg] : r.regret_curve) curve.push_back({t, reg});
    c.extra = {{"net_size", r.net_size},
               {"net_alpha", r.net_alpha},
               {"coverage_radius", r.coverage_radius},
               {"eta", r.eta},
               {"gamma", r.gamma},
               {"n_row", r.stats.n_row},
               {"n_col", r.stats.n_col},
               {"expected_loss", r.expected_loss},
               {"expected_regret", r.expected_regret},
               {"comparator_net", r.comparator_net},
               {"comparator_trace", r.comparator_trace},
               {"rate", r.rate},
               {"rate_ratio", number_or_null(r.ratio)},
               {"max_weight_error", r.max_weight_error},
               {"regret_curve", curve}};
    out.trace = r.trace;
    return out;
}

}  // namespace

CellOutput run_cell(const ExperimentConfig& config, std::size_t index) {
    if (config.algorithm == Algorithm::Spectral) return run_spectral_cell(config, index);
    const std::uint64_t seed = config.seeds.at(index);
    const Rng root(seed);

    // The baseline only reads the spec for its norm, which must be ℓ2.
    const std::optional<BurkholderSpec> spec = spec_from_json(config.spec, config.d);
    const Norm tag = spec->space_norm();
    AdversaryParams ap = config.adversary;
    ap.dim = config.d;
    ap.norm = tag;
    auto adversary = make_adversary(ap, root.split(11)());

    CellOutput out;
    CellResult& c = out.result;
    c.index = index;
    c.seed = seed;
    c.algorithm = algorithm_name(config.algorithm);
    c.n = config.n;

    EpisodeOptions opts;
    opts.certify = config.certify;
    switch (config.algorithm) {
        case Algorithm::ZigZag:
            out.trace = run_episode(*spec, config.eta.value_or(1.0), config.loss, *adversary, config.n, seed, opts);
            break;
        case Algorithm::DoublingRealized:
        case Algorithm::DoublingExpected: {
            const TunerMode mode =
                config.algorithm == Algorithm::DoublingRealized ? TunerMode::Realized : TunerMode::Expected;
            auto tuned = run_tuned_episode(*spec, mode, config.eta0, config.loss, *adversary, config.n, seed, opts,
                                           config.expected_samples);
            out.trace = std::move(tuned.trace);
            c.phases = std::move(tuned.phases);
            c.extra["eta0"] = tuned.eta0;
            break;
        }
        case Algorithm::AdaptiveGd:
            out.trace = adaptive_gd_baseline(config.loss, *adversary, config.n, tag);
            break;
        case Algorithm::Spectral:
            break;
    }
    const EpisodeTrace& tr = out.trace;

    std::vector<double> ys, dls;
    std::vector<Vec> zs;
    for (std::size_t t = 0; t < tr.rows.size(); ++t) {
        ys.push_back(tr.rows[t].y);
        dls.push_back(tr.rows[t].dloss);
        zs.push_back(scaled(tr.xs[t], tr.rows[t].dloss));
        c.max_feature_norm = std::max(c.max_feature_norm, norm(tr.xs[t], tag));
    }
    const auto comp = offline_comparator(tr.xs, ys, tag, config.loss, config.fw_iters, dls);
    c.cum_loss = tr.cum_loss;
    c.comparator_loss = comp.best_loss;
    c.comparator_gap = comp.duality_gap;
    c.comparator_iterations = comp.iterations;
    c.regret = tr.cum_loss - comp.best_loss;
    c.benchmark_linearized = tr.linearized_regret;
    if (!zs.empty()) {
        const auto samples = rad_samples(zs, tag, config.rad_samples, root.split(21)());
        c.rad = mean_se(samples.plain, batch_count(config.rad_samples));
        c.maximal_rad = mean_se(samples.maximal, batch_count(config.rad_samples));
    }
    c.ratio_to_rad = c.rad.mean > 0.0 ? c.regret / c.rad.mean : std::numeric_limits<double>::quiet_NaN();
    c.residual = tr.residual;
    c.min_certificate_slack = tr.min_certificate_slack;
    c.certificate_failures = tr.certificate_failures;
    c.telescoping_excess = tr.telescoping_excess;
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    std::vector<CellOutput> outputs(config.seeds.size());
    // Cells run in parallel; Monte Carlo inside a cell stays serial.
    const std::size_t workers = worker_count();
    parallel_for(
        config.seeds.size(), [&](std::size_t i) { outputs[i] = run_cell(config, i); }, workers);

    ExperimentOutput result;
    for (const auto& o : outputs) result.cells.push_back(o.result);
    const json resolved = config.to_json();
    result.summary = summarize(resolved, result.cells);
    if (!config.output_dir.empty()) {
        const fs::path dir(config.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
        write_json(dir / "config.json", resolved);
        for (const auto& o : outputs) {
            write_text(dir / trace_csv_name(o.result.seed), trace_csv(o.trace));
            write_json(dir / cell_json_name(o.result.seed), cell_to_json(o.result));
        }
        write_json(dir / "summary.json", result.summary);
    }
    return result;
}

}  // namespace zigzag
