#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zigzag/experiment.hpp"
#include "zigzag/minimax.hpp"
#include "zigzag/probes.hpp"
#include "zigzag/rademacher.hpp"

using namespace zigzag;

namespace {

void emit(const json& doc, const std::string& out) {
    if (out.empty()) std::cout << doc.dump(2) << "\n";
    else write_json(out, doc);
}

void warn_if_uncertified(const BurkholderSpec& spec) {
    const ZetaL1Params* z = spec.zeta();
    if (!z && spec.u1()) z = spec.u1()->weak->zeta();
    if (z && !z->valid())
        std::cerr << "warning: zeta-l1 with a = " << z->a << " < d·log d = " << z->d * std::log(double(z->d))
                  << "; the function is not certified\n";
}

Norm parse_norm(const std::string& name, std::size_t dim) {
    if (name == "l2") return Norm::l2();
    if (name == "l1") return Norm::one();
    if (name == "linf") return Norm::sup();
    if (name.rfind("l", 0) == 0) return Norm::lp(std::stod(name.substr(1)));
    if (name == "spectral") {
        const auto k = static_cast<std::size_t>(std::llround(std::sqrt(double(dim))));
        return Norm::spectral(k, k);
    }
    throw CLI::ValidationError("--norm", "unknown norm " + name);
}

json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"se", e.se}}; }

json check_burkholder(const std::string& spec_text, std::size_t d, std::size_t probes, std::uint64_t seed) {
    const BurkholderSpec spec = spec_from_json(json::parse(spec_text), d);
    warn_if_uncertified(spec);
    const auto maj = check_majorization(spec, probes, seed, 1e-9);
    const auto zz = check_zigzag(spec, probes, seed + 1, 1e-7);
    const auto der = check_derivative(spec, std::min<std::size_t>(probes, 1000), seed + 2);
    const Vec zero(spec.dim(), 0.0);
    return {{"spec", spec.name()},
            {"dim", spec.dim()},
            {"u00", spec.evaluate(zero, zero)},
            {"majorization",
             {{"probes", maj.probes}, {"violations", maj.violations}, {"worst_slack", maj.worst_slack}}},
            {"zigzag",
             {{"probes", zz.probes},
              {"midpoint_violations", zz.midpoint_violations},
              {"worst_midpoint_slack", zz.worst_midpoint_slack},
              {"worst_second_diff", zz.worst_second_diff}}},
            {"derivative",
             {{"probes", der.probes}, {"skipped", der.skipped}, {"max_abs_error", der.max_abs_error}}}};
}

json check_umd(std::size_t depth, std::size_t dim, double p, const std::string& norm_name, std::size_t samples,
               std::size_t patterns, std::uint64_t seed, bool exact) {
    Rng rng(seed);
    const Norm tag = parse_norm(norm_name, dim);
    const DyadicTree tree = gaussian_tree(depth, dim, rng);
    const UMDReport r = umd_check(tree, p, tag, samples, patterns, rng.split(1)(), exact);
    json rec = json::array();
    for (const auto& pr : r.record)
        rec.push_back({{"pattern", pr.pattern},
                       {"lhs", estimate_json(pr.lhs)},
                       {"rhs", estimate_json(pr.rhs)},
                       {"ratio", pr.ratio}});
    return {{"p", r.p},
            {"norm", tag.name()},
            {"exact", r.exact},
            {"samples", r.samples},
            {"max_ratio", r.max_ratio},
            {"argmax", r.argmax},
            {"reference", {{"value", r.reference.value}, {"label", r.reference.label}}},
            {"record", rec}};
}

json check_decoupling(std::size_t depth, double p, std::size_t samples, std::uint64_t seed, bool exact) {
    Rng rng(seed);
    const DyadicTree tree = gaussian_tree(depth, 1, rng);
    json out = {{"depth", depth}, {"p", p}};
    const auto mc = hitczenko_check(tree, p, samples, rng.split(1)());
    out["mc"] = {{"lhs", estimate_json(mc.lhs)},
                 {"rhs", estimate_json(mc.rhs)},
                 {"empirical_k", mc.empirical_k},
                 {"within_bound", mc.within_bound}};
    if (exact) {
        const auto [lhs, rhs] = hitczenko_exact(tree, p);
        out["exact"] = {{"lhs", lhs}, {"rhs", rhs}, {"empirical_k", std::pow(lhs / rhs, 1.0 / p)}};
    }
    return out;
}

json check_rad_oracle(std::size_t n, std::size_t dim, const std::string& norm_name, std::size_t samples,
                      std::size_t instances, std::uint64_t seed) {
    const Norm tag = parse_norm(norm_name, dim);
    Rng rng(seed);
    json rows = json::array();
    std::size_t within = 0;
    for (std::size_t i = 0; i < instances; ++i) {
        std::vector<Vec> zs(n, Vec(dim));
        for (auto& z : zs)
            for (auto& v : z) v = rng.normal();
        const std::uint64_t s = rng();
        const Estimate est = rad_estimate(zs, tag, samples, s);
        const Estimate mx = maximal_rad_estimate(zs, tag, samples, s);
        const double exact = rad_exact(zs, tag), mx_exact = maximal_rad_exact(zs, tag);
        const bool ok = std::abs(est.mean - exact) <= 3 * est.se && std::abs(mx.mean - mx_exact) <= 3 * mx.se;
        within += ok;
        rows.push_back({{"rad", estimate_json(est)},
                        {"rad_exact", exact},
                        {"maximal", estimate_json(mx)},
                        {"maximal_exact", mx_exact},
                        {"within_3se", ok}});
    }
    return {{"n", n}, {"dim", dim}, {"norm", tag.name()}, {"instances", rows}, {"within_3se", within}};
}

json check_minimax(std::size_t sequences, std::size_t max_n, const std::string& loss_text, std::uint64_t seed) {
    const LossKind lk = parse_loss(loss_text);
    const auto grid = minimax_grid();
    Rng rng(seed);
    json rows = json::array();
    double worst = -INFINITY;
    for (std::size_t i = 0; i < sequences; ++i) {
        const std::size_t n = 1 + rng.below(max_n);
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.uniform(-1.0, 1.0);
        const double rad = scalar_rad_exact(xs), value = brute_force_minimax(xs, lk, grid);
        worst = std::max(worst, rad - value);
        rows.push_back({{"xs", xs}, {"rad_exact", rad}, {"minimax", value}});
    }
    return {{"loss", loss_name(lk)}, {"sequences", rows}, {"max_rad_minus_minimax", worst}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ZigZag online learning experiments"};
    app.require_subcommand(1);
    std::string out;
    app.add_option("-o,--out", out, "write the JSON result here instead of stdout");

    std::string config_path, output_dir;
    auto* run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("config", config_path)->required()->check(CLI::ExistingFile);
    run->add_option("--output-dir", output_dir, "overrides output_dir from the config");

    auto* check = app.add_subcommand("check", "numerical self-checks");
    check->require_subcommand(1);
    std::uint64_t seed = 1;
    check->add_option("--seed", seed);

    std::string spec_text = R"({"construction": "hilbert", "p": 2})";
    std::size_t bd = 2, probes = 10000;
    auto* c_burk = check->add_subcommand("burkholder", "majorization, zig-zag and derivative probes");
    c_burk->add_option("--spec", spec_text, "Burkholder spec as JSON");
    c_burk->add_option("--d", bd);
    c_burk->add_option("--probes", probes);

    std::size_t depth = 8, dim = 1, samples = 10000, patterns = 64;
    double p = 2.0;
    bool exact = false;
    std::string norm_name = "l2";
    auto* c_umd = check->add_subcommand("umd", "sign-transform ratios on a random dyadic tree");
    c_umd->add_option("--depth", depth)->check(CLI::Range(1, 14));
    c_umd->add_option("--dim", dim);
    c_umd->add_option("--p", p);
    c_umd->add_option("--norm", norm_name, "l2, l1, linf, l<p> or spectral");
    c_umd->add_option("--samples", samples);
    c_umd->add_option("--patterns", patterns, "random patterns beyond all-ones and alternating");
    c_umd->add_flag("--exact", exact);

    auto* c_dec = check->add_subcommand("decoupling", "one-sided decoupling on a scalar dyadic tree");
    c_dec->add_option("--depth", depth)->check(CLI::Range(1, 12));
    c_dec->add_option("--p", p);
    c_dec->add_option("--samples", samples);
    c_dec->add_flag("--exact", exact);

    std::size_t rn = 8, instances = 10;
    auto* c_rad = check->add_subcommand("rad-oracle", "Monte Carlo Rademacher estimates vs enumeration");
    c_rad->add_option("--n", rn)->check(CLI::Range(1, 20));
    c_rad->add_option("--dim", dim);
    c_rad->add_option("--norm", norm_name);
    c_rad->add_option("--samples", samples);
    c_rad->add_option("--instances", instances);

    std::size_t sequences = 50, max_n = 3;
    std::string loss_text = "absolute";
    auto* c_mm = check->add_subcommand("minimax", "Rademacher complexity vs the exact minimax regret");
    c_mm->add_option("--sequences", sequences);
    c_mm->add_option("--max-n", max_n)->check(CLI::Range(1, 4));
    c_mm->add_option("--loss", loss_text);

    SpectralOptions so;
    std::string dist = "uniform";
    std::size_t rad_k = 1000;
    auto* spectral = app.add_subcommand("spectral", "matrix prediction with a net of ZigZag experts");
    spectral->add_option("--d", so.d);
    spectral->add_option("--r", so.r);
    spectral->add_option("--tau", so.tau);
    spectral->add_option("--n", so.n);
    spectral->add_option("--net-size", so.net_size);
    spectral->add_option("--seed", so.seed);
    spectral->add_option("--entry-distribution", dist, "uniform, row-spiky or adversarial-file");
    spectral->add_option("--file", so.file, "entry stream for adversarial-file");
    spectral->add_option("--output-dir", output_dir);
    spectral->add_option("--rad-samples", rad_k);

    std::string report_dir;
    auto* report = app.add_subcommand("report", "rebuild summary.json from per-cell files");
    report->add_option("dir", report_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(read_text(config_path)));
            if (!output_dir.empty()) cfg.output_dir = output_dir;
            if (cfg.algorithm != Algorithm::Spectral && cfg.algorithm != Algorithm::AdaptiveGd)
                warn_if_uncertified(spec_from_json(cfg.spec, cfg.d));
            emit(run_experiment(cfg).summary, out);
        } else if (*check) {
            if (*c_burk) emit(check_burkholder(spec_text, bd, probes, seed), out);
            else if (*c_umd) emit(check_umd(depth, dim, p, norm_name, samples, patterns, seed, exact), out);
            else if (*c_dec) emit(check_decoupling(depth, p, samples, seed, exact), out);
            else if (*c_rad) emit(check_rad_oracle(rn, dim, norm_name, samples, instances, seed), out);
            else if (*c_mm) emit(check_minimax(sequences, max_n, loss_text, seed), out);
        } else if (*spectral) {
            ExperimentConfig cfg;
            cfg.algorithm = Algorithm::Spectral;
            cfg.n = so.n;
            cfg.d = so.d * so.d;
            cfg.seeds = {so.seed};
            cfg.output_dir = output_dir;
            cfg.rad_samples = rad_k;
            so.distribution = parse_entry_distribution(dist);
            cfg.spectral = so;
            cfg.adversary.kind = AdversaryKind::MatrixEntryStream;
            cfg.adversary.matrix_d = so.d;
            const auto result = run_experiment(cfg);
            emit({{"summary", result.summary}, {"cell", cell_to_json(result.cells.front())}}, out);
        } else if (*report) {
            emit(merge_report_dir(report_dir), out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
