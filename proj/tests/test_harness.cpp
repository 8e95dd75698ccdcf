#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "zigzag/comparator.hpp"
#include "zigzag/experiment.hpp"
#include "zigzag/minimax.hpp"

using namespace zigzag;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("zigzag_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("adaptive gd examples") {
    FixedAdversary zeros(std::vector<Vec>(10, Vec(3, 0.0)), std::vector<double>(10, 1.0));
    const auto tr = adaptive_gd_baseline(LossKind::Linear, zeros, 10);
    for (const auto& r : tr.rows) CHECK(r.yhat == 0.0);
    const auto comp = offline_comparator(tr.xs, std::vector<double>(10, 1.0), Norm::l2(), LossKind::Linear);
    CHECK(tr.cum_loss - comp.best_loss == 0.0);

    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        normalize_onto_sphere(x, Norm::l2());
        for (auto& v : x) v *= rng.uniform(0, 1);
        const double y = rng.uniform() < 0.5 ? -1.0 : 1.0;
        FixedAdversary one({x}, {y});
        const auto t1 = adaptive_gd_baseline(LossKind::Hinge, one, 1);
        const auto c1 = offline_comparator(t1.xs, std::vector<double>{y}, Norm::l2(), LossKind::Hinge);
        CHECK(t1.cum_loss - c1.best_loss <= 2 * norm(x, Norm::l2()) + 1e-12);
    }

    AdversaryParams ap;
    ap.dim = 10;
    auto adv = make_adversary(ap, 3);
    const auto big = adaptive_gd_baseline(LossKind::Hinge, *adv, 1000);
    std::vector<double> ys;
    double sq = 0.0;
    for (std::size_t t = 0; t < big.rows.size(); ++t) {
        ys.push_back(big.rows[t].y);
        sq += dot(big.xs[t], big.xs[t]);
    }
    const auto cb = offline_comparator(big.xs, ys, Norm::l2(), LossKind::Hinge);
    CHECK((big.cum_loss - cb.best_loss) / std::sqrt(sq) <= 3.0);
    CHECK_THROWS(adaptive_gd_baseline(LossKind::Hinge, *adv, 5, Norm::lp(3)));
}

TEST_CASE("offline comparator examples") {
    Rng rng(2);
    std::vector<Vec> xs;
    std::vector<double> ys;
    for (int t = 0; t < 30; ++t) {
        xs.push_back({rng.normal(), rng.normal(), rng.normal()});
        ys.push_back(rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    for (const auto& tag : {Norm::l2(), Norm::lp(3), Norm::sup(), Norm::one()}) {
        const auto c = offline_comparator(xs, ys, tag, LossKind::Linear);
        Vec s(3, 0.0);
        for (std::size_t t = 0; t < xs.size(); ++t) axpy(ys[t], xs[t], s);
        CHECK(c.best_loss == doctest::Approx(-norm(s, tag)).epsilon(1e-9));
        CHECK(linear_loss_optimum(xs, ys, tag) == doctest::Approx(-norm(s, tag)).epsilon(1e-12));
    }

    // All labels equal, hinge, d = 2: compare with a grid over the unit disc.
    std::vector<Vec> x2;
    for (int t = 0; t < 15; ++t) x2.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const std::vector<double> y2(15, 1.0);
    const auto fw = offline_comparator(x2, y2, Norm::l2(), LossKind::Hinge);
    double best = INFINITY;
    const int m = 800;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            const double a = -1.0 + 2.0 * i / m, b = -1.0 + 2.0 * j / m;
            if (a * a + b * b > 1.0) continue;
            double s = 0.0;
            for (const auto& x : x2) s += loss(LossKind::Hinge, a * x[0] + b * x[1], 1.0);
            best = std::min(best, s);
        }
    CHECK(fw.best_loss <= best + 1e-3);
    CHECK(fw.best_loss >= best - 0.05);

    const auto empty = offline_comparator({}, std::vector<double>{}, Norm::l2(), LossKind::Hinge);
    CHECK(empty.best_loss == 0.0);
    CHECK_THROWS(offline_comparator(xs, ys, Norm::spectral(1, 3), LossKind::Hinge));
}

TEST_CASE("scalar comparator is exact") {
    Rng rng(3);
    for (auto lk : {LossKind::Hinge, LossKind::Absolute}) {
        for (int i = 0; i < 30; ++i) {
            std::vector<double> xs(3), ys(3);
            for (auto& x : xs) x = rng.uniform(-1, 1);
            for (auto& y : ys) y = rng.uniform() < 0.5 ? -1.0 : 1.0;
            const double grid = oracle::grid_min_scalar([&](double w) {
                double s = 0.0;
                for (int t = 0; t < 3; ++t) s += loss(lk, w * xs[t], ys[t]);
                return s;
            });
            CHECK(scalar_comparator(xs, ys, lk) <= grid + 1e-12);
            CHECK(scalar_comparator(xs, ys, lk) >= grid - 1e-4);
        }
    }
}

TEST_CASE("brute force minimax examples") {
    const auto grid = minimax_grid();
    CHECK(grid.size() == 41);
    CHECK(brute_force_minimax(std::vector<double>{1.0}, LossKind::Absolute, grid) == doctest::Approx(1.0));
    CHECK(brute_force_minimax(std::vector<double>{0.0, 0.0}, LossKind::Linear, grid) == doctest::Approx(0.0));
    CHECK(scalar_rad_exact(std::vector<double>{1.0, 1.0}) == 1.0);
    CHECK_THROWS(brute_force_minimax(std::vector<double>(5, 0.1), LossKind::Absolute, grid));

    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> xs(1 + rng.below(3));
        for (auto& x : xs) x = rng.uniform(-1, 1);
        std::vector<Vec> vs;
        for (double x : xs) vs.push_back({x});
        CHECK(scalar_rad_exact(xs) == doctest::Approx(oracle::rad(vs, [](const Vec& v) { return std::abs(v[0]); })));
        CHECK(scalar_rad_exact(xs) <= brute_force_minimax(xs, LossKind::Absolute, grid) + 0.05);
    }
}

TEST_CASE("config parsing") {
    const json j = json::parse(R"({
        "algorithm": "zigzag-doubling-expected",
        "spec": {"construction": "group-p2", "p": 3, "rows": 2, "cols": 2},
        "d": 4, "n": 20, "seeds": [3, 5], "loss": "absolute",
        "adversary": {"name": "iid-rademacher-coords"}
    })");
    const auto c = ExperimentConfig::from_json(j);
    CHECK(c.algorithm == Algorithm::DoublingExpected);
    CHECK(c.seeds == std::vector<std::uint64_t>{3, 5});
    CHECK(c.loss == LossKind::Absolute);
    CHECK(spec_from_json(c.spec, c.d).construction() == Construction::GroupP2);
    const auto back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());

    CHECK_THROWS(ExperimentConfig::from_json(json::parse(R"({"seeds": []})")));
    CHECK_THROWS(ExperimentConfig::from_json(json::parse(R"({"algorithm": "hedge"})")));
    CHECK_THROWS(ExperimentConfig::from_json(json::parse(R"({"loss": "squared"})")));
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"construction": "group-p2", "rows": 2, "cols": 3})"), 4),
                    DimensionError);
    CHECK(spec_from_json(json::parse(R"({"construction": "weighted-l2", "diag": [1, 2]})"), 2).dim() == 2);
    CHECK(spec_from_json(json::parse(R"({"construction": "hilbert", "gram": [[2, 0], [0, 1]]})"), 2).dim() == 2);
    CHECK(spec_from_json(json::parse(R"({"construction": "u1-composed", "bound": 2, "eps": 0.5})"), 2).u1()->terms == 4);
    CHECK(algorithm_name(parse_algorithm("adaptive-gd")) == "adaptive-gd");
}

TEST_CASE("summary schema and files") {
    ExperimentConfig c;
    c.algorithm = Algorithm::DoublingRealized;
    c.spec = {{"construction", "lp-sum"}, {"p", 3}};
    c.d = 3;
    c.n = 25;
    c.seeds = {4, 2};
    c.rad_samples = 200;
    c.fw_iters = 100;
    c.adversary.kind = AdversaryKind::SignFlip;
    const fs::path dir = scratch_dir("schema");
    c.output_dir = dir.string();
    const auto out = run_experiment(c);

    std::vector<std::string> keys;
    for (const auto& [k, v] : out.summary.items()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    CHECK(keys == std::vector<std::string>{"benchmark_linearized", "comparator_fw", "config", "phases", "rad_mean",
                                           "rad_se", "regret", "residual_mean", "residual_se"});
    CHECK(out.summary["regret"]["per_seed"].size() == 2);
    CHECK(out.summary["regret"].contains("ratio_to_rad"));

    for (std::uint64_t seed : c.seeds) {
        const std::string csv = read_text(dir / trace_csv_name(seed));
        CHECK(csv.rfind("t,yhat,y,loss,dloss,eps,rel_value,cum_loss\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);
    }
    const json merged = merge_report_dir(dir);
    CHECK(merged == out.summary);
    CHECK(json::parse(read_text(dir / "summary.json")) == out.summary);

    const json none = summarize(nullptr, {});
    CHECK(none.size() == 9);
    CHECK(none["regret"]["per_seed"].empty());

    CHECK_THROWS(merge_report_dir(dir / "missing"));
    fs::remove_all(dir);
}

TEST_CASE("cell results round trip") {
    CellResult c;
    c.seed = 9;
    c.algorithm = "zigzag";
    c.regret = 1.5;
    c.residual = std::nan("");
    c.phases.push_back({1, 0, 4, 0.5, 2.0, 1.0, 3.0, true});
    const CellResult back = cell_from_json(cell_to_json(c));
    CHECK(back.seed == 9);
    CHECK(back.regret == 1.5);
    CHECK(std::isnan(back.residual));
    CHECK(back.phases.size() == 1);
    CHECK(cell_to_json(back) == cell_to_json(c));
}

TEST_CASE("identical seeds give identical outputs") {
    for (auto alg : {Algorithm::ZigZag, Algorithm::DoublingExpected, Algorithm::AdaptiveGd, Algorithm::Spectral}) {
        ExperimentConfig c;
        c.algorithm = alg;
        c.n = 30;
        c.d = 4;
        c.seeds = {7};
        c.rad_samples = 200;
        c.fw_iters = 100;
        c.expected_samples = 100;
        c.spectral.n = 30;
        c.spectral.net_size = 20;
        const fs::path a = scratch_dir("rep_a"), b = scratch_dir("rep_b");
        c.output_dir = a.string();
        run_experiment(c);
        c.output_dir = b.string();
        run_experiment(c);
        for (const auto& name : {trace_csv_name(7), cell_json_name(7)}) CHECK(read_text(a / name) == read_text(b / name));
        fs::remove_all(a);
        fs::remove_all(b);
    }
}
