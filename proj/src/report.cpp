#include "zigzag/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace zigzag {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_nan(const json& j) {
    return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

json phases_to_json(const std::vector<PhaseRecord>& phases) {
    json out = json::array();
    for (const auto& ph : phases) {
        out.push_back({{"index", ph.index},
                       {"start", ph.start},
                       {"end", ph.end},
                       {"eta", ph.eta},
                       {"threshold", number_or_null(ph.threshold)},
                       {"phi_checked", number_or_null(ph.phi_checked)},
                       {"phi_full", number_or_null(ph.phi_full)},
                       {"completed", ph.completed}});
    }
    return out;
}

namespace {

std::vector<PhaseRecord> phases_from_json(const json& arr) {
    std::vector<PhaseRecord> out;
    for (const auto& j : arr) {
        PhaseRecord ph;
        ph.index = j.at("index").get<std::size_t>();
        ph.start = j.at("start").get<std::size_t>();
        ph.end = j.at("end").get<std::size_t>();
        ph.eta = j.at("eta").get<double>();
        ph.threshold = number_or_nan(j.at("threshold"));
        ph.phi_checked = number_or_nan(j.at("phi_checked"));
        ph.phi_full = number_or_nan(j.at("phi_full"));
        ph.completed = j.at("completed").get<bool>();
        out.push_back(ph);
    }
    return out;
}

json estimate_json(const Estimate& e) { return {{"mean", number_or_null(e.mean)}, {"se", number_or_null(e.se)}}; }

Estimate estimate_from(const json& j) { return {number_or_nan(j.at("mean")), number_or_nan(j.at("se"))}; }

// Mean of the finite entries, or NaN when there are none.
double finite_mean(const std::vector<double>& v) {
    double s = 0.0;
    std::size_t k = 0;
    for (double x : v)
        if (std::isfinite(x)) {
            s += x;
            ++k;
        }
    return k ? s / k : std::numeric_limits<double>::quiet_NaN();
}

json series(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(number_or_null(x));
    return arr;
}

}  // namespace

json cell_to_json(const CellResult& c) {
    return {{"index", c.index},
            {"seed", c.seed},
            {"algorithm", c.algorithm},
            {"n", c.n},
            {"cum_loss", number_or_null(c.cum_loss)},
            {"regret", number_or_null(c.regret)},
            {"benchmark_linearized", number_or_null(c.benchmark_linearized)},
            {"comparator_fw",
             {{"best_loss", number_or_null(c.comparator_loss)},
              {"duality_gap", number_or_null(c.comparator_gap)},
              {"iterations", c.comparator_iterations}}},
            {"rad", estimate_json(c.rad)},
            {"maximal_rad", estimate_json(c.maximal_rad)},
            {"ratio_to_rad", number_or_null(c.ratio_to_rad)},
            {"residual", number_or_null(c.residual)},
            {"min_certificate_slack", number_or_null(c.min_certificate_slack)},
            {"certificate_failures", c.certificate_failures},
            {"telescoping_excess", number_or_null(c.telescoping_excess)},
            {"max_feature_norm", number_or_null(c.max_feature_norm)},
            {"phases", phases_to_json(c.phases)},
            {"extra", c.extra}};
}

CellResult cell_from_json(const json& j) {
    CellResult c;
    c.index = j.at("index").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.algorithm = j.at("algorithm").get<std::string>();
    c.n = j.at("n").get<std::size_t>();
    c.cum_loss = number_or_nan(j.at("cum_loss"));
    c.regret = number_or_nan(j.at("regret"));
    c.benchmark_linearized = number_or_nan(j.at("benchmark_linearized"));
    const auto& fw = j.at("comparator_fw");
    c.comparator_loss = number_or_nan(fw.at("best_loss"));
    c.comparator_gap = number_or_nan(fw.at("duality_gap"));
    c.comparator_iterations = fw.at("iterations").get<std::size_t>();
    c.rad = estimate_from(j.at("rad"));
    c.maximal_rad = estimate_from(j.at("maximal_rad"));
    c.ratio_to_rad = number_or_nan(j.at("ratio_to_rad"));
    c.residual = number_or_nan(j.at("residual"));
    c.min_certificate_slack = number_or_nan(j.at("min_certificate_slack"));
    c.certificate_failures = j.at("certificate_failures").get<std::size_t>();
    c.telescoping_excess = number_or_nan(j.at("telescoping_excess"));
    c.max_feature_norm = number_or_nan(j.at("max_feature_norm"));
    c.phases = phases_from_json(j.at("phases"));
    c.extra = j.value("extra", json::object());
    return c;
}

json summarize(const json& config, const std::vector<CellResult>& cells) {
    std::vector<double> regret, ratio, linearized, comp, gap, rad_mean, residual;
    double rad_var = 0.0;
    json phases = json::array();
    for (const auto& c : cells) {
        regret.push_back(c.regret);
        ratio.push_back(c.ratio_to_rad);
        linearized.push_back(c.benchmark_linearized);
        comp.push_back(c.comparator_loss);
        gap.push_back(c.comparator_gap);
        rad_mean.push_back(c.rad.mean);
        rad_var += c.rad.se * c.rad.se;
        residual.push_back(c.residual);
        phases.push_back({{"seed", c.seed}, {"phases", phases_to_json(c.phases)}});
    }
    const double n = static_cast<double>(cells.size());

    double residual_mean = finite_mean(residual), residual_se = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> finite_res;
    for (double r : residual)
        if (std::isfinite(r)) finite_res.push_back(r);
    if (finite_res.size() > 1) residual_se = mean_se(finite_res).se;
    else if (finite_res.size() == 1) residual_se = 0.0;

    json summary;
    summary["config"] = config;
    summary["regret"] = {{"mean", number_or_null(finite_mean(regret))},
                         {"per_seed", series(regret)},
                         {"ratio_to_rad", {{"mean", number_or_null(finite_mean(ratio))}, {"per_seed", series(ratio)}}}};
    summary["benchmark_linearized"] = {{"mean", number_or_null(finite_mean(linearized))},
                                       {"per_seed", series(linearized)}};
    summary["comparator_fw"] = {{"mean", number_or_null(finite_mean(comp))},
                                {"per_seed", series(comp)},
                                {"duality_gap", series(gap)}};
    summary["rad_mean"] = number_or_null(finite_mean(rad_mean));
    summary["rad_se"] = cells.empty() ? json(nullptr) : number_or_null(std::sqrt(rad_var) / n);
    summary["residual_mean"] = number_or_null(residual_mean);
    summary["residual_se"] = number_or_null(residual_se);
    summary["phases"] = phases;
    return summary;
}

std::string trace_csv(const EpisodeTrace& trace) {
    std::string out = "t,yhat,y,loss,dloss,eps,rel_value,cum_loss\n";
    char buf[512];
    for (const auto& r : trace.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g\n", r.t, r.yhat, r.y, r.loss,
                      r.dloss, r.eps, r.rel_value, r.cum_loss);
        out += buf;
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string cell_json_name(std::uint64_t seed) { return "cell_seed" + std::to_string(seed) + ".json"; }
std::string trace_csv_name(std::uint64_t seed) { return "trace_seed" + std::to_string(seed) + ".csv"; }

json merge_report_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    json config = nullptr;
    if (fs::exists(dir / "config.json")) config = json::parse(read_text(dir / "config.json"));
    std::vector<CellResult> cells;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("cell_seed", 0) == 0 && entry.path().extension() == ".json") {
            try {
                cells.push_back(cell_from_json(json::parse(read_text(entry.path()))));
            } catch (const json::exception& e) {
                throw std::runtime_error("malformed cell file " + entry.path().string() + ": " + e.what());
            }
        }
    }
    std::ranges::sort(cells, [](const CellResult& a, const CellResult& b) {
        return a.index != b.index ? a.index < b.index : a.seed < b.seed;
    });
    const json summary = summarize(config, cells);
    write_json(dir / "summary.json", summary);
    return summary;
}

}  // namespace zigzag
