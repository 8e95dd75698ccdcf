#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "zigzag/learner.hpp"
#include "zigzag/tuning.hpp"

namespace zigzag {

using json = nlohmann::json;

// Non-finite values become null.
json number_or_null(double v);
double number_or_nan(const json& j);

json phases_to_json(const std::vector<PhaseRecord>& phases);

// One (config, seed) cell of an experiment.
struct CellResult {
    std::size_t index = 0;  // position in the seed list
    std::uint64_t seed = 0;
    std::string algorithm;
    std::size_t n = 0;
    double cum_loss = 0.0;
    double regret = 0.0;                // cum_loss − comparator best loss
    double benchmark_linearized = 0.0;  // Σ ŷℓ′ + ‖Σ ℓ′x‖
    double comparator_loss = 0.0;
    double comparator_gap = 0.0;
    std::size_t comparator_iterations = 0;
    Estimate rad;
    Estimate maximal_rad;
    double ratio_to_rad = 0.0;  // regret / rad.mean
    double residual = 0.0;      // NaN unless η is fixed
    double min_certificate_slack = 0.0;
    std::size_t certificate_failures = 0;
    double telescoping_excess = 0.0;
    double max_feature_norm = 0.0;
    std::vector<PhaseRecord> phases;
    json extra = json::object();
};

json cell_to_json(const CellResult& cell);
CellResult cell_from_json(const json& j);

// Top-level keys are exactly: config, regret, benchmark_linearized,
// comparator_fw, rad_mean, rad_se, residual_mean, residual_se, phases.
json summarize(const json& config, const std::vector<CellResult>& cells);

// CSV columns: t, yhat, y, loss, dloss, eps, rel_value, cum_loss.
std::string trace_csv(const EpisodeTrace& trace);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& doc);

std::string cell_json_name(std::uint64_t seed);
std::string trace_csv_name(std::uint64_t seed);

// Rebuilds summary.json in `dir` from config.json and the per-cell files,
// ordered by their seed-list position. Returns the summary.
json merge_report_dir(const std::filesystem::path& dir);

}  // namespace zigzag
