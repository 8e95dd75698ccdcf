#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zigzag/adversary.hpp"
#include "zigzag/report.hpp"
#include "zigzag/spectral.hpp"

namespace zigzag {

enum class Algorithm { ZigZag, DoublingRealized, DoublingExpected, AdaptiveGd, Spectral };
Algorithm parse_algorithm(std::string_view name);
std::string algorithm_name(Algorithm a);

// Builds a Burkholder function from its JSON description, e.g.
// {"construction": "lp-sum", "p": 3}. `d` is the feature dimension; matrix
// constructions take "rows"/"cols", weighted/Gram ones an explicit matrix.
BurkholderSpec spec_from_json(const json& j, std::size_t d);

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::ZigZag;
    json spec = {{"construction", "hilbert"}, {"p", 2.0}};
    LossKind loss = LossKind::Hinge;
    AdversaryParams adversary;
    std::size_t n = 100;
    std::size_t d = 10;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir;
    std::optional<double> eta;
    std::optional<double> eta0;
    bool certify = false;
    std::size_t rad_samples = 1000;
    std::size_t fw_iters = 500;
    std::size_t expected_samples = 500;
    SpectralOptions spectral;

    static ExperimentConfig from_json(const json& j);
    // The resolved configuration, defaults filled in.
    json to_json() const;
};

struct CellOutput {
    CellResult result;
    EpisodeTrace trace;
};

CellOutput run_cell(const ExperimentConfig& config, std::size_t index);

struct ExperimentOutput {
    std::vector<CellResult> cells;
    json summary;
};

// Runs every seed on the worker pool. With an output directory, writes
// config.json, one CSV and one JSON per cell, then summary.json.
ExperimentOutput run_experiment(const ExperimentConfig& config);

}  // namespace zigzag
