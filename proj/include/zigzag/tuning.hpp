#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zigzag/learner.hpp"
#include "zigzag/stats.hpp"

namespace zigzag {

// Ψ_{η,p}(x) = (1/p)(ηx + η^{1−p′}/(p′−1)); its infimum over η is x^{1/p}.
double psi(double eta, double p, double x);
// min of Ψ over `points` log-spaced η in [lo, hi].
double psi_grid_min(double p, double x, std::size_t points = 200, double lo = 1e-2, double hi = 1e2);

// β^p · (max over intervals of ‖Σ z_t‖)^p for signed increments z_t.
double phi_realized(const std::vector<Vec>& increments, const Norm& tag, double p, double beta);

// β^p · E_ε max over intervals ‖Σ ε_t z_t‖^p by Monte Carlo over K sign paths.
// Path k uses signs Rng(seed).split(k).at(t), so estimates on a prefix and on
// its extension share their draws.
Estimate phi_expected(const std::vector<Vec>& increments, const Norm& tag, double p, double beta,
                      std::size_t samples, std::uint64_t seed);
// Same quantity by enumerating all 2ⁿ sign patterns (n ≤ 20).
double phi_expected_exact(const std::vector<Vec>& increments, const Norm& tag, double p, double beta);

enum class TunerMode { Realized, Expected };
std::string tuner_name(TunerMode mode);

struct PhaseRecord {
    std::size_t index = 0;
    std::size_t start = 0;  // first round (0-based)
    std::size_t end = 0;    // one past the last round
    double eta = 0.0;
    double threshold = 0.0;   // η^{−(p′−1)}
    double phi_checked = 0.0; // Φ the invariant bounds: minus the last round (realized) or the full phase (expected)
    double phi_full = 0.0;
    bool completed = false;
};

// η₀ = (βp)^{−p} for p ≥ 2 and 1 otherwise (realized); (βp)^{−p} always (expected, which needs η₀ < 1).
double default_eta0(const BurkholderSpec& spec, TunerMode mode);
// η_i = 2^{−i/(p′−1)} η₀
double doubling_eta(double eta0, double p, std::size_t phase);

struct TunerStep {
    int eps = 0;
    double relaxation = 0.0;  // Rel right after the update, before any restart
    bool restarted = false;
};

class DoublingTuner {
public:
    DoublingTuner(BurkholderSpec spec, TunerMode mode, std::optional<double> eta0, Rng rng,
                  std::size_t samples = 500);

    // In expected mode this first folds x into the phase functional and
    // starts new phases until the boundary condition holds.
    double predict(std::span<const double> x);
    TunerStep update(std::span<const double> x, double dloss);

    // Drops an empty trailing phase; call once the stream ends.
    void finish();

    std::size_t phase() const { return phase_; }
    double eta() const { return learner_.eta(); }
    double eta0() const { return eta0_; }
    std::size_t rounds() const { return round_; }
    const Learner& learner() const { return learner_; }
    const std::vector<PhaseRecord>& phases() const { return phases_; }
    // Σ over phases of Rel(end) − Rel(start), the open phase included.
    double relaxation_change() const;

private:
    void start_phase(std::size_t index);
    void push_expected(std::span<const double> x);
    double phi_expected_now() const;
    double threshold() const;

    BurkholderSpec spec_;
    TunerMode mode_;
    double eta0_;
    double p_;
    double q_;  // p′ − 1
    Learner learner_;
    std::size_t samples_;
    Rng sign_paths_;

    std::size_t phase_ = 1;
    std::size_t round_ = 0;
    std::vector<PhaseRecord> phases_;
    double closed_change_ = 0.0;
    double phase_start_rel_ = 0.0;

    IntervalSupTracker realized_;
    double realized_prev_ = 0.0;
    std::vector<IntervalSupTracker> expected_;
    double expected_phi_ = 0.0;
    bool pending_x_ = false;
};

struct TunedTrace {
    EpisodeTrace trace;
    std::vector<PhaseRecord> phases;
    double eta0 = 0.0;
};

TunedTrace run_tuned_episode(const BurkholderSpec& spec, TunerMode mode, std::optional<double> eta0,
                             LossKind loss_kind, Adversary& adversary, std::size_t n, std::uint64_t seed,
                             const EpisodeOptions& options = {}, std::size_t samples = 500);

}  // namespace zigzag
