#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zigzag/adversary.hpp"
#include "zigzag/burkholder.hpp"
#include "zigzag/losses.hpp"
#include "zigzag/rng.hpp"

namespace zigzag {

struct LearnerState {
    Vec s;  // Σ ℓ′ₛxₛ
    Vec m;  // Σ εₛℓ′ₛxₛ
    std::size_t t = 0;
};

struct CertificateReport {
    double worst_slack = 0.0;  // min over the grid of G(0) − [ŷℓ′ + G(ℓ′)]
    double argmin_dloss = 0.0;
    bool passed = true;
};

// 41 evenly spaced points on [−1, 1].
std::vector<double> default_dloss_grid(std::size_t points = 41);

// ZigZag: ŷ = −G′(0) with G(α) = E_σ (η/p) U(S + αx, M + σαx).
class Learner {
public:
    Learner(BurkholderSpec spec, double eta, Rng rng);

    double predict(std::span<const double> x) const;

    // Draws ε_t from the learner's stream and returns it.
    int update(std::span<const double> x, double dloss);
    void update_with_sign(std::span<const double> x, double dloss, int eps);

    // (η/p) U(S, M)
    double relaxation_value() const;
    // E_σ (η/p) U(S + ℓ′x, M + σℓ′x)
    double expected_next_relaxation(std::span<const double> x, double dloss) const;

    // ŷℓ′ + G(ℓ′) ≤ G(0) for every ℓ′ in the grid; `yhat` overrides the
    // learner's own prediction.
    CertificateReport admissibility_certificate(std::span<const double> x, std::span<const double> grid,
                                                double tol, std::optional<double> yhat = std::nullopt) const;

    void reset();
    void set_eta(double eta);

    const LearnerState& state() const { return state_; }
    const BurkholderSpec& spec() const { return spec_; }
    double eta() const { return eta_; }
    Rng& rng() { return rng_; }

private:
    BurkholderSpec spec_;
    double eta_;
    Rng rng_;
    LearnerState state_;
};

struct EpisodeRow {
    std::size_t t = 0;
    double yhat = 0.0;
    double y = 0.0;
    double loss = 0.0;
    double dloss = 0.0;
    int eps = 0;
    double rel_value = 0.0;
    double cum_loss = 0.0;
};

struct EpisodeTrace {
    std::vector<EpisodeRow> rows;
    std::vector<Vec> xs;
    Vec s;  // final Σ ℓ′x
    Vec m;  // final Σ εℓ′x (within the last phase for tuned runs)
    double cum_loss = 0.0;
    // Σ ŷℓ′ + ‖Σ ℓ′x‖, an upper bound on regret against the dual unit ball.
    double linearized_regret = 0.0;
    // linearized_regret − (1/p)(ηβ^p‖M‖^p + η^{−(p′−1)}/(p′−1)); NaN when η varies.
    double residual = 0.0;
    double min_certificate_slack = 0.0;
    std::size_t certificate_failures = 0;
    // Σ ŷℓ′ + Rel_n − Rel_0 − Σ D_t, where D_t = Rel_t − E_σ Rel_t is the
    // martingale part of the relaxation; ≤ n·tol when every round is admissible.
    double telescoping_excess = 0.0;
};

struct EpisodeOptions {
    bool certify = false;
    double certificate_tol = 1e-8;
    std::size_t grid_points = 41;
};

EpisodeTrace run_episode(const BurkholderSpec& spec, double eta, LossKind loss_kind, Adversary& adversary,
                         std::size_t n, std::uint64_t seed, const EpisodeOptions& options = {});

// The bound's penalty (1/p)(ηβ^p‖M‖^p + η^{−(p′−1)}/(p′−1)).
double regret_bound(const BurkholderSpec& spec, double eta, std::span<const double> m);

}  // namespace zigzag
