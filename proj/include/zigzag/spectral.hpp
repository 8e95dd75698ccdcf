#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zigzag/learner.hpp"

namespace zigzag {

enum class EntryDistribution { Uniform, RowSpiky, AdversarialFile };
EntryDistribution parse_entry_distribution(std::string_view name);
std::string entry_distribution_name(EntryDistribution dist);

struct EntryStream {
    std::size_t d = 0;
    std::vector<std::pair<std::size_t, std::size_t>> entries;
    std::vector<double> labels;
    std::size_t size() const { return entries.size(); }
};

// Labels are signs of a random rank-r matrix F* = ABᵀ. Row-spiky streams hit
// row 0 with probability ½. The file form is {"d": d, "entries": [[i, j], ...], "labels": [...]}.
EntryStream make_entry_stream(std::size_t d, std::size_t r, std::size_t n, EntryDistribution dist,
                              std::uint64_t seed, const std::string& file = {});

struct EntryStats {
    std::size_t n_row = 0;
    std::size_t n_col = 0;
};
EntryStats entry_stats(const EntryStream& stream);

struct Net {
    std::vector<Matrix> points;   // d×r, ‖V‖_F = √τ
    double net_alpha = 0.0;       // requested radius
    double coverage_radius = 0.0; // max probe distance to the net
    bool covered = false;         // coverage_radius ≤ net_alpha
};

// Greedy farthest-point selection from random sphere candidates, stopped at
// max_size points or once every candidate is within net_alpha.
Net build_net(std::size_t d, std::size_t r, double tau, double net_alpha, std::uint64_t seed,
              std::size_t max_size, std::size_t probes = 10000);

// α = 1/(T·τ)
inline double default_net_alpha(std::size_t horizon, double tau) { return 1.0 / (static_cast<double>(horizon) * tau); }

// One expert: a Hilbert p = 2 ZigZag learner on ℝ^{d×r} fed X_t·V.
class NetExpert {
public:
    NetExpert(Matrix v, double eta, double tau, double net_alpha);

    // X_t·V for X_t = e_i ⊗ e_j: row i holds V's row j.
    Vec project(std::size_t i, std::size_t j) const;
    double predict(std::size_t i, std::size_t j) const;
    void update(std::size_t i, std::size_t j, double dloss, int eps);
    CertificateReport certificate(std::size_t i, std::size_t j, std::span<const double> grid, double tol) const;

    const Matrix& v() const { return v_; }
    const Learner& learner() const { return learner_; }

private:
    Matrix v_;
    Learner learner_;
};

// −ητ²(1−α)^{−1}·⟨S·V, X_t·V⟩ for the accumulated S = Σ ℓ′ₛXₛ.
double sub_predict_closed_form(const NetExpert& expert, std::size_t i, std::size_t j, double eta, double tau,
                               double net_alpha);

struct MWState {
    std::vector<double> log_weights;  // −γ Σ ℓₛ[v], up to a constant
    double gamma = 0.0;

    static MWState uniform(std::size_t experts, double gamma);
    std::vector<double> probabilities() const;
};

// Multiplicative step in log space, renormalized so the largest log-weight is 0.
void mw_step(MWState& mw, std::span<const double> losses);

struct SpectralOptions {
    std::size_t d = 3;
    std::size_t r = 1;
    double tau = 3.0;
    std::size_t n = 200;
    std::size_t net_size = 500;
    std::uint64_t seed = 1;
    EntryDistribution distribution = EntryDistribution::Uniform;
    std::string file;
    LossKind loss = LossKind::Hinge;
    std::optional<double> eta;        // default 1/(τ·√max(1, n/d))
    std::optional<double> net_alpha;  // default 1/(n·τ)
    bool certify = true;
    double certificate_tol = 1e-8;
};

double default_spectral_eta(const SpectralOptions& options);

struct SpectralResult {
    EpisodeTrace trace;
    EntryStream stream;
    EntryStats stats;
    std::size_t net_size = 0;
    double net_alpha = 0.0;
    double coverage_radius = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double expected_loss = 0.0;       // Σ_t E_{v∼q_t} ℓ(Clip f_t^v, y_t)
    double comparator_loss = 0.0;     // best of the net and trace-ball searches
    double comparator_net = 0.0;
    double comparator_trace = 0.0;
    double regret = 0.0;              // cum_loss − comparator_loss
    double expected_regret = 0.0;     // expected_loss − comparator_loss
    double rate = 0.0;                // √r·d·√max{N_row, N_col}
    double ratio = 0.0;               // regret / rate
    double max_weight_error = 0.0;    // max_t |Σ q_t − 1|
    double min_certificate_slack = 0.0;
    std::size_t certificate_failures = 0;
    // (t, regret against the best comparator on the first t rounds) over the second half.
    std::vector<std::pair<std::size_t, double>> regret_curve;
};

SpectralResult run_spectral(const SpectralOptions& options);

// Best hinge-type loss over {UVᵀ : ‖U‖_F, ‖V‖_F ≤ √τ, rank ≤ r} by projected
// subgradient on F with trace-ball projection and rank-r truncation.
double trace_ball_comparator(const EntryStream& stream, LossKind loss, std::size_t r, double tau,
                             std::size_t iters = 300);
// min over net points V of the best U (‖U‖_F ≤ √τ) for predictions ⟨U_i, V_j⟩.
double net_comparator(const EntryStream& stream, LossKind loss, const Net& net, double tau,
                      std::size_t iters = 100);

}  // namespace zigzag
