#pragma once

#include <span>
#include <vector>

#include "zigzag/adversary.hpp"
#include "zigzag/learner.hpp"
#include "zigzag/losses.hpp"

namespace zigzag {

// Online projected gradient descent on the unit ℓ2 ball with
// η_t = D/√(Σ_{s≤t}‖ℓ′ₛxₛ‖²), D = 2; predictions ⟨w_t, x_t⟩. Throws
// unless `tag` is the ℓ2 norm.
EpisodeTrace adaptive_gd_baseline(LossKind loss_kind, Adversary& adversary, std::size_t n,
                                  const Norm& tag = Norm::l2(), double diameter = 2.0);

struct ComparatorResult {
    double best_loss = 0.0;      // smallest Σ ℓ(⟨w, x_t⟩, y_t) found
    Vec w;                       // its comparator
    double duality_gap = 0.0;    // ⟨g, w − s⟩ at the final iterate
    double linearized = 0.0;     // ‖Σ ℓ′_t x_t‖ for the supplied ℓ′
    std::size_t iterations = 0;
};

// Frank–Wolfe over the unit ball of the dual of `tag` with exact line search.
// `dlosses` (optional) are the learner's realized ℓ′_t for the linearized benchmark.
ComparatorResult offline_comparator(const std::vector<Vec>& xs, std::span<const double> ys, const Norm& tag,
                                    LossKind loss_kind, std::size_t iters = 500,
                                    std::span<const double> dlosses = {});

// Closed form for the linear loss: −‖Σ y_t x_t‖.
double linear_loss_optimum(const std::vector<Vec>& xs, std::span<const double> ys, const Norm& tag);

}  // namespace zigzag
