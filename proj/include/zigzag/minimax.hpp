#pragma once

#include <span>
#include <vector>

#include "zigzag/losses.hpp"

namespace zigzag {

// inf over |w| ≤ 1 of Σ ℓ(w·x_t, y_t), exact: the objective is piecewise
// linear in w, so it suffices to scan ±1 and the kinks inside [−1, 1].
double scalar_comparator(std::span<const double> xs, std::span<const double> ys, LossKind loss_kind);

// Backward-induction value of the regret game on a fixed scalar sequence:
// min over ŷ_1 in the grid, max over y_1 ∈ {±1}, …, of
// Σ ℓ(ŷ_t, y_t) − inf_{|w|≤1} Σ ℓ(w·x_t, y_t). Requires n ≤ 4.
double brute_force_minimax(std::span<const double> xs, LossKind loss_kind, std::span<const double> yhat_grid);

// 41 points on [−1, 1].
std::vector<double> minimax_grid();

// E_ε |Σ ε_t x_t| by enumeration.
double scalar_rad_exact(std::span<const double> xs);

}  // namespace zigzag
