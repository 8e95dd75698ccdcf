#include "zigzag/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zigzag {

double scalar_comparator(std::span<const double> xs, std::span<const double> ys, LossKind loss_kind) {
    std::vector<double> candidates{-1.0, 1.0};
    for (std::size_t t = 0; t < xs.size(); ++t) {
        if (xs[t] == 0.0) continue;
        // Hinge kinks at w·x·y = 1, absolute at w·x = y; both give w = y/x for y = ±1.
        const double w = loss_kind == LossKind::Hinge ? 1.0 / (xs[t] * ys[t]) : ys[t] / xs[t];
        if (std::abs(w) <= 1.0) candidates.push_back(w);
    }
    double best = std::numeric_limits<double>::infinity();
    for (double w : candidates) {
        double total = 0.0;
        for (std::size_t t = 0; t < xs.size(); ++t) total += loss(loss_kind, w * xs[t], ys[t]);
        best = std::min(best, total);
    }
    return best;
}

std::vector<double> minimax_grid() {
    std::vector<double> g(41);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -1.0 + 0.05 * static_cast<double>(i);
    return g;
}

namespace {

double value(std::span<const double> xs, LossKind loss_kind, std::span<const double> grid, std::vector<double>& ys) {
    const std::size_t t = ys.size();
    if (t == xs.size()) return -scalar_comparator(xs, ys, loss_kind);
    double continuation[2];
    for (int k = 0; k < 2; ++k) {
        ys.push_back(k == 0 ? -1.0 : 1.0);
        continuation[k] = value(xs, loss_kind, grid, ys);
        ys.pop_back();
    }
    double best = std::numeric_limits<double>::infinity();
    for (double yhat : grid) {
        const double worst = std::max(loss(loss_kind, yhat, -1.0) + continuation[0],
                                      loss(loss_kind, yhat, 1.0) + continuation[1]);
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace

double brute_force_minimax(std::span<const double> xs, LossKind loss_kind, std::span<const double> yhat_grid) {
    if (xs.size() > 4) throw std::invalid_argument("brute_force_minimax supports n <= 4");
    if (yhat_grid.empty()) throw std::invalid_argument("brute_force_minimax needs a prediction grid");
    std::vector<double> ys;
    ys.reserve(xs.size());
    return value(xs, loss_kind, yhat_grid, ys);
}

double scalar_rad_exact(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n > 24) throw std::invalid_argument("scalar_rad_exact: n too large");
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += (mask >> t) & 1 ? -xs[t] : xs[t];
        total += std::abs(s);
    }
    return n == 0 ? 0.0 : total / std::ldexp(1.0, static_cast<int>(n));
}

}  // namespace zigzag
