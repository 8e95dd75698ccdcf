#include "zigzag/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zigzag {

EpisodeTrace adaptive_gd_baseline(LossKind loss_kind, Adversary& adversary, std::size_t n, const Norm& tag,
                                  double diameter) {
    if (tag.kind != NormKind::Lp || tag.p != 2.0)
        throw std::invalid_argument("adaptive_gd_baseline: needs the l2 norm, got " + tag.name());
    const std::size_t dim = adversary.dim();
    const Norm l2 = Norm::l2();
    Vec w(dim, 0.0), s(dim, 0.0);
    double grad_sq = 0.0, payoff = 0.0;
    EpisodeTrace trace;
    trace.rows.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const Vec x = adversary.features(t);
        if (x.size() != dim) throw DimensionError("adaptive_gd_baseline: feature dimension changed");
        const double yhat = dot(w, x);
        const double y = adversary.label(t, x, yhat);
        const double lv = loss(loss_kind, yhat, y);
        const double dl = dloss(loss_kind, yhat, y);
        payoff += yhat * dl;
        axpy(dl, x, s);
        grad_sq += dl * dl * dot(x, x);
        if (grad_sq > 0.0) {
            axpy(-diameter / std::sqrt(grad_sq) * dl, x, w);
            const double wn = norm(w, l2);
            if (wn > 1.0)
                for (double& v : w) v /= wn;
        }
        trace.cum_loss += lv;
        trace.rows.push_back({t + 1, yhat, y, lv, dl, 0, 0.0, trace.cum_loss});
        trace.xs.push_back(x);
    }
    trace.s = s;
    trace.m.assign(dim, 0.0);
    trace.linearized_regret = payoff + norm(s, l2);
    trace.residual = std::numeric_limits<double>::quiet_NaN();
    trace.min_certificate_slack = std::numeric_limits<double>::quiet_NaN();
    trace.telescoping_excess = std::numeric_limits<double>::quiet_NaN();
    return trace;
}

double linear_loss_optimum(const std::vector<Vec>& xs, std::span<const double> ys, const Norm& tag) {
    if (xs.empty()) return 0.0;
    Vec s(xs.front().size(), 0.0);
    for (std::size_t t = 0; t < xs.size(); ++t) axpy(ys[t], xs[t], s);
    return -norm(s, tag);
}

namespace {

// argmin over γ ∈ [0, 1] of a convex function by golden-section search.
template <class F>
double line_search(F&& phi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 60; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = phi(d);
        }
    }
    // Endpoints matter for piecewise-linear objectives.
    double best = 0.5 * (a + b), fbest = phi(best);
    for (double g : {0.0, 1.0}) {
        const double v = phi(g);
        if (v < fbest) {
            fbest = v;
            best = g;
        }
    }
    return best;
}

}  // namespace

ComparatorResult offline_comparator(const std::vector<Vec>& xs, std::span<const double> ys, const Norm& tag,
                                    LossKind loss_kind, std::size_t iters, std::span<const double> dlosses) {
    ComparatorResult res;
    const std::size_t n = xs.size();
    if (ys.size() != n) throw DimensionError("offline_comparator: xs and ys differ in length");
    if (!dlosses.empty() && dlosses.size() != n) throw DimensionError("offline_comparator: dlosses length");
    if (n == 0) return res;
    const std::size_t dim = xs.front().size();
    if (!dlosses.empty()) {
        Vec s(dim, 0.0);
        for (std::size_t t = 0; t < n; ++t) axpy(dlosses[t], xs[t], s);
        res.linearized = norm(s, tag);
    }

    Vec w(dim, 0.0);
    std::vector<double> a(n, 0.0), b(n);
    auto objective = [&](std::span<const double> preds) {
        double total = 0.0;
        for (std::size_t t = 0; t < n; ++t) total += loss(loss_kind, preds[t], ys[t]);
        return total;
    };
    res.best_loss = objective(a);
    res.w = w;
    Vec g(dim);
    for (std::size_t k = 0; k < iters; ++k) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t t = 0; t < n; ++t) axpy(dloss(loss_kind, a[t], ys[t]), xs[t], g);
        const Vec s = dual_ball_lmo(g, tag);
        const Vec dir = added(s, w, -1.0);
        res.duality_gap = -pairing(dir, g, tag);
        res.iterations = k + 1;
        if (res.duality_gap <= 0.0) break;
        for (std::size_t t = 0; t < n; ++t) b[t] = pairing(dir, xs[t], tag);
        const double gamma = line_search([&](double gm) {
            double total = 0.0;
            for (std::size_t t = 0; t < n; ++t) total += loss(loss_kind, a[t] + gm * b[t], ys[t]);
            return total;
        });
        if (gamma == 0.0) {
            // A kink blocks the FW direction; take a short diminishing step to move off it.
            const double step = 2.0 / (k + 2.0);
            axpy(step, dir, w);
            for (std::size_t t = 0; t < n; ++t) a[t] += step * b[t];
        } else {
            axpy(gamma, dir, w);
            for (std::size_t t = 0; t < n; ++t) a[t] += gamma * b[t];
        }
        const double value = objective(a);
        if (value < res.best_loss) {
            res.best_loss = value;
            res.w = w;
        }
    }
    return res;
}

}  // namespace zigzag
