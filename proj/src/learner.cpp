#include "zigzag/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zigzag {

std::vector<double> default_dloss_grid(std::size_t points) {
    if (points < 2) return {0.0};
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = -1.0 + 2.0 * static_cast<double>(i) / (points - 1);
    return grid;
}

Learner::Learner(BurkholderSpec spec, double eta, Rng rng) : spec_(std::move(spec)), eta_(eta), rng_(rng) {
    if (!(eta > 0.0)) throw std::invalid_argument("learning rate must be positive");
    reset();
}

void Learner::reset() {
    state_.s.assign(spec_.dim(), 0.0);
    state_.m.assign(spec_.dim(), 0.0);
    state_.t = 0;
}

void Learner::set_eta(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("learning rate must be positive");
    eta_ = eta;
}

double Learner::predict(std::span<const double> x) const {
    if (x.size() != spec_.dim()) throw DimensionError("feature dimension does not match the learner");
    const double plus = spec_.zigzag_dirderiv(state_.s, state_.m, x, +1);
    const double minus = spec_.zigzag_dirderiv(state_.s, state_.m, x, -1);
    return -(eta_ / spec_.p()) * 0.5 * (plus + minus);
}

int Learner::update(std::span<const double> x, double dloss) {
    const int eps = rng_.rademacher();
    update_with_sign(x, dloss, eps);
    return eps;
}

void Learner::update_with_sign(std::span<const double> x, double dloss, int eps) {
    if (x.size() != spec_.dim()) throw DimensionError("feature dimension does not match the learner");
    if (!(std::abs(dloss) <= 1.0 + 1e-12)) throw std::invalid_argument("|dloss| must be at most 1");
    axpy(dloss, x, state_.s);
    axpy(eps * dloss, x, state_.m);
    ++state_.t;
}

double Learner::relaxation_value() const { return (eta_ / spec_.p()) * spec_.evaluate(state_.s, state_.m); }

double Learner::expected_next_relaxation(std::span<const double> x, double dloss) const {
    const Vec s = added(state_.s, x, dloss);
    const double up = spec_.evaluate(s, added(state_.m, x, dloss));
    const double down = spec_.evaluate(s, added(state_.m, x, -dloss));
    return (eta_ / spec_.p()) * 0.5 * (up + down);
}

CertificateReport Learner::admissibility_certificate(std::span<const double> x, std::span<const double> grid,
                                                     double tol, std::optional<double> yhat) const {
    const double yh = yhat ? *yhat : predict(x);
    const double g0 = relaxation_value();
    CertificateReport rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (double d : grid) {
        const double slack = g0 - (yh * d + expected_next_relaxation(x, d));
        if (slack < rep.worst_slack) {
            rep.worst_slack = slack;
            rep.argmin_dloss = d;
        }
    }
    rep.passed = rep.worst_slack >= -tol;
    return rep;
}

double regret_bound(const BurkholderSpec& spec, double eta, std::span<const double> m) {
    const double p = spec.p();
    if (!(p > 1.0)) return std::numeric_limits<double>::quiet_NaN();
    const double q = conjugate(p).p_prime - 1.0;
    const double mn = norm(m, spec.space_norm());
    return (eta * std::pow(spec.beta(), p) * std::pow(mn, p) + std::pow(eta, -q) / q) / p;
}

EpisodeTrace run_episode(const BurkholderSpec& spec, double eta, LossKind loss_kind, Adversary& adversary,
                         std::size_t n, std::uint64_t seed, const EpisodeOptions& options) {
    if (adversary.dim() != spec.dim()) throw DimensionError("adversary and spec dimensions differ");
    Learner learner(spec, eta, Rng(seed).split(7));
    const auto grid = default_dloss_grid(options.grid_points);

    EpisodeTrace trace;
    trace.rows.reserve(n);
    trace.xs.reserve(n);
    trace.min_certificate_slack = std::numeric_limits<double>::infinity();
    const double rel0 = learner.relaxation_value();
    double payoff = 0.0, martingale = 0.0;

    for (std::size_t t = 0; t < n; ++t) {
        const Vec x = adversary.features(t);
        const double yhat = learner.predict(x);
        const double y = adversary.label(t, x, yhat);
        if (loss_kind != LossKind::Absolute && !(std::abs(y) <= 1.0))
            throw std::invalid_argument("adversary label outside [-1, 1]");
        const double lv = loss(loss_kind, yhat, y);
        const double dl = dloss(loss_kind, yhat, y);

        if (options.certify) {
            const auto cert = learner.admissibility_certificate(x, grid, options.certificate_tol, yhat);
            trace.min_certificate_slack = std::min(trace.min_certificate_slack, cert.worst_slack);
            if (!cert.passed) ++trace.certificate_failures;
        }
        const double expected_rel = learner.expected_next_relaxation(x, dl);
        const int eps = learner.update(x, dl);
        const double rel = learner.relaxation_value();
        martingale += rel - expected_rel;
        payoff += yhat * dl;

        trace.cum_loss += lv;
        trace.rows.push_back({t + 1, yhat, y, lv, dl, eps, rel, trace.cum_loss});
        trace.xs.push_back(x);
    }
    if (!options.certify) trace.min_certificate_slack = std::numeric_limits<double>::quiet_NaN();

    trace.s = learner.state().s;
    trace.m = learner.state().m;
    trace.linearized_regret = payoff + norm(trace.s, spec.space_norm());
    trace.residual = trace.linearized_regret - regret_bound(spec, eta, trace.m);
    trace.telescoping_excess = payoff + learner.relaxation_value() - rel0 - martingale;
    return trace;
}

}  // namespace zigzag
