#include "zigzag/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zigzag {

namespace {

int path_sign(const Rng& path, std::size_t t) { return (path.at(t) >> 63) ? -1 : 1; }

}  // namespace

double psi(double eta, double p, double x) {
    if (!(eta > 0.0)) throw std::invalid_argument("psi: eta must be positive");
    const double q = conjugate(p).p_prime - 1.0;
    return (eta * x + std::pow(eta, -q) / q) / p;
}

double psi_grid_min(double p, double x, std::size_t points, double lo, double hi) {
    double best = std::numeric_limits<double>::infinity();
    const double step = std::log(hi / lo) / (points - 1);
    for (std::size_t i = 0; i < points; ++i) best = std::min(best, psi(lo * std::exp(step * i), p, x));
    return best;
}

double phi_realized(const std::vector<Vec>& increments, const Norm& tag, double p, double beta) {
    IntervalSupTracker tracker(tag);
    for (const auto& z : increments) tracker.push(z);
    return std::pow(beta, p) * std::pow(tracker.value(), p);
}

Estimate phi_expected(const std::vector<Vec>& increments, const Norm& tag, double p, double beta,
                      std::size_t samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("phi_expected needs at least 100 samples");
    const Rng root(seed);
    std::vector<double> values(samples);
    Vec signed_z;
    for (std::size_t k = 0; k < samples; ++k) {
        const Rng path = root.split(k);
        IntervalSupTracker tracker(tag);
        for (std::size_t t = 0; t < increments.size(); ++t) {
            signed_z = scaled(increments[t], path_sign(path, t));
            tracker.push(signed_z);
        }
        values[k] = std::pow(beta, p) * std::pow(tracker.value(), p);
    }
    return mean_se(values);
}

double phi_expected_exact(const std::vector<Vec>& increments, const Norm& tag, double p, double beta) {
    const std::size_t n = increments.size();
    if (n > 20) throw std::invalid_argument("phi_expected_exact: n too large to enumerate");
    const std::uint64_t patterns = 1ULL << n;
    double total = 0.0;
    Vec signed_z;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        IntervalSupTracker tracker(tag);
        for (std::size_t t = 0; t < n; ++t) {
            signed_z = scaled(increments[t], (mask >> t) & 1 ? -1.0 : 1.0);
            tracker.push(signed_z);
        }
        total += std::pow(tracker.value(), p);
    }
    return std::pow(beta, p) * total / static_cast<double>(patterns);
}

std::string tuner_name(TunerMode mode) {
    return mode == TunerMode::Realized ? "doubling-realized" : "doubling-expected";
}

double default_eta0(const BurkholderSpec& spec, TunerMode mode) {
    const double p = spec.p();
    if (mode == TunerMode::Realized && p < 2.0) return 1.0;
    return std::pow(spec.beta() * p, -p);
}

double doubling_eta(double eta0, double p, std::size_t phase) {
    const double q = conjugate(p).p_prime - 1.0;
    return std::exp2(-static_cast<double>(phase) / q) * eta0;
}

DoublingTuner::DoublingTuner(BurkholderSpec spec, TunerMode mode, std::optional<double> eta0, Rng rng,
                             std::size_t samples)
    : spec_(spec),
      mode_(mode),
      eta0_(eta0 ? *eta0 : default_eta0(spec, mode)),
      p_(spec.p()),
      q_(conjugate(spec.p()).p_prime - 1.0),
      learner_(spec, 1.0, rng.split(1)),
      samples_(samples),
      sign_paths_(rng.split(2)),
      realized_(spec.space_norm()) {
    if (!(eta0_ > 0.0)) throw std::invalid_argument("eta0 must be positive");
    if (mode == TunerMode::Expected) {
        if (samples < 100) throw std::invalid_argument("expected-mode tuning needs at least 100 samples");
        expected_.assign(samples, IntervalSupTracker(spec.space_norm()));
    }
    start_phase(1);
}

double DoublingTuner::threshold() const { return std::pow(learner_.eta(), -q_); }

double DoublingTuner::relaxation_change() const {
    return closed_change_ + learner_.relaxation_value() - phase_start_rel_;
}

void DoublingTuner::start_phase(std::size_t index) {
    phase_ = index;
    learner_.set_eta(doubling_eta(eta0_, p_, index));
    learner_.reset();
    phase_start_rel_ = learner_.relaxation_value();
    realized_.reset();
    realized_prev_ = 0.0;
    for (auto& tr : expected_) tr.reset();
    expected_phi_ = 0.0;
    PhaseRecord rec;
    rec.index = index;
    rec.start = rec.end = round_;
    rec.eta = learner_.eta();
    rec.threshold = threshold();
    phases_.push_back(rec);
}

double DoublingTuner::phi_expected_now() const {
    double total = 0.0;
    for (const auto& tr : expected_) total += std::pow(tr.value(), p_);
    return std::pow(spec_.beta(), p_) * total / static_cast<double>(expected_.size());
}

void DoublingTuner::push_expected(std::span<const double> x) {
    Vec z;
    for (std::size_t k = 0; k < expected_.size(); ++k) {
        z = scaled(x, path_sign(sign_paths_.split(k), round_));
        expected_[k].push(z);
    }
    expected_phi_ = phi_expected_now();
}

double DoublingTuner::predict(std::span<const double> x) {
    if (mode_ == TunerMode::Expected && !pending_x_) {
        double before = expected_phi_;
        push_expected(x);
        for (int guard = 0; learner_.eta() * expected_phi_ > threshold(); ++guard) {
            if (guard > 1000) throw std::runtime_error("doubling tuner failed to find a phase boundary");
            PhaseRecord& rec = phases_.back();
            rec.phi_checked = rec.phi_full = before;
            rec.completed = true;
            closed_change_ += learner_.relaxation_value() - phase_start_rel_;
            start_phase(phase_ + 1);
            before = 0.0;
            push_expected(x);
        }
        pending_x_ = true;
    }
    return learner_.predict(x);
}

TunerStep DoublingTuner::update(std::span<const double> x, double dloss) {
    TunerStep step;
    step.eps = learner_.update(x, dloss);
    step.relaxation = learner_.relaxation_value();
    ++round_;
    phases_.back().end = round_;
    pending_x_ = false;
    if (mode_ == TunerMode::Expected) {
        phases_.back().phi_full = phases_.back().phi_checked = expected_phi_;
        return step;
    }
    const int eps = step.eps;
    realized_prev_ = realized_.value();
    realized_.push(scaled(x, eps * dloss));
    const double beta_p = std::pow(spec_.beta(), p_);
    const double phi = beta_p * std::pow(realized_.value(), p_);
    PhaseRecord& rec = phases_.back();
    rec.phi_full = phi;
    rec.phi_checked = beta_p * std::pow(realized_prev_, p_);
    if (learner_.eta() * phi > threshold()) {
        rec.completed = true;
        closed_change_ += learner_.relaxation_value() - phase_start_rel_;
        start_phase(phase_ + 1);
        step.restarted = true;
    }
    return step;
}

void DoublingTuner::finish() {
    // A boundary on the final round opens a phase that never plays.
    if (phases_.size() > 1 && phases_.back().start == phases_.back().end) phases_.pop_back();
}

TunedTrace run_tuned_episode(const BurkholderSpec& spec, TunerMode mode, std::optional<double> eta0,
                             LossKind loss_kind, Adversary& adversary, std::size_t n, std::uint64_t seed,
                             const EpisodeOptions& options, std::size_t samples) {
    if (adversary.dim() != spec.dim()) throw DimensionError("adversary and spec dimensions differ");
    DoublingTuner tuner(spec, mode, eta0, Rng(seed).split(7), samples);
    const auto grid = default_dloss_grid(options.grid_points);

    TunedTrace out;
    EpisodeTrace& trace = out.trace;
    trace.rows.reserve(n);
    trace.min_certificate_slack = std::numeric_limits<double>::infinity();
    double payoff = 0.0, martingale = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const Vec x = adversary.features(t);
        const double yhat = tuner.predict(x);
        const double y = adversary.label(t, x, yhat);
        if (loss_kind != LossKind::Absolute && !(std::abs(y) <= 1.0))
            throw std::invalid_argument("adversary label outside [-1, 1]");
        const double lv = loss(loss_kind, yhat, y);
        const double dl = dloss(loss_kind, yhat, y);
        const Learner& inner = tuner.learner();
        if (options.certify) {
            const auto cert = inner.admissibility_certificate(x, grid, options.certificate_tol, yhat);
            trace.min_certificate_slack = std::min(trace.min_certificate_slack, cert.worst_slack);
            if (!cert.passed) ++trace.certificate_failures;
        }
        const double expected_rel = inner.expected_next_relaxation(x, dl);
        const TunerStep step = tuner.update(x, dl);
        martingale += step.relaxation - expected_rel;
        payoff += yhat * dl;
        trace.cum_loss += lv;
        trace.rows.push_back({t + 1, yhat, y, lv, dl, step.eps, step.relaxation, trace.cum_loss});
        trace.xs.push_back(x);
    }
    tuner.finish();
    if (!options.certify) trace.min_certificate_slack = std::numeric_limits<double>::quiet_NaN();
    trace.s.assign(spec.dim(), 0.0);
    for (std::size_t t = 0; t < n; ++t) axpy(trace.rows[t].dloss, trace.xs[t], trace.s);
    trace.m = tuner.learner().state().m;
    trace.linearized_regret = payoff + norm(trace.s, spec.space_norm());
    trace.residual = std::numeric_limits<double>::quiet_NaN();
    trace.telescoping_excess = payoff + tuner.relaxation_change() - martingale;
    out.phases = tuner.phases();
    out.eta0 = tuner.eta0();
    return out;
}

}  // namespace zigzag
