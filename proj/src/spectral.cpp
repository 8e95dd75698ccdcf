#include "zigzag/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "zigzag/parallel.hpp"

namespace zigzag {

EntryDistribution parse_entry_distribution(std::string_view name) {
    if (name == "uniform") return EntryDistribution::Uniform;
    if (name == "row-spiky") return EntryDistribution::RowSpiky;
    if (name == "adversarial-file") return EntryDistribution::AdversarialFile;
    throw std::invalid_argument("unknown entry distribution: " + std::string(name));
}

std::string entry_distribution_name(EntryDistribution dist) {
    switch (dist) {
        case EntryDistribution::Uniform: return "uniform";
        case EntryDistribution::RowSpiky: return "row-spiky";
        case EntryDistribution::AdversarialFile: return "adversarial-file";
    }
    return "?";
}

EntryStream make_entry_stream(std::size_t d, std::size_t r, std::size_t n, EntryDistribution dist,
                              std::uint64_t seed, const std::string& file) {
    EntryStream s;
    if (dist == EntryDistribution::AdversarialFile) {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open entry file: " + file);
        const auto doc = nlohmann::json::parse(in);
        s.d = doc.at("d").get<std::size_t>();
        for (const auto& e : doc.at("entries")) s.entries.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        s.labels = doc.at("labels").get<std::vector<double>>();
        if (s.labels.size() != s.entries.size()) throw std::invalid_argument("entry file: entries and labels differ in length");
        for (const auto& [i, j] : s.entries)
            if (i >= s.d || j >= s.d) throw std::out_of_range("entry file: index out of range");
        if (n < s.size()) {
            s.entries.resize(n);
            s.labels.resize(n);
        }
        return s;
    }
    if (d == 0 || r == 0) throw std::invalid_argument("entry stream needs d, r >= 1");
    s.d = d;
    Rng teacher = Rng(seed).split(0), draws = Rng(seed).split(1);
    Matrix a(d, r), b(d, r);
    for (double& v : a.data) v = teacher.normal();
    for (double& v : b.data) v = teacher.normal();
    const Matrix target = a * b.transpose();
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t i = draws.below(d);
        if (dist == EntryDistribution::RowSpiky && draws.uniform() < 0.5) i = 0;
        const std::size_t j = draws.below(d);
        s.entries.emplace_back(i, j);
        s.labels.push_back(target(i, j) < 0.0 ? -1.0 : 1.0);
    }
    return s;
}

EntryStats entry_stats(const EntryStream& stream) {
    std::vector<std::size_t> rows(stream.d, 0), cols(stream.d, 0);
    for (const auto& [i, j] : stream.entries) {
        ++rows.at(i);
        ++cols.at(j);
    }
    EntryStats st;
    if (stream.d > 0) {
        st.n_row = *std::ranges::max_element(rows);
        st.n_col = *std::ranges::max_element(cols);
    }
    return st;
}

namespace {

Matrix random_sphere_point(std::size_t d, std::size_t r, double tau, Rng& rng) {
    Matrix v(d, r);
    for (double& x : v.data) x = rng.normal();
    double nrm = std::sqrt(dot(v.data, v.data));
    while (nrm == 0.0) {
        for (double& x : v.data) x = rng.normal();
        nrm = std::sqrt(dot(v.data, v.data));
    }
    for (double& x : v.data) x *= std::sqrt(tau) / nrm;
    return v;
}

double distance(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) s += (a.data[k] - b.data[k]) * (a.data[k] - b.data[k]);
    return std::sqrt(s);
}

}  // namespace

Net build_net(std::size_t d, std::size_t r, double tau, double net_alpha, std::uint64_t seed, std::size_t max_size,
              std::size_t probes) {
    if (!(tau > 0.0)) throw std::invalid_argument("build_net: tau must be positive");
    if (max_size == 0) throw std::invalid_argument("build_net: max_size must be positive");
    Rng rng(seed);
    const std::size_t n_candidates = std::max<std::size_t>(20 * max_size, 2000);
    std::vector<Matrix> candidates;
    candidates.reserve(n_candidates);
    for (std::size_t k = 0; k < n_candidates; ++k) candidates.push_back(random_sphere_point(d, r, tau, rng));

    Net net;
    net.net_alpha = net_alpha;
    std::vector<double> gap(n_candidates, std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (net.points.size() < max_size) {
        net.points.push_back(candidates[next]);
        double far = 0.0;
        for (std::size_t k = 0; k < n_candidates; ++k) {
            gap[k] = std::min(gap[k], distance(candidates[k], net.points.back()));
            if (gap[k] > far) {
                far = gap[k];
                next = k;
            }
        }
        if (far <= net_alpha) break;
    }

    Rng probe_rng = Rng(seed).split(1);
    double radius = 0.0;
    for (std::size_t k = 0; k < probes; ++k) {
        const Matrix q = random_sphere_point(d, r, tau, probe_rng);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : net.points) best = std::min(best, distance(q, p));
        radius = std::max(radius, best);
    }
    net.coverage_radius = radius;
    net.covered = radius <= net_alpha;
    return net;
}

NetExpert::NetExpert(Matrix v, double eta, double tau, double net_alpha)
    : v_(std::move(v)),
      learner_(BurkholderSpec::hilbert(2.0, v_.rows * v_.cols), eta * tau * tau / (1.0 - net_alpha), Rng(0)) {
    if (!(net_alpha < 1.0)) throw std::invalid_argument("net radius must be below 1");
}

Vec NetExpert::project(std::size_t i, std::size_t j) const {
    Vec z(v_.rows * v_.cols, 0.0);
    const auto row = v_.row(j);
    std::ranges::copy(row, z.begin() + static_cast<std::ptrdiff_t>(i * v_.cols));
    return z;
}

double NetExpert::predict(std::size_t i, std::size_t j) const { return learner_.predict(project(i, j)); }

void NetExpert::update(std::size_t i, std::size_t j, double dloss, int eps) {
    learner_.update_with_sign(project(i, j), dloss, eps);
}

CertificateReport NetExpert::certificate(std::size_t i, std::size_t j, std::span<const double> grid,
                                         double tol) const {
    return learner_.admissibility_certificate(project(i, j), grid, tol);
}

double sub_predict_closed_form(const NetExpert& expert, std::size_t i, std::size_t j, double eta, double tau,
                               double net_alpha) {
    return -eta * tau * tau / (1.0 - net_alpha) * dot(expert.learner().state().s, expert.project(i, j));
}

MWState MWState::uniform(std::size_t experts, double gamma) {
    MWState mw;
    mw.log_weights.assign(experts, 0.0);
    mw.gamma = gamma;
    return mw;
}

std::vector<double> MWState::probabilities() const {
    std::vector<double> q(log_weights.size());
    if (q.empty()) return q;
    const double top = *std::ranges::max_element(log_weights);
    double z = 0.0;
    for (std::size_t v = 0; v < q.size(); ++v) z += q[v] = std::exp(log_weights[v] - top);
    for (double& x : q) x /= z;
    return q;
}

void mw_step(MWState& mw, std::span<const double> losses) {
    if (losses.size() != mw.log_weights.size()) throw DimensionError("mw_step: loss vector has the wrong size");
    require_finite(losses, "mw_step losses");
    for (std::size_t v = 0; v < losses.size(); ++v) mw.log_weights[v] -= mw.gamma * losses[v];
    const double top = *std::ranges::max_element(mw.log_weights);
    for (double& w : mw.log_weights) w -= top;
}

double default_spectral_eta(const SpectralOptions& o) {
    return 1.0 / (o.tau * std::sqrt(std::max(1.0, static_cast<double>(o.n) / static_cast<double>(o.d))));
}

namespace {

double clip(double v) { return std::clamp(v, -1.0, 1.0); }

// Euclidean projection of nonnegative s onto {Σ s ≤ radius}.
void project_l1_ball(Vec& s, double radius) {
    double total = 0.0;
    for (double v : s) total += v;
    if (total <= radius) return;
    Vec sorted = s;
    std::ranges::sort(sorted, std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cum += sorted[k];
        const double t = (cum - radius) / static_cast<double>(k + 1);
        if (sorted[k] - t > 0.0) theta = t;
    }
    for (double& v : s) v = std::max(0.0, v - theta);
}

double stream_loss(const EntryStream& s, std::size_t upto, LossKind loss_kind, const Matrix& f) {
    double total = 0.0;
    for (std::size_t t = 0; t < upto; ++t) total += loss(loss_kind, f(s.entries[t].first, s.entries[t].second), s.labels[t]);
    return total;
}

double trace_ball_prefix(const EntryStream& s, std::size_t upto, LossKind loss_kind, std::size_t r, double tau,
                         std::size_t iters) {
    const std::size_t d = s.d;
    Matrix f(d, d, 0.0);
    double best = stream_loss(s, upto, loss_kind, f);
    for (std::size_t k = 0; k < iters; ++k) {
        Matrix g(d, d, 0.0);
        for (std::size_t t = 0; t < upto; ++t) {
            const auto [i, j] = s.entries[t];
            g(i, j) += dloss(loss_kind, f(i, j), s.labels[t]);
        }
        const double gn = std::sqrt(dot(g.data, g.data));
        if (gn == 0.0) break;
        const double step = tau / (gn * std::sqrt(static_cast<double>(k + 1)));
        for (std::size_t q = 0; q < f.data.size(); ++q) f.data[q] -= step * g.data[q];
        Svd dec = svd(f);
        Vec sv = dec.s;
        for (std::size_t q = r; q < sv.size(); ++q) sv[q] = 0.0;
        project_l1_ball(sv, tau);
        Matrix rebuilt(d, d, 0.0);
        for (std::size_t q = 0; q < sv.size(); ++q) {
            if (sv[q] == 0.0) continue;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) rebuilt(a, b) += sv[q] * dec.u(a, q) * dec.v(b, q);
        }
        f = std::move(rebuilt);
        best = std::min(best, stream_loss(s, upto, loss_kind, f));
    }
    return best;
}

}  // namespace

double trace_ball_comparator(const EntryStream& stream, LossKind loss_kind, std::size_t r, double tau,
                             std::size_t iters) {
    return trace_ball_prefix(stream, stream.size(), loss_kind, r, tau, iters);
}

double net_comparator(const EntryStream& s, LossKind loss_kind, const Net& net, double tau, std::size_t iters) {
    std::vector<double> per_point(net.points.size(), std::numeric_limits<double>::infinity());
    parallel_for(net.points.size(), [&](std::size_t k) {
        const Matrix& v = net.points[k];
        Matrix u(v.rows, v.cols, 0.0);
        auto evaluate = [&] {
            double total = 0.0;
            for (std::size_t t = 0; t < s.size(); ++t)
                total += loss(loss_kind, dot(u.row(s.entries[t].first), v.row(s.entries[t].second)), s.labels[t]);
            return total;
        };
        double best = evaluate();
        for (std::size_t it = 0; it < iters; ++it) {
            Matrix g(u.rows, u.cols, 0.0);
            for (std::size_t t = 0; t < s.size(); ++t) {
                const auto [i, j] = s.entries[t];
                const double dl = dloss(loss_kind, dot(u.row(i), v.row(j)), s.labels[t]);
                if (dl != 0.0) axpy(dl, v.row(j), g.row(i));
            }
            const double gn = std::sqrt(dot(g.data, g.data));
            if (gn == 0.0) break;
            axpy(-std::sqrt(tau) / (gn * std::sqrt(static_cast<double>(it + 1))), g.data, u.data);
            const double un = std::sqrt(dot(u.data, u.data));
            if (un > std::sqrt(tau))
                for (double& x : u.data) x *= std::sqrt(tau) / un;
            best = std::min(best, evaluate());
        }
        per_point[k] = best;
    });
    return per_point.empty() ? 0.0 : *std::ranges::min_element(per_point);
}

SpectralResult run_spectral(const SpectralOptions& o) {
    SpectralResult res;
    const Rng root(o.seed);
    res.stream = make_entry_stream(o.d, o.r, o.n, o.distribution, root.split(1)(), o.file);
    const std::size_t d = res.stream.d;
    const std::size_t n = res.stream.size();
    res.stats = entry_stats(res.stream);
    res.eta = o.eta ? *o.eta : default_spectral_eta(o);
    res.net_alpha = o.net_alpha ? *o.net_alpha : default_net_alpha(std::max<std::size_t>(n, 1), o.tau);

    const Net net = build_net(d, o.r, o.tau, res.net_alpha, root.split(2)(), o.net_size);
    res.net_size = net.points.size();
    res.coverage_radius = net.coverage_radius;
    std::vector<NetExpert> experts;
    experts.reserve(net.points.size());
    for (const auto& v : net.points) experts.emplace_back(v, res.eta, o.tau, res.net_alpha);

    res.gamma = std::sqrt(std::log(static_cast<double>(experts.size())) / std::max<std::size_t>(n, 1));
    MWState mw = MWState::uniform(experts.size(), res.gamma);
    Rng sampler = root.split(3), signs = root.split(4);
    const auto grid = default_dloss_grid();

    EpisodeTrace& trace = res.trace;
    trace.min_certificate_slack = std::numeric_limits<double>::infinity();
    std::vector<double> f(experts.size()), losses(experts.size());
    std::vector<double> cum_losses;
    cum_losses.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto [i, j] = res.stream.entries[t];
        const double y = res.stream.labels[t];
        for (std::size_t v = 0; v < experts.size(); ++v) f[v] = experts[v].predict(i, j);

        const auto q = mw.probabilities();
        const double mass = std::accumulate(q.begin(), q.end(), 0.0);
        res.max_weight_error = std::max(res.max_weight_error, std::abs(mass - 1.0));
        const double u = sampler.uniform();
        std::size_t chosen = q.size() - 1;
        double acc = 0.0;
        for (std::size_t v = 0; v < q.size(); ++v) {
            acc += q[v];
            if (u < acc) {
                chosen = v;
                break;
            }
        }
        const double yhat = clip(f[chosen]);
        const double lv = loss(o.loss, yhat, y);
        for (std::size_t v = 0; v < experts.size(); ++v) {
            losses[v] = loss(o.loss, clip(f[v]), y);
            res.expected_loss += q[v] * losses[v];
        }
        if (o.certify) {
            for (const auto& ex : experts) {
                const auto cert = ex.certificate(i, j, grid, o.certificate_tol);
                trace.min_certificate_slack = std::min(trace.min_certificate_slack, cert.worst_slack);
                if (!cert.passed) ++trace.certificate_failures;
            }
        }
        mw_step(mw, losses);
        const int eps = signs.rademacher();
        for (std::size_t v = 0; v < experts.size(); ++v) experts[v].update(i, j, dloss(o.loss, f[v], y), eps);

        trace.cum_loss += lv;
        cum_losses.push_back(trace.cum_loss);
        trace.rows.push_back({t + 1, yhat, y, lv, dloss(o.loss, f[chosen], y), eps,
                              experts[chosen].learner().relaxation_value(), trace.cum_loss});
    }
    if (!o.certify) trace.min_certificate_slack = std::numeric_limits<double>::quiet_NaN();
    res.min_certificate_slack = trace.min_certificate_slack;
    res.certificate_failures = trace.certificate_failures;

    res.comparator_trace = trace_ball_comparator(res.stream, o.loss, o.r, o.tau);
    res.comparator_net = net_comparator(res.stream, o.loss, net, o.tau);
    res.comparator_loss = std::min(res.comparator_trace, res.comparator_net);
    res.regret = trace.cum_loss - res.comparator_loss;
    res.expected_regret = res.expected_loss - res.comparator_loss;
    res.rate = std::sqrt(static_cast<double>(o.r)) * static_cast<double>(d) *
               std::sqrt(static_cast<double>(std::max(res.stats.n_row, res.stats.n_col)));
    res.ratio = res.rate > 0.0 ? res.regret / res.rate : 0.0;

    for (std::size_t k = 5; k <= 10 && n >= 10; ++k) {
        const std::size_t upto = n * k / 10;
        const double comp = trace_ball_prefix(res.stream, upto, o.loss, o.r, o.tau, 300);
        res.regret_curve.emplace_back(upto, cum_losses[upto - 1] - comp);
    }
    return res;
}

}  // namespace zigzag
