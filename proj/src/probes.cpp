#include "zigzag/probes.hpp"

#include <algorithm>
#include <cmath>

namespace zigzag {

namespace {

double l1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

void clamp_norm(Vec& v, double max_norm) {
    if (max_norm <= 0.0) return;
    const double n = l1(v);
    if (n > max_norm) {
        for (double& x : v) x *= max_norm / n;
    }
}

double radius_for(std::size_t index) { return index % 2 == 0 ? 1.0 : 5.0; }

}  // namespace

void ProbeSampler::sample(Rng& rng, std::size_t index, Vec& x, Vec& y) const {
    const double r = radius_for(index);
    x.assign(dim, 0.0);
    y.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        x[i] = rng.uniform(-r, r);
        y[i] = rng.uniform(-r, r);
    }
    if (rng.uniform() < 0.1) {
        switch (rng.below(3)) {
            case 0:  // coordinates at zero
                for (std::size_t i = 0; i < dim; ++i) {
                    if (rng.uniform() < 0.5) x[i] = 1e-5 * rng.uniform(-1.0, 1.0);
                    if (rng.uniform() < 0.5) y[i] = 1e-5 * rng.uniform(-1.0, 1.0);
                }
                break;
            case 1:  // |x_i| = |y_i|
                for (std::size_t i = 0; i < dim; ++i)
                    y[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * x[i] * (1.0 + 1e-5 * rng.uniform(-1.0, 1.0));
                break;
            default: {  // unit-sphere boundary
                const double nx = l1(x), ny = l1(y);
                const double tx = 1.0 + 1e-4 * rng.uniform(-1.0, 1.0);
                const double ty = 1.0 + 1e-4 * rng.uniform(-1.0, 1.0);
                if (nx > 0) for (double& v : x) v *= tx / nx;
                if (ny > 0 && rng.uniform() < 0.5) for (double& v : y) v *= ty / ny;
                break;
            }
        }
    }
    clamp_norm(x, max_norm);
    clamp_norm(y, max_norm);
}

Vec ProbeSampler::direction(Rng& rng, std::size_t index) const {
    const double r = radius_for(index);
    Vec z(dim);
    for (double& v : z) v = rng.uniform(-r, r);
    clamp_norm(z, max_norm);
    return z;
}

ProbeSampler default_sampler(const BurkholderSpec& spec) {
    ProbeSampler s;
    s.dim = spec.dim();
    if (auto u = spec.u1()) s.max_norm = u->bound;
    return s;
}

MajorizationReport check_majorization(const PointFunction& u, const PointFunction& majorant,
                                      const ProbeSampler& sampler, std::size_t n_probes, std::uint64_t seed,
                                      double tol) {
    Rng rng(seed);
    MajorizationReport rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    Vec x, y;
    // The origin is always probed.
    const Vec zero(sampler.dim, 0.0);
    auto probe = [&](std::span<const double> px, std::span<const double> py) {
        const double uv = u(px, py), mv = majorant(px, py);
        const double slack = uv - mv;
        rep.worst_slack = std::min(rep.worst_slack, slack);
        if (slack < -tol * std::max(1.0, std::abs(mv))) ++rep.violations;
        ++rep.probes;
    };
    probe(zero, zero);
    for (std::size_t i = 1; i < n_probes; ++i) {
        sampler.sample(rng, i, x, y);
        probe(x, y);
    }
    return rep;
}

MajorizationReport check_majorization(const BurkholderSpec& spec, std::size_t n_probes, std::uint64_t seed,
                                      double tol) {
    return check_majorization([&](auto x, auto y) { return spec.evaluate(x, y); },
                              [&](auto x, auto y) { return spec.majorant(x, y); }, default_sampler(spec), n_probes,
                              seed, tol);
}

ZigzagReport check_zigzag(const PointFunction& u, const ProbeSampler& sampler, std::size_t n_probes,
                          std::uint64_t seed, double tol) {
    Rng rng(seed);
    ZigzagReport rep;
    rep.worst_midpoint_slack = std::numeric_limits<double>::infinity();
    rep.worst_second_diff = -std::numeric_limits<double>::infinity();
    Vec x, y;
    constexpr double h = 1e-3;
    for (std::size_t i = 0; i < n_probes; ++i) {
        sampler.sample(rng, i, x, y);
        const Vec z = sampler.direction(rng, i);
        const double sigma = rng.rademacher();
        const double t1 = rng.uniform(-1.0, 1.0), t2 = rng.uniform(-1.0, 1.0);
        auto f = [&](double a) { return u(added(x, z, a), added(y, z, sigma * a)); };
        const double mid = 0.5 * (t1 + t2);
        const double f1 = f(t1), f2 = f(t2), fm = f(mid);
        const double scale = std::max({1.0, std::abs(f1), std::abs(f2), std::abs(fm)});
        const double slack = fm - 0.5 * (f1 + f2);
        rep.worst_midpoint_slack = std::min(rep.worst_midpoint_slack, slack);
        if (slack < -tol * scale) ++rep.midpoint_violations;
        const double sd = f(mid + h) + f(mid - h) - 2.0 * fm;
        rep.worst_second_diff = std::max(rep.worst_second_diff, sd);
        ++rep.probes;
    }
    return rep;
}

ZigzagReport check_zigzag(const BurkholderSpec& spec, std::size_t n_probes, std::uint64_t seed, double tol) {
    return check_zigzag([&](auto x, auto y) { return spec.evaluate(x, y); }, default_sampler(spec), n_probes, seed,
                        tol);
}

namespace {

// True when (x, y) is within `margin` of a non-smooth point of the construction.
bool near_kink(const BurkholderSpec& spec, std::span<const double> x, std::span<const double> y, double margin) {
    switch (spec.construction()) {
        case Construction::ScalarP:
        case Construction::LpSum:
            for (std::size_t i = 0; i < x.size(); ++i)
                if (std::abs(x[i]) <= margin || std::abs(y[i]) <= margin) return true;
            return false;
        case Construction::HilbertP:
        case Construction::WeightedL2:
            return norm(x, spec.space_norm()) <= margin || norm(y, spec.space_norm()) <= margin;
        case Construction::GroupP2: {
            const Norm& n = spec.space_norm();
            for (std::size_t i = 0; i < n.rows; ++i) {
                auto xi = x.subspan(i * n.cols, n.cols), yi = y.subspan(i * n.cols, n.cols);
                if (std::sqrt(dot(xi, xi)) <= margin || std::sqrt(dot(yi, yi)) <= margin) return true;
            }
            return false;
        }
        case Construction::ElementaryScalarK:
            return false;
        case Construction::ZetaL1Weak:
        case Construction::U1Composed:
            return false;  // handled by the one-sided difference test
    }
    return false;
}

}  // namespace

DerivativeReport check_derivative(const BurkholderSpec& spec, std::size_t n_probes, std::uint64_t seed, double h,
                                  double kink_margin) {
    Rng rng(seed);
    const ProbeSampler sampler = default_sampler(spec);
    DerivativeReport rep;
    Vec x, y;
    const bool piecewise = spec.construction() == Construction::ZetaL1Weak ||
                           spec.construction() == Construction::U1Composed;
    for (std::size_t i = 0; i < n_probes; ++i) {
        sampler.sample(rng, i, x, y);
        const Vec z = sampler.direction(rng, i);
        const int sigma = rng.rademacher();
        ++rep.probes;
        if (near_kink(spec, x, y, kink_margin)) {
            ++rep.skipped;
            continue;
        }
        auto f = [&](double a) { return spec.evaluate(added(x, z, a), added(y, z, sigma * a)); };
        const double f0 = f(0.0), fp = f(h), fm = f(-h);
        if (piecewise) {
            // A kink inside [−h, h] shows up as disagreeing one-sided slopes.
            const double fwd = (fp - f0) / h, bwd = (f0 - fm) / h;
            if (std::abs(fwd - bwd) > 1e-4 * std::max(1.0, std::abs(fwd))) {
                ++rep.skipped;
                continue;
            }
        }
        const double fd = (fp - fm) / (2.0 * h);
        const double an = spec.zigzag_dirderiv(x, y, z, sigma);
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(fd - an));
    }
    return rep;
}

}  // namespace zigzag
