#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "zigzag/burkholder.hpp"
#include "zigzag/rng.hpp"

namespace zigzag {

using PointFunction = std::function<double(std::span<const double>, std::span<const double>)>;

// Probe points: componentwise uniform on [−R, R], R alternating between 1 and
// 5, with 10% of probes pushed onto kinks (zeroed coordinates, |x_i| = |y_i|,
// or norms within 1e−4 of the unit sphere). `max_norm` > 0 rescales points
// into that ℓ1 radius (used for U₁, whose bound only holds for ‖·‖ ≤ B).
struct ProbeSampler {
    std::size_t dim = 1;
    double max_norm = 0.0;

    void sample(Rng& rng, std::size_t index, Vec& x, Vec& y) const;
    Vec direction(Rng& rng, std::size_t index) const;
};

ProbeSampler default_sampler(const BurkholderSpec& spec);

struct MajorizationReport {
    std::size_t probes = 0;
    std::size_t violations = 0;
    double worst_slack = 0.0;  // min over probes of U − majorant
};

// Violation: U < majorant − tol·max(1, |majorant|). The scale keeps the
// criterion meaningful for constructions whose values reach 1e10 (k = 6).
MajorizationReport check_majorization(const PointFunction& u, const PointFunction& majorant,
                                      const ProbeSampler& sampler, std::size_t n_probes, std::uint64_t seed,
                                      double tol);
MajorizationReport check_majorization(const BurkholderSpec& spec, std::size_t n_probes, std::uint64_t seed,
                                      double tol);

struct ZigzagReport {
    std::size_t probes = 0;
    std::size_t midpoint_violations = 0;
    double worst_midpoint_slack = 0.0;   // min of U(mid) − avg(U(t1), U(t2))
    double worst_second_diff = 0.0;      // max central second difference, h = 1e−3
};

// Concavity of α ↦ f(x + αz, y + σαz) on random (x, y, z, σ, t1, t2).
ZigzagReport check_zigzag(const PointFunction& u, const ProbeSampler& sampler, std::size_t n_probes,
                          std::uint64_t seed, double tol);
ZigzagReport check_zigzag(const BurkholderSpec& spec, std::size_t n_probes, std::uint64_t seed, double tol);

struct DerivativeReport {
    std::size_t probes = 0;
    std::size_t skipped = 0;  // near a kink
    double max_abs_error = 0.0;
};

// Analytic zigzag_dirderiv vs central differences with step h, skipping
// probes where any active coordinate (or norm) is within `kink_margin` of 0.
DerivativeReport check_derivative(const BurkholderSpec& spec, std::size_t n_probes, std::uint64_t seed,
                                  double h = 1e-6, double kink_margin = 1e-3);

}  // namespace zigzag
