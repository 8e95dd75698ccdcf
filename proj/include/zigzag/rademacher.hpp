#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zigzag/linalg.hpp"
#include "zigzag/rng.hpp"
#include "zigzag/stats.hpp"

namespace zigzag {

// Number of SE batches used for K Monte Carlo samples.
std::size_t batch_count(std::size_t samples);

// E_ε ‖Σ ε_t z_t‖ by Monte Carlo over K sign paths, batched SE.
Estimate rad_estimate(const std::vector<Vec>& zs, const Norm& tag, std::size_t samples, std::uint64_t seed);
// E_ε max_τ ‖Σ_{t≤τ} ε_t z_t‖ on the same sign paths as rad_estimate.
Estimate maximal_rad_estimate(const std::vector<Vec>& zs, const Norm& tag, std::size_t samples,
                              std::uint64_t seed);

// Per-path values of both functionals on shared sign paths.
struct RadSamples {
    std::vector<double> plain;
    std::vector<double> maximal;
};
RadSamples rad_samples(const std::vector<Vec>& zs, const Norm& tag, std::size_t samples, std::uint64_t seed);

// Exact values by enumerating all 2ⁿ sign patterns (n ≤ 24).
double rad_exact(const std::vector<Vec>& zs, const Norm& tag);
double maximal_rad_exact(const std::vector<Vec>& zs, const Norm& tag);

// A predictable process x_t(ε_{1:t−1}) stored densely by level. The node of
// level t (1-based) reached by ε_{1:t−1} has index Σ_s [ε_{s+1} = −1]·2^s.
class DyadicTree {
public:
    static constexpr std::size_t kMaxDepth = 14;

    DyadicTree(std::size_t depth, std::size_t dim);

    std::size_t depth() const { return depth_; }
    std::size_t dim() const { return dim_; }
    std::size_t level_size(std::size_t t) const { return std::size_t{1} << (t - 1); }

    std::span<double> node(std::size_t t, std::size_t index);
    std::span<const double> node(std::size_t t, std::size_t index) const;
    // Node of level t along the path encoded by `mask` (bit s ⇔ ε_{s+1} = −1).
    std::span<const double> along(std::size_t t, std::uint64_t mask) const {
        return node(t, mask & ((std::uint64_t{1} << (t - 1)) - 1));
    }

    bool all_zero() const;

private:
    std::size_t depth_;
    std::size_t dim_;
    std::vector<Vec> levels_;
};

DyadicTree gaussian_tree(std::size_t depth, std::size_t dim, Rng& rng);
// Each level is one vector, independent of the path.
DyadicTree constant_tree(const std::vector<Vec>& levels);
// Scalar x_t = sign(ε₁ + … + ε_{t−1}), with sign(0) = +1.
DyadicTree prefix_sign_tree(std::size_t depth);

inline int sign_of(std::uint64_t mask, std::size_t t) { return (mask >> (t - 1)) & 1 ? -1 : 1; }

// Reference UMD constant for the norm and its label.
struct UmdReference {
    double value = 1.0;
    std::string label;
};
UmdReference umd_reference(const Norm& tag, double p, std::size_t dim);

struct PatternResult {
    std::vector<int> pattern;
    Estimate lhs;  // E‖Σ θ_t d_t‖^p
    Estimate rhs;  // E‖Σ d_t‖^p
    double ratio = 0.0;  // (lhs/rhs)^{1/p}
};

struct UMDReport {
    double p = 2.0;
    bool exact = false;
    std::size_t samples = 0;
    std::vector<PatternResult> record;
    double max_ratio = 0.0;
    std::size_t argmax = 0;
    UmdReference reference;
};

// Compares E‖Σ θ_t ε_t x_t‖^p with E‖Σ ε_t x_t‖^p for the all-ones and
// alternating patterns plus `random_patterns` random θ. With `exact` both
// sides come from 2ⁿ enumeration instead of K samples.
UMDReport umd_check(const DyadicTree& tree, double p, const Norm& tag, std::size_t samples,
                    std::size_t random_patterns, std::uint64_t seed, bool exact = false);

// Exact E‖Σ θ_t ε_t x_t‖^p and E‖Σ ε_t x_t‖^p by enumeration.
std::pair<double, double> umd_pattern_exact(const DyadicTree& tree, double p, const Norm& tag,
                                            const std::vector<int>& pattern);

struct HitczenkoReport {
    double p = 1.0;
    Estimate lhs;  // E|Σ ε_t x_t(ε)|^p
    Estimate rhs;  // E|Σ ε′_t ε_t x_t(ε)|^p
    double empirical_k = 0.0;  // (lhs/rhs)^{1/p}
    bool within_bound = true;  // lhs ≤ 10^p·rhs
};

HitczenkoReport hitczenko_check(const DyadicTree& tree, double p, std::size_t samples, std::uint64_t seed);
// Exact sides: 2ⁿ patterns for the left, 4ⁿ (ε, ε′) pairs for the right (n ≤ 10).
std::pair<double, double> hitczenko_exact(const DyadicTree& tree, double p);

}  // namespace zigzag
