#include "zigzag/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zigzag/parallel.hpp"

namespace zigzag {

namespace {

int path_sign(const Rng& path, std::size_t t) { return (path.at(t >> 6) >> (t & 63)) & 1 ? -1 : 1; }

void require_enumerable(std::size_t n, std::size_t limit) {
    if (n > limit) throw std::invalid_argument("sequence too long to enumerate (n = " + std::to_string(n) + ")");
}

}  // namespace

std::size_t batch_count(std::size_t samples) { return std::clamp<std::size_t>(samples / 10, 2, 100); }

RadSamples rad_samples(const std::vector<Vec>& zs, const Norm& tag, std::size_t samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("Rademacher estimates need at least 100 samples");
    RadSamples out;
    out.plain.assign(samples, 0.0);
    out.maximal.assign(samples, 0.0);
    if (zs.empty()) return out;
    const std::size_t dim = zs.front().size();
    const Rng root(seed);
    parallel_for(samples, [&](std::size_t k) {
        const Rng path = root.split(k);
        Vec sum(dim, 0.0);
        double best = 0.0;
        for (std::size_t t = 0; t < zs.size(); ++t) {
            axpy(path_sign(path, t), zs[t], sum);
            best = std::max(best, norm(sum, tag));
        }
        out.plain[k] = norm(sum, tag);
        out.maximal[k] = best;
    });
    return out;
}

Estimate rad_estimate(const std::vector<Vec>& zs, const Norm& tag, std::size_t samples, std::uint64_t seed) {
    if (zs.empty()) return {};
    const auto s = rad_samples(zs, tag, samples, seed);
    return mean_se(s.plain, batch_count(samples));
}

Estimate maximal_rad_estimate(const std::vector<Vec>& zs, const Norm& tag, std::size_t samples,
                              std::uint64_t seed) {
    if (zs.empty()) return {};
    const auto s = rad_samples(zs, tag, samples, seed);
    return mean_se(s.maximal, batch_count(samples));
}

namespace {

template <class Visit>
void enumerate_sums(const std::vector<Vec>& zs, Visit&& visit) {
    const std::size_t n = zs.size();
    require_enumerable(n, 24);
    const std::size_t dim = n ? zs.front().size() : 0;
    Vec sum(dim);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::fill(sum.begin(), sum.end(), 0.0);
        visit(mask, sum);
    }
}

}  // namespace

double rad_exact(const std::vector<Vec>& zs, const Norm& tag) {
    if (zs.empty()) return 0.0;
    double total = 0.0;
    enumerate_sums(zs, [&](std::uint64_t mask, Vec& sum) {
        for (std::size_t t = 0; t < zs.size(); ++t) axpy(sign_of(mask, t + 1), zs[t], sum);
        total += norm(sum, tag);
    });
    return total / std::ldexp(1.0, static_cast<int>(zs.size()));
}

double maximal_rad_exact(const std::vector<Vec>& zs, const Norm& tag) {
    if (zs.empty()) return 0.0;
    double total = 0.0;
    enumerate_sums(zs, [&](std::uint64_t mask, Vec& sum) {
        double best = 0.0;
        for (std::size_t t = 0; t < zs.size(); ++t) {
            axpy(sign_of(mask, t + 1), zs[t], sum);
            best = std::max(best, norm(sum, tag));
        }
        total += best;
    });
    return total / std::ldexp(1.0, static_cast<int>(zs.size()));
}

// ---------------------------------------------------------------------------

DyadicTree::DyadicTree(std::size_t depth, std::size_t dim) : depth_(depth), dim_(dim) {
    if (depth == 0 || depth > kMaxDepth) throw std::invalid_argument("tree depth must be in [1, 14]");
    if (dim == 0) throw DimensionError("tree dimension must be positive");
    levels_.resize(depth);
    for (std::size_t t = 1; t <= depth; ++t) levels_[t - 1].assign(level_size(t) * dim, 0.0);
}

std::span<double> DyadicTree::node(std::size_t t, std::size_t index) {
    return {levels_.at(t - 1).data() + index * dim_, dim_};
}

std::span<const double> DyadicTree::node(std::size_t t, std::size_t index) const {
    return {levels_.at(t - 1).data() + index * dim_, dim_};
}

bool DyadicTree::all_zero() const {
    for (const auto& level : levels_)
        for (double v : level)
            if (v != 0.0) return false;
    return true;
}

DyadicTree gaussian_tree(std::size_t depth, std::size_t dim, Rng& rng) {
    DyadicTree tree(depth, dim);
    for (std::size_t t = 1; t <= depth; ++t)
        for (std::size_t i = 0; i < tree.level_size(t); ++i)
            for (double& v : tree.node(t, i)) v = rng.normal();
    return tree;
}

DyadicTree constant_tree(const std::vector<Vec>& levels) {
    if (levels.empty()) throw std::invalid_argument("constant_tree needs at least one level");
    DyadicTree tree(levels.size(), levels.front().size());
    for (std::size_t t = 1; t <= levels.size(); ++t) {
        if (levels[t - 1].size() != tree.dim()) throw DimensionError("constant_tree: ragged levels");
        for (std::size_t i = 0; i < tree.level_size(t); ++i) std::ranges::copy(levels[t - 1], tree.node(t, i).begin());
    }
    return tree;
}

DyadicTree prefix_sign_tree(std::size_t depth) {
    DyadicTree tree(depth, 1);
    for (std::size_t t = 1; t <= depth; ++t) {
        for (std::size_t i = 0; i < tree.level_size(t); ++i) {
            int sum = 0;
            for (std::size_t s = 1; s < t; ++s) sum += sign_of(i, s);
            tree.node(t, i)[0] = sum < 0 ? -1.0 : 1.0;
        }
    }
    return tree;
}

UmdReference umd_reference(const Norm& tag, double p, std::size_t dim) {
    const double pstar = conjugate(p).p_star;
    const double logd = std::log(std::max<std::size_t>(dim, 2));
    switch (tag.kind) {
        case NormKind::Lp: return {pstar - 1.0, "p*-1"};
        case NormKind::WeightedL2:
        case NormKind::Gram: return {p == 2.0 ? 1.0 : pstar - 1.0, "Hilbert"};
        case NormKind::Sup:
        case NormKind::One: return {logd, "O(log d)"};
        case NormKind::Spectral:
        case NormKind::Trace: {
            const double ld = std::log(std::max<std::size_t>(tag.rows, 2));
            return {ld * ld, "O(log^2 d)"};
        }
        case NormKind::GroupP2: return {pstar * 2.0, "O(p* q*)"};
    }
    return {1.0, ""};
}

namespace {

// Σ θ_t ε_t x_t(ε) and Σ ε_t x_t(ε) along one sign path.
void path_sums(const DyadicTree& tree, std::uint64_t mask, const std::vector<int>& pattern, Vec& signed_sum,
               Vec& plain_sum) {
    std::fill(signed_sum.begin(), signed_sum.end(), 0.0);
    std::fill(plain_sum.begin(), plain_sum.end(), 0.0);
    for (std::size_t t = 1; t <= tree.depth(); ++t) {
        const auto x = tree.along(t, mask);
        const int e = sign_of(mask, t);
        axpy(e, x, plain_sum);
        axpy(pattern[t - 1] * e, x, signed_sum);
    }
}

}  // namespace

std::pair<double, double> umd_pattern_exact(const DyadicTree& tree, double p, const Norm& tag,
                                            const std::vector<int>& pattern) {
    if (pattern.size() != tree.depth()) throw DimensionError("sign pattern length must equal tree depth");
    Vec a(tree.dim()), b(tree.dim());
    double lhs = 0.0, rhs = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << tree.depth();
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        path_sums(tree, mask, pattern, a, b);
        lhs += std::pow(norm(a, tag), p);
        rhs += std::pow(norm(b, tag), p);
    }
    return {lhs / patterns, rhs / patterns};
}

UMDReport umd_check(const DyadicTree& tree, double p, const Norm& tag, std::size_t samples,
                    std::size_t random_patterns, std::uint64_t seed, bool exact) {
    if (tree.all_zero()) throw std::invalid_argument("umd_check: degenerate all-zero tree");
    if (!exact && samples < 1000) throw std::invalid_argument("umd_check needs at least 1000 samples");
    const std::size_t n = tree.depth();
    std::vector<std::vector<int>> patterns;
    patterns.emplace_back(n, 1);
    std::vector<int> alt(n);
    for (std::size_t t = 0; t < n; ++t) alt[t] = t % 2 == 0 ? 1 : -1;
    patterns.push_back(alt);
    Rng pattern_rng = Rng(seed).split(1);
    for (std::size_t k = 0; k < random_patterns; ++k) {
        std::vector<int> th(n);
        for (int& s : th) s = pattern_rng.rademacher();
        patterns.push_back(th);
    }

    UMDReport rep;
    rep.p = p;
    rep.exact = exact;
    rep.samples = exact ? (std::size_t{1} << n) : samples;
    rep.reference = umd_reference(tag, p, tree.dim());
    const Rng paths = Rng(seed).split(2);
    std::vector<PatternResult> results(patterns.size());
    parallel_for(patterns.size(), [&](std::size_t j) {
        PatternResult& res = results[j];
        res.pattern = patterns[j];
        if (exact) {
            const auto [l, r] = umd_pattern_exact(tree, p, tag, patterns[j]);
            res.lhs = {l, 0.0};
            res.rhs = {r, 0.0};
        } else {
            std::vector<double> lv(samples), rv(samples);
            Vec a(tree.dim()), b(tree.dim());
            for (std::size_t k = 0; k < samples; ++k) {
                path_sums(tree, paths.at(k), patterns[j], a, b);
                lv[k] = std::pow(norm(a, tag), p);
                rv[k] = std::pow(norm(b, tag), p);
            }
            res.lhs = mean_se(lv, batch_count(samples));
            res.rhs = mean_se(rv, batch_count(samples));
        }
        res.ratio = res.rhs.mean > 0.0 ? std::pow(res.lhs.mean / res.rhs.mean, 1.0 / p) : 0.0;
    });
    rep.record = std::move(results);
    for (std::size_t j = 0; j < rep.record.size(); ++j) {
        if (rep.record[j].ratio > rep.max_ratio) {
            rep.max_ratio = rep.record[j].ratio;
            rep.argmax = j;
        }
    }
    return rep;
}

HitczenkoReport hitczenko_check(const DyadicTree& tree, double p, std::size_t samples, std::uint64_t seed) {
    if (tree.dim() != 1) throw DimensionError("hitczenko_check works on scalar trees");
    if (tree.depth() > 12) throw std::invalid_argument("hitczenko_check: depth must be at most 12");
    if (samples < 100) throw std::invalid_argument("hitczenko_check needs at least 100 samples");
    const Rng eps_paths = Rng(seed).split(1), dec_paths = Rng(seed).split(2);
    std::vector<double> lv(samples), rv(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const std::uint64_t e = eps_paths.at(k), e2 = dec_paths.at(k);
        double a = 0.0, b = 0.0;
        for (std::size_t t = 1; t <= tree.depth(); ++t) {
            const double x = tree.along(t, e)[0];
            a += sign_of(e, t) * x;
            b += sign_of(e2, t) * sign_of(e, t) * x;
        }
        lv[k] = std::pow(std::abs(a), p);
        rv[k] = std::pow(std::abs(b), p);
    }
    HitczenkoReport rep;
    rep.p = p;
    rep.lhs = mean_se(lv, batch_count(samples));
    rep.rhs = mean_se(rv, batch_count(samples));
    rep.empirical_k = rep.rhs.mean > 0.0 ? std::pow(rep.lhs.mean / rep.rhs.mean, 1.0 / p) : 0.0;
    rep.within_bound = rep.lhs.mean <= std::pow(10.0, p) * rep.rhs.mean;
    return rep;
}

std::pair<double, double> hitczenko_exact(const DyadicTree& tree, double p) {
    if (tree.dim() != 1) throw DimensionError("hitczenko_exact works on scalar trees");
    require_enumerable(tree.depth(), 10);
    const std::size_t n = tree.depth();
    const std::uint64_t count = std::uint64_t{1} << n;
    double lhs = 0.0, rhs = 0.0;
    for (std::uint64_t e = 0; e < count; ++e) {
        double a = 0.0;
        for (std::size_t t = 1; t <= n; ++t) a += sign_of(e, t) * tree.along(t, e)[0];
        lhs += std::pow(std::abs(a), p);
        for (std::uint64_t e2 = 0; e2 < count; ++e2) {
            double b = 0.0;
            for (std::size_t t = 1; t <= n; ++t) b += sign_of(e2, t) * sign_of(e, t) * tree.along(t, e)[0];
            rhs += std::pow(std::abs(b), p);
        }
    }
    return {lhs / count, rhs / (static_cast<double>(count) * count)};
}

}  // namespace zigzag
