#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace zigzag {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: the i-th output is a pure function of (key, i).
// split() derives an independent stream keyed by a purpose/episode id, so
// parallel runs reproduce bit-for-bit regardless of scheduling.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : key_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return at(counter_++); }

    // Random access into the stream without advancing it.
    result_type at(std::uint64_t index) const {
        return mix64(key_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
    }

    Rng split(std::uint64_t stream) const {
        Rng child;
        child.key_ = mix64(key_ ^ mix64(stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
        return child;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // ε = sign of one uniform draw.
    int rademacher() { return uniform() < 0.5 ? -1 : 1; }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : (*this)() % n; }

    // Box-Muller; the spare value is discarded so each call uses two draws.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace zigzag
