#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace zigzag {

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

// Mean with standard error. With batches > 1 the samples are split into that
// many contiguous batches and the SE comes from the spread of batch means.
inline Estimate mean_se(std::span<const double> values, std::size_t batches = 0) {
    Estimate e;
    const std::size_t n = values.size();
    if (n == 0) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / n;
    if (batches > 1 && n >= batches) {
        double ss = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t lo = b * n / batches, hi = (b + 1) * n / batches;
            double bs = 0.0;
            for (std::size_t i = lo; i < hi; ++i) bs += values[i];
            const double bm = bs / (hi - lo);
            ss += (bm - e.mean) * (bm - e.mean);
        }
        e.se = std::sqrt(ss / (batches - 1) / batches);
        return e;
    }
    if (n < 2) return e;
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.se = std::sqrt(ss / (n - 1) / n);
    return e;
}

}  // namespace zigzag
