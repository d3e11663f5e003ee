#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace pstchain {

// Pairwise summation with a fixed recursion tree. Used everywhere ensemble
// statistics are reduced, so aggregates are independent of worker count.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 16) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct MeanStdError {
    double mean = 0.0;
    double std_error = 0.0; // standard error of the mean; 0 for a single sample
};

inline MeanStdError mean_and_std_error(std::span<const double> x) {
    MeanStdError r;
    const std::size_t n = x.size();
    if (n == 0) return r;
    r.mean = pairwise_sum(x) / static_cast<double>(n);
    if (n < 2) return r;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - r.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    r.std_error = std::sqrt(var / static_cast<double>(n));
    return r;
}

} // namespace pstchain
