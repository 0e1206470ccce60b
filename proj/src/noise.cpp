#include "biphoton/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace biphoton {

namespace {

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa in (0, 1); avoids implementation-defined distributions
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

// Knuth inversion, adequate below mean ~10.
long long poisson_small(std::mt19937_64& rng, double mean) {
    const double limit = std::exp(-mean);
    long long k = 0;
    double product = uniform01(rng);
    while (product > limit) {
        ++k;
        product *= uniform01(rng);
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler for mean >= 10.
long long poisson_ptrs(std::mt19937_64& rng, double mean) {
    const double slog = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = uniform01(rng) - 0.5;
        const double v = uniform01(rng);
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * slog - mean - std::lgamma(kf + 1.0))
            return static_cast<long long>(kf);
    }
}

}  // namespace

std::vector<long long> poisson_counts(const std::vector<double>& rates,
                                      double integration_time, double peak_rate,
                                      std::uint64_t seed) {
    if (!(integration_time > 0.0) || !(peak_rate > 0.0))
        throw std::invalid_argument("integration time and peak rate must be positive");

    std::mt19937_64 rng(seed);
    std::vector<long long> counts;
    counts.reserve(rates.size());
    for (double rate : rates) {
        if (rate < 0.0) throw std::invalid_argument("negative rate in poisson_counts");
        const double mean = rate * peak_rate * integration_time;
        if (mean == 0.0)
            counts.push_back(0);
        else
            counts.push_back(mean < 10.0 ? poisson_small(rng, mean) : poisson_ptrs(rng, mean));
    }
    return counts;
}

}  // namespace biphoton
