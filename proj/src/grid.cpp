#include "biphoton/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

FrequencyGrid FrequencyGrid::uniform(double center_omega, double half_span,
                                     std::size_t points) {
    if (points < 3 || points % 2 == 0)
        throw std::invalid_argument("grid points must be odd and >= 3");
    if (!(half_span > 0.0))
        throw std::invalid_argument("grid half span must be positive");

    FrequencyGrid grid;
    grid.center_omega = center_omega;
    grid.detunings.resize(points);
    grid.weights.resize(points);

    const std::ptrdiff_t mid = static_cast<std::ptrdiff_t>(points / 2);
    const double step = half_span / static_cast<double>(mid);
    for (std::size_t i = 0; i < points; ++i) {
        // (i - mid) * step negates exactly under index reversal
        grid.detunings[i] = static_cast<double>(static_cast<std::ptrdiff_t>(i) - mid) * step;
        grid.weights[i] = (i == 0 || i + 1 == points) ? 0.5 * step : step;
    }
    return grid;
}

void FrequencyGrid::validate() const {
    const std::size_t n = detunings.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("grid must have an odd point count >= 3");
    if (weights.size() != n)
        throw std::invalid_argument("grid weights size mismatch");
    if (detunings[n / 2] != 0.0)
        throw std::invalid_argument("grid midpoint must be exactly zero");
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(detunings[i] > detunings[i - 1]))
            throw std::invalid_argument("grid detunings must be strictly increasing");
        if (!(weights[i] > 0.0))
            throw std::invalid_argument("grid weights must be positive");
        if (detunings[i] != -detunings[n - 1 - i])
            throw std::invalid_argument("grid detunings must be symmetric about zero");
    }
}

}  // namespace biphoton
