#pragma once

#include <cstddef>
#include <vector>

namespace biphoton {

// Uniform detuning grid, symmetric about zero, with trapezoid quadrature
// weights. Odd point count guarantees that 0 is a sample and that the
// Omega -> -Omega map is exact index reversal (no interpolation).
struct FrequencyGrid {
    double center_omega = 0.0;      // rad/s
    std::vector<double> detunings;  // rad/s, strictly increasing
    std::vector<double> weights;    // rad/s, all > 0

    static FrequencyGrid uniform(double center_omega, double half_span,
                                 std::size_t points);

    std::size_t size() const { return detunings.size(); }
    double omega(std::size_t i) const { return center_omega + detunings[i]; }
    std::size_t mirror_index(std::size_t i) const { return detunings.size() - 1 - i; }

    // Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;
};

}  // namespace biphoton
