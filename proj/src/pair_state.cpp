#include "biphoton/pair_state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "biphoton/constants.hpp"

namespace biphoton {

namespace {

// Second moment of a density on the grid, about its mean.
double rms_of_density(const FrequencyGrid& grid, const std::vector<double>& density) {
    double norm = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        norm += density[i] * grid.weights[i];
        mean += grid.detunings[i] * density[i] * grid.weights[i];
    }
    mean /= norm;
    double var = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.detunings[i] - mean;
        var += d * d * density[i] * grid.weights[i];
    }
    return std::sqrt(var / norm);
}

}  // namespace

double PhotonPairState::norm() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        sum += std::norm(amplitude[i]) * grid.weights[i];
    return sum;
}

double PhotonPairState::rms_detuning() const {
    std::vector<double> density(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) density[i] = std::norm(amplitude[i]);
    return rms_of_density(grid, density);
}

double Spectrum::rms_detuning() const { return rms_of_density(grid, density); }

PhotonPairState make_pair_state(double pump_wavelength, double center_wavelength,
                                double bandwidth_rms, std::size_t grid_points,
                                double span_factor, bool entangled) {
    if (!(bandwidth_rms > 0.0))
        throw std::invalid_argument("source bandwidth must be positive");
    if (grid_points < 64 || grid_points % 2 == 0)
        throw std::invalid_argument("grid_points must be odd and >= 64");
    if (!(span_factor >= 3.0))
        throw std::invalid_argument("span_factor must be >= 3 to cover the spectrum");
    const double expected_pump = 0.5 * center_wavelength;
    if (std::abs(pump_wavelength - expected_pump) > 0.01 * expected_pump)
        throw std::invalid_argument(
            "pump wavelength must match half the daughter center wavelength within 1%");

    const double omega0 = omega_from_wavelength(center_wavelength);
    // rms width of the marginal intensity spectrum, wavelength -> angular frequency
    const double sigma =
        2.0 * pi * speed_of_light * bandwidth_rms / (center_wavelength * center_wavelength);

    PhotonPairState state;
    state.grid = FrequencyGrid::uniform(omega0, span_factor * sigma, grid_points);
    state.pump_omega = 2.0 * omega0;
    state.entangled = entangled;
    state.amplitude.resize(grid_points);

    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = state.grid.detunings[i] / sigma;
        state.amplitude[i] = std::exp(-0.25 * x * x);  // |f|^2 is N(0, sigma^2)
    }
    const double scale = 1.0 / std::sqrt(state.norm());
    for (auto& a : state.amplitude) a *= scale;
    return state;
}

CollapseResult conditional_collapse(const PhotonPairState& state, double filter_center,
                                    double filter_rms, Arm filtered_arm) {
    const FrequencyGrid& grid = state.grid;
    const std::size_t n = grid.size();
    if (!(filter_rms > 0.0)) throw std::invalid_argument("filter width must be positive");
    if (!(filter_center > 0.0)) throw std::invalid_argument("filter center must be positive");

    const double omega_f = omega_from_wavelength(filter_center);
    const double sigma_f = std::isinf(filter_rms)
                               ? std::numeric_limits<double>::infinity()
                               : 2.0 * pi * speed_of_light * filter_rms /
                                     (filter_center * filter_center);

    // Intensity transmission of the filter at the filtered arm's frequency.
    auto passband = [&](std::size_t i) {
        if (std::isinf(sigma_f)) return 1.0;
        const double omega =
            filtered_arm == Arm::a ? grid.omega(i) : grid.omega(grid.mirror_index(i));
        const double x = (omega - omega_f) / sigma_f;
        return std::exp(-0.5 * x * x);
    };

    std::vector<double> joint(n);
    double kept = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        joint[i] = std::norm(state.amplitude[i]) * passband(i);
        kept += joint[i] * grid.weights[i];
    }
    if (!(kept > 1e-6)) throw std::invalid_argument("filter passband does not overlap the spectrum");

    // Pair index i puts arm A at omega(i) and arm B at omega(mirror(i)), so
    // reading the conjugate of a filtered arm A walks the joint density
    // through Omega -> -Omega; for a filtered arm B the A-axis is direct.
    auto pair_index = [&](std::size_t i) {
        return filtered_arm == Arm::a ? grid.mirror_index(i) : i;
    };

    Spectrum conjugate;
    conjugate.grid = grid;
    conjugate.density.resize(n);
    if (state.entangled) {
        for (std::size_t i = 0; i < n; ++i)
            conjugate.density[i] = joint[pair_index(i)] / kept;
    } else {
        // Independent photons: filtering one arm tells the other nothing.
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(state.amplitude[i]) * grid.weights[i];
        for (std::size_t i = 0; i < n; ++i)
            conjugate.density[i] = std::norm(state.amplitude[pair_index(i)]) / norm;
    }

    CollapseResult result;
    result.coherence_length = speed_of_light / conjugate.rms_detuning();
    result.conjugate = std::move(conjugate);
    return result;
}

double correlation_time(const PhotonPairState& state) {
    // The difference-frequency coordinate is 2*Omega, so the transform of the
    // Gaussian marginal has rms width 1 / (2 sigma_Omega).
    return 1.0 / (2.0 * state.rms_detuning());
}

}  // namespace biphoton
