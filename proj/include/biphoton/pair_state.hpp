#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "biphoton/grid.hpp"

namespace biphoton {

// Joint spectral amplitude f(Omega) of a frequency-anticorrelated photon
// pair: the arm-A photon sits at omega0 + Omega and the arm-B photon at
// omega0 - Omega, so every sample conserves the pump energy exactly.
//
// With entangled = false the same marginal spectrum is stored, but
// downstream engines treat the two photons' detunings as independent
// (separable control source).
struct PhotonPairState {
    FrequencyGrid grid;
    std::vector<std::complex<double>> amplitude;  // f(Omega) per grid sample
    double pump_omega = 0.0;                      // rad/s, exactly 2 * center
    double pol_a = 0.0;                           // linear polarization, rad
    double pol_b = 0.0;
    bool entangled = true;

    // Quadrature norm sum |f|^2 w; 1 within rounding after construction.
    double norm() const;

    // rms detuning of the marginal density |f|^2, rad/s.
    double rms_detuning() const;
};

// Marginal single-arm spectrum on the shared detuning grid; density[i] is
// the probability density at frequency grid.omega(i), normalized so that
// sum density * w = 1.
struct Spectrum {
    FrequencyGrid grid;
    std::vector<double> density;

    double rms_detuning() const;
};

enum class Arm { a, b };

// Builds the Gaussian pair state. All spectral widths in this library are
// rms widths of the intensity spectrum, quoted in wavelength (meters);
// bandwidth_rms is converted as sigma_omega = 2 pi c * bandwidth / lambda^2.
// The grid spans +/- span_factor * sigma_omega (span_factor >= 3).
PhotonPairState make_pair_state(double pump_wavelength, double center_wavelength,
                                double bandwidth_rms, std::size_t grid_points,
                                double span_factor, bool entangled);

struct CollapseResult {
    Spectrum conjugate;       // spectrum of the unfiltered arm after collapse
    double coherence_length;  // m, c / sigma_omega of the conjugate spectrum
};

// Applies a Gaussian intensity filter (center / rms width in wavelength) to
// one arm and returns the conditioned spectrum of the conjugate arm, mapped
// through Omega -> -Omega. An infinite filter_rms means a flat passband.
// For a separable source the conjugate spectrum is unaffected by filtering.
CollapseResult conditional_collapse(const PhotonPairState& state, double filter_center,
                                    double filter_rms, Arm filtered_arm);

// rms width of the Fourier transform of |f|^2 over the difference-frequency
// coordinate 2*Omega; equals the HOM dip rms width for identical lossless
// arms. For the Gaussian source this is 1 / (2 sigma_Omega).
double correlation_time(const PhotonPairState& state);

}  // namespace biphoton
