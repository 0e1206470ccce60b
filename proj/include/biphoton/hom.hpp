#pragma once

#include <optional>
#include <vector>

#include "biphoton/elements.hpp"
#include "biphoton/pair_state.hpp"

namespace biphoton {

// One interferometer arm: a chain of scalar elements plus a fixed delay.
struct ArmConfig {
    std::vector<ScalarTransfer> elements;
    double extra_delay = 0.0;  // s

    std::complex<double> transfer(double omega) const;
};

// Coincidence rate versus the scanned relative delay, normalized so that
// fully distinguishable wavepackets give rate 1.
struct HomScan {
    std::vector<double> delays;  // s
    std::vector<double> rates;
};

struct DipFit {
    double center = 0.0;       // s
    double rms_width = 0.0;    // s
    double visibility = 0.0;   // in [-1, 1]; positive = dip, negative = peak
    double baseline = 1.0;
    double fit_residual = 0.0;
};

// Coincidence rate for each delay: quadrature over the detuning grid of
// |A_TT - A_RR|^2 summed over detection-frequency assignments, where the
// exchanged (reflection-reflection) amplitude carries the r^2 = -1/2 beam
// splitter factor. The scan delay acts on arm B.
HomScan hom_coincidence_scan(const PhotonPairState& pair, const ArmConfig& arm_a,
                             const ArmConfig& arm_b, const std::vector<double>& delays);

// Least-squares Gaussian-on-baseline fit with deterministic initialization
// from the extremum and second moment. Returns nullopt when no extremum is
// distinguishable from the baseline (|visibility| < 1e-3).
std::optional<DipFit> fit_dip(const HomScan& scan);

struct DelayMeasurement {
    double delay_shift;  // s, fitted dip center with sample minus without
    double width_ratio;  // fitted rms width ratio, with / without
    DipFit reference_fit;
    DipFit sample_fit;
};

// Runs two scans (arm A empty, then arm A holding the sample transfer) and
// compares the fitted dips. The shift equals the sample's own group delay;
// pass an insertion transfer to measure a sample relative to the vacuum
// path it displaces.
DelayMeasurement sample_delay_measurement(const PhotonPairState& pair,
                                          const ScalarTransfer& sample);

// Classical benchmark: rms width of a transform-limited Gaussian pulse after
// traversing the material, sigma_out = sigma_in sqrt(1 + (beta2 L / (2 sigma_in^2))^2).
double classical_pulse_width(const Material& material, double length,
                             double input_rms_width, double center_wavelength);

}  // namespace biphoton
