#pragma once

#include <optional>
#include <vector>

#include "biphoton/hom.hpp"
#include "biphoton/pair_state.hpp"

namespace biphoton {

// HOM interferometer with a polarization labeler: a half-wave plate in arm A
// and optional linear polarizers in front of the two detectors. An absent
// polarizer means the detector traces over polarization incoherently.
struct EraserConfig {
    double hwp_angle = 0.0;            // fast axis, rad
    std::optional<double> pol1;        // analyzer before detector 1, rad
    std::optional<double> pol2;        // analyzer before detector 2, rad
    PhotonPairState pair;
    // Bookkeeping only: whether the eraser setting is chosen after the first
    // detection. The model is time-stationary, so predictions are identical.
    bool delayed_choice = false;

    void validate() const;
};

struct EraserProfile {
    HomScan scan;
    double visibility;  // 1 - rate(0); negative = peak
};

// Coincidence amplitude summed over the transmit-transmit and
// reflect-reflect processes with Jones projections at the detectors;
// unprojected polarization components are traced incoherently.
EraserProfile eraser_scan(const EraserConfig& config, const std::vector<double>& delays);

// Normalized coincidence rate at a single delay.
double eraser_rate(const EraserConfig& config, double delay);

// Visibility versus the second polarizer angle at fixed HWP and P1 settings.
std::vector<double> eraser_visibility_curve(double hwp_angle, double pol1,
                                            const std::vector<double>& pol2_values,
                                            const PhotonPairState& pair);

// Singles rate at one detector (1 or 2), tracing over everything at the
// other detector; used for the no-signaling check.
double eraser_singles_rate(const EraserConfig& config, int detector);

}  // namespace biphoton
