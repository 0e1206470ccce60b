#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "biphoton/materials.hpp"

namespace biphoton {

// Frequency-domain amplitude transfer H(omega) of a passive scalar element;
// |H| <= 1 everywhere.
using ScalarTransfer = std::function<std::complex<double>(double omega)>;

// Transparent dispersive slab, H(omega) = exp(i n(omega) omega L / c).
ScalarTransfer slab_transfer(const Material& material, double length);

// Replacing a length L of vacuum with the material:
// H(omega) = exp(i (n(omega) - 1) omega L / c). This is what sliding a glass
// sample into an existing beam path does.
ScalarTransfer insertion_transfer(const Material& material, double length);

// Pure delay, H(omega) = exp(i omega tau).
ScalarTransfer delay_transfer(double delay);

struct BeamSplitterAmplitudes {
    std::complex<double> t;
    std::complex<double> r;
};

// Lossless symmetric 50/50 beam splitter: t = 1/sqrt(2), r = i/sqrt(2).
// Single source of truth for every interferometer in the library; the i on
// reflection is what makes the both-transmitted and both-reflected
// two-photon amplitudes cancel (t^2 + r^2 = 0).
BeamSplitterAmplitudes beamsplitter_amplitudes();

// 2x2 complex Jones matrix in the (horizontal, vertical) linear basis.
struct JonesMatrix {
    std::complex<double> xx, xy, yx, yy;

    std::pair<std::complex<double>, std::complex<double>> apply(
        std::complex<double> ex, std::complex<double> ey) const {
        return {xx * ex + xy * ey, yx * ex + yy * ey};
    }
};

JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b);

// Half-wave plate with fast axis at `axis` from horizontal; maps horizontal
// input to linear polarization at 2*axis.
JonesMatrix half_wave_plate(double axis);
// Quarter-wave plate (fast-axis phase 0, slow axis +pi/2).
JonesMatrix quarter_wave_plate(double axis);
// Ideal linear polarizer: rank-1 projector onto the axis.
JonesMatrix linear_polarizer(double axis);

// d(arg H)/d(omega) by centered differences with one Richardson halving
// (relative step 1e-6 by default).
double transfer_group_delay(const ScalarTransfer& transfer, double omega,
                            double relative_step = 1e-6);

struct PhaseScan {
    std::vector<double> omegas;
    std::vector<double> phases;  // sequentially unwrapped arg H
};

// Evaluates H on [omega_lo, omega_hi] and unwraps the phase sequentially.
// The grid density doubles until every adjacent step is below pi/2; if that
// fails within max_doublings the branch is ambiguous and numerical_error is
// thrown rather than guessing.
PhaseScan unwrapped_phase(const ScalarTransfer& transfer, double omega_lo,
                          double omega_hi, std::size_t initial_points,
                          int max_doublings = 12);

}  // namespace biphoton
