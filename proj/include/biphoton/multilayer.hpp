#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace biphoton {

enum class Polarization { s, p };

struct Layer {
    std::complex<double> n;  // refractive index (real for lossless stacks)
    double thickness;        // m, > 0
};

struct LayerStack {
    std::vector<Layer> layers;
    double ambient_in = 1.0;
    double ambient_out = 1.0;

    double total_thickness() const;
    bool lossless() const;
    LayerStack reversed() const;
};

// (HL)^periods H quarter-wave stack: 2*periods + 1 layers, each of optical
// thickness design_wavelength / 4, air on both sides.
LayerStack quarter_wave_stack(double design_wavelength, double n_high,
                              double n_low, int periods);

// Solves the design wavelength of an (HL)^periods H quarter-wave stack from
// its total physical thickness:
//   d = lambda0 * ((periods+1)/(4 n_high) + periods/(4 n_low)).
double quarter_wave_design_wavelength(double total_thickness, double n_high,
                                      double n_low, int periods);

struct StackResponse {
    std::complex<double> t;  // transmission amplitude (phase accrues as +i n omega d / c)
    std::complex<double> r;  // reflection amplitude
    double transmission;     // T
    double reflectance;      // R; T + R = 1 for lossless equal-ambient stacks
};

// Characteristic-matrix solution for a plane wave hitting the stack at
// `angle` (radians, measured in the input ambient). Throws if the output
// ambient is evanescent (total internal reflection).
StackResponse stack_response(const LayerStack& stack, double wavelength,
                             double angle, Polarization pol);

// One period of the infinite periodic medium.
struct BlochCell {
    double n_high, d_high;
    double n_low, d_low;

    double period() const { return d_high + d_low; }
};

// Bloch wavevector K from cos(K Lambda) = Tr(M_cell) / 2. Inside a gap the
// real part sits at 0 or pi/Lambda and the imaginary part (returned >= 0)
// is the evanescent decay constant.
std::complex<double> bloch_wavevector(const BlochCell& cell, double wavelength,
                                      double angle, Polarization pol);

// Wavelength interval with |Tr/2| > 1 that contains lambda_inside
// (bisected band edges). Returns {lower_edge, upper_edge}.
std::pair<double, double> band_gap_edges(const BlochCell& cell, double angle,
                                         Polarization pol, double lambda_inside);

struct TunnelingTimes {
    double group_delay;    // d(arg t)/d(omega), s
    double semiclassical;  // total_thickness * |dK/d(omega)| from the Bloch dispersion
    double larmor;         // sqrt(larmor_y^2 + larmor_z^2)
    double larmor_y;       // transmission-phase sensitivity component
    double larmor_z;       // transmission-magnitude sensitivity component
    double d_over_c;       // total_thickness / (c cos(angle)), the vacuum reference
};

// The three traversal-time definitions at one operating point. The Larmor
// components come from the sensitivity of ln t to a uniform relative
// perturbation of all layer permittivities, n_j^2 -> n_j^2 (1 - s):
//   tau_y = -(2/omega) d(arg t)/ds,  tau_z = -(2/omega) d(ln|t|)/ds,
// which reduces exactly to the group delay when the stack is reflectionless.
// The stack must be a periodic two-index structure (the Bloch cell is read
// from its first two layers). All derivatives are centered differences with
// one Richardson halving at the given relative step.
TunnelingTimes tunneling_times(const LayerStack& stack, double wavelength,
                               double angle, Polarization pol,
                               double relative_step = 1e-6);

}  // namespace biphoton
