#include "biphoton/multilayer.hpp"

#include <cmath>
#include <stdexcept>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

using cd = std::complex<double>;
const cd iu(0.0, 1.0);

struct Mat2 {
    cd a, b, c, d;
};

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

// cos(theta_j) from the Snell invariant; the characteristic matrix is even
// in cos(theta_j) for interior layers, so the sqrt branch does not matter.
cd layer_cosine(cd n, double snell) {
    const cd s = snell / n;
    return std::sqrt(1.0 - s * s);
}

cd tilted_admittance(cd n, cd cos_t, Polarization pol) {
    return pol == Polarization::s ? n * cos_t : n / cos_t;
}

// Characteristic matrix of one layer; sign convention matches propagation
// phases exp(+i n omega d / c), so an index-matched layer has t = e^{+i delta}.
Mat2 layer_matrix(const Layer& layer, double k0, double snell, Polarization pol) {
    const cd cos_t = layer_cosine(layer.n, snell);
    const cd delta = k0 * layer.n * layer.thickness * cos_t;
    const cd eta = tilted_admittance(layer.n, cos_t, pol);
    const cd cd_ = std::cos(delta);
    const cd sd = std::sin(delta);
    return {cd_, -iu * sd / eta, -iu * eta * sd, cd_};
}

StackResponse response_from_layers(const std::vector<Layer>& layers,
                                   double ambient_in, double ambient_out,
                                   double wavelength, double angle,
                                   Polarization pol) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (!(angle >= 0.0 && angle < 0.5 * pi))
        throw std::invalid_argument("incidence angle must be in [0, pi/2)");

    const double snell = ambient_in * std::sin(angle);
    if (snell >= ambient_out)
        throw std::invalid_argument("transmitted wave is evanescent in the output ambient");

    const double k0 = 2.0 * pi / wavelength;
    Mat2 m{1.0, 0.0, 0.0, 1.0};
    for (const auto& layer : layers) {
        if (!(layer.thickness > 0.0))
            throw std::invalid_argument("layer thickness must be positive");
        m = m * layer_matrix(layer, k0, snell, pol);
    }

    const double cos_in = std::sqrt(1.0 - std::pow(snell / ambient_in, 2));
    const double cos_out = std::sqrt(1.0 - std::pow(snell / ambient_out, 2));
    const cd eta_in = tilted_admittance(ambient_in, cos_in, pol);
    const cd eta_out = tilted_admittance(ambient_out, cos_out, pol);

    const cd upper = m.a + m.b * eta_out;
    const cd lower = m.c + m.d * eta_out;
    const cd denom = eta_in * upper + lower;

    StackResponse out;
    out.r = (eta_in * upper - lower) / denom;
    out.t = 2.0 * eta_in / denom;
    out.reflectance = std::norm(out.r);
    out.transmission = (eta_out.real() / eta_in.real()) * std::norm(out.t);
    return out;
}

BlochCell cell_from_stack(const LayerStack& stack) {
    if (stack.layers.size() < 2)
        throw std::invalid_argument("stack has no periodic cell");
    const Layer& h = stack.layers[0];
    const Layer& l = stack.layers[1];
    if (h.n.imag() != 0.0 || l.n.imag() != 0.0)
        throw std::invalid_argument("Bloch analysis requires lossless layers");
    return {h.n.real(), h.thickness, l.n.real(), l.thickness};
}

double half_trace(const BlochCell& cell, double wavelength, double angle,
                  Polarization pol) {
    const double k0 = 2.0 * pi / wavelength;
    const double snell = std::sin(angle);  // vacuum ambient
    const Mat2 m = layer_matrix({cell.n_high, cell.d_high}, k0, snell, pol) *
                   layer_matrix({cell.n_low, cell.d_low}, k0, snell, pol);
    return 0.5 * (m.a + m.d).real();
}

}  // namespace

double LayerStack::total_thickness() const {
    double d = 0.0;
    for (const auto& layer : layers) d += layer.thickness;
    return d;
}

bool LayerStack::lossless() const {
    for (const auto& layer : layers)
        if (layer.n.imag() != 0.0) return false;
    return true;
}

LayerStack LayerStack::reversed() const {
    LayerStack out;
    out.ambient_in = ambient_out;
    out.ambient_out = ambient_in;
    out.layers.assign(layers.rbegin(), layers.rend());
    return out;
}

LayerStack quarter_wave_stack(double design_wavelength, double n_high,
                              double n_low, int periods) {
    if (periods < 1) throw std::invalid_argument("periods must be >= 1");
    if (!(n_high > 1.0 && n_low > 1.0))
        throw std::invalid_argument("layer indices must exceed 1");

    LayerStack stack;
    const double d_high = design_wavelength / (4.0 * n_high);
    const double d_low = design_wavelength / (4.0 * n_low);
    for (int p = 0; p < periods; ++p) {
        stack.layers.push_back({n_high, d_high});
        stack.layers.push_back({n_low, d_low});
    }
    stack.layers.push_back({n_high, d_high});
    return stack;
}

double quarter_wave_design_wavelength(double total_thickness, double n_high,
                                      double n_low, int periods) {
    const double per_lambda = (periods + 1) / (4.0 * n_high) + periods / (4.0 * n_low);
    return total_thickness / per_lambda;
}

StackResponse stack_response(const LayerStack& stack, double wavelength,
                             double angle, Polarization pol) {
    return response_from_layers(stack.layers, stack.ambient_in, stack.ambient_out,
                                wavelength, angle, pol);
}

std::complex<double> bloch_wavevector(const BlochCell& cell, double wavelength,
                                      double angle, Polarization pol) {
    const double tr = half_trace(cell, wavelength, angle, pol);
    const cd kl = std::acos(cd(tr, 0.0));  // principal branch, Re in [0, pi]
    return {kl.real() / cell.period(), std::abs(kl.imag()) / cell.period()};
}

std::pair<double, double> band_gap_edges(const BlochCell& cell, double angle,
                                         Polarization pol, double lambda_inside) {
    auto in_gap = [&](double lambda) {
        return std::abs(half_trace(cell, lambda, angle, pol)) > 1.0;
    };
    if (!in_gap(lambda_inside))
        throw std::invalid_argument("lambda_inside is not inside a band gap");

    auto bisect = [&](double inside, double outside) {
        for (int k = 0; k < 80; ++k) {
            const double mid = 0.5 * (inside + outside);
            (in_gap(mid) ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };

    const double step = lambda_inside * 1e-3;
    double lo = lambda_inside;
    while (in_gap(lo - step)) {
        lo -= step;
        if (lo < 10.0 * step)
            throw std::invalid_argument("band gap extends beyond the search range");
    }
    double hi = lambda_inside;
    while (in_gap(hi + step)) {
        hi += step;
        if (hi > 100.0 * lambda_inside)
            throw std::invalid_argument("band gap extends beyond the search range");
    }
    return {bisect(lo, lo - step), bisect(hi, hi + step)};
}

TunnelingTimes tunneling_times(const LayerStack& stack, double wavelength,
                               double angle, Polarization pol,
                               double relative_step) {
    const double omega = omega_from_wavelength(wavelength);
    const BlochCell cell = cell_from_stack(stack);
    const double total = stack.total_thickness();

    auto amplitude_at = [&](double w) {
        return stack_response(stack, wavelength_from_omega(w), angle, pol).t;
    };

    // Group delay: centered difference of the transmission phase, with the
    // branch step kept well below pi/2.
    auto phase_slope = [&](double h) {
        const cd hi = amplitude_at(omega + h);
        const cd lo = amplitude_at(omega - h);
        const double dphi = std::arg(hi * std::conj(lo));
        if (!(std::abs(dphi) < 0.5 * pi))
            throw numerical_error("group delay: phase step crossed a branch");
        return dphi / (2.0 * h);
    };

    // Semiclassical: Bloch dispersion of the infinite periodic medium. The
    // complex-difference magnitude covers both rules at once: dK/d(omega) in
    // a band (real part varies) and d(kappa)/d(omega) in a gap, where the
    // factor of i is dropped and only the decay constant varies.
    auto bloch_slope = [&](double h) {
        const cd hi = bloch_wavevector(cell, wavelength_from_omega(omega + h), angle, pol);
        const cd lo = bloch_wavevector(cell, wavelength_from_omega(omega - h), angle, pol);
        return std::abs(hi - lo) / (2.0 * h);
    };

    // Larmor sensitivity: scale every layer permittivity by (1 - s).
    auto perturbed_ln_t = [&](double s) {
        LayerStack scaled = stack;
        const double factor = std::sqrt(1.0 - s);
        for (auto& layer : scaled.layers) layer.n *= factor;
        return std::log(stack_response(scaled, wavelength, angle, pol).t);
    };
    auto larmor_slope = [&](double h) {
        const cd dlnt = (perturbed_ln_t(h) - perturbed_ln_t(-h)) / (2.0 * h);
        // tau_y from the phase sensitivity, tau_z from the magnitude sensitivity
        return std::pair<double, double>{-(2.0 / omega) * dlnt.imag(),
                                         -(2.0 / omega) * dlnt.real()};
    };

    auto richardson = [&](auto f, double h) {
        const auto f2 = f(0.5 * h);
        const auto f1 = f(h);
        return (4.0 * f2 - f1) / 3.0;
    };

    TunnelingTimes out;
    out.group_delay = richardson(phase_slope, omega * relative_step);
    out.semiclassical = total * richardson(bloch_slope, omega * relative_step);

    const double hs = relative_step;
    const auto [y1, z1] = larmor_slope(hs);
    const auto [y2, z2] = larmor_slope(0.5 * hs);
    out.larmor_y = (4.0 * y2 - y1) / 3.0;
    out.larmor_z = (4.0 * z2 - z1) / 3.0;
    out.larmor = std::hypot(out.larmor_y, out.larmor_z);
    out.d_over_c = total / (speed_of_light * std::cos(angle));
    return out;
}

}  // namespace biphoton
