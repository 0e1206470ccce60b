#include "biphoton/elements.hpp"

#include <cmath>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {
const std::complex<double> iu(0.0, 1.0);
}

ScalarTransfer slab_transfer(const Material& material, double length) {
    if (!(length >= 0.0)) throw std::invalid_argument("slab length must be >= 0");
    return [material, length](double omega) {
        const double n = material.index(wavelength_from_omega(omega));
        return std::exp(iu * (n * omega * length / speed_of_light));
    };
}

ScalarTransfer insertion_transfer(const Material& material, double length) {
    if (!(length >= 0.0)) throw std::invalid_argument("slab length must be >= 0");
    return [material, length](double omega) {
        const double n = material.index(wavelength_from_omega(omega));
        return std::exp(iu * ((n - 1.0) * omega * length / speed_of_light));
    };
}

ScalarTransfer delay_transfer(double delay) {
    return [delay](double omega) { return std::exp(iu * (omega * delay)); };
}

BeamSplitterAmplitudes beamsplitter_amplitudes() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {inv_sqrt2, iu * inv_sqrt2};
}

JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b) {
    return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
            a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
}

JonesMatrix half_wave_plate(double axis) {
    const double c = std::cos(2.0 * axis), s = std::sin(2.0 * axis);
    return {c, s, s, -c};
}

JonesMatrix quarter_wave_plate(double axis) {
    const double c = std::cos(axis), s = std::sin(axis);
    // R(axis) diag(1, i) R(-axis)
    return {c * c + iu * s * s, c * s - iu * c * s,
            c * s - iu * c * s, s * s + iu * c * c};
}

JonesMatrix linear_polarizer(double axis) {
    const double c = std::cos(axis), s = std::sin(axis);
    return {c * c, c * s, c * s, s * s};
}

double transfer_group_delay(const ScalarTransfer& transfer, double omega,
                            double relative_step) {
    auto slope = [&](double h) {
        const std::complex<double> hi = transfer(omega + h);
        const std::complex<double> lo = transfer(omega - h);
        const double dphi = std::arg(hi * std::conj(lo));
        if (std::abs(dphi) > 0.5 * pi)
            throw numerical_error("group delay step crossed a phase branch");
        return dphi / (2.0 * h);
    };
    const double h = omega * relative_step;
    return (4.0 * slope(0.5 * h) - slope(h)) / 3.0;
}

PhaseScan unwrapped_phase(const ScalarTransfer& transfer, double omega_lo,
                          double omega_hi, std::size_t initial_points,
                          int max_doublings) {
    if (!(omega_hi > omega_lo) || initial_points < 2)
        throw std::invalid_argument("bad phase scan range");

    auto attempt = [&](std::size_t points, bool& ok) {
        PhaseScan scan;
        scan.omegas.resize(points);
        scan.phases.resize(points);
        const double step = (omega_hi - omega_lo) / static_cast<double>(points - 1);
        std::complex<double> prev = transfer(omega_lo);
        scan.omegas[0] = omega_lo;
        scan.phases[0] = std::arg(prev);
        ok = true;
        for (std::size_t k = 1; k < points; ++k) {
            const double omega = omega_lo + step * static_cast<double>(k);
            const std::complex<double> cur = transfer(omega);
            const double dphi = std::arg(cur * std::conj(prev));
            if (!(std::abs(dphi) < 0.5 * pi)) {
                ok = false;
                return scan;
            }
            scan.omegas[k] = omega;
            scan.phases[k] = scan.phases[k - 1] + dphi;
            prev = cur;
        }
        return scan;
    };

    // A uniform grid cannot tell an aliased branch from a genuine one (any
    // 2 pi-commensurate step passes the gate), so the density is sized from
    // the actual phase slope first: |d(arg H)/d(omega)| sampled branch-free
    // with a tiny local step.
    double max_slope = 0.0;
    const double h = (omega_hi - omega_lo) * 1e-9;
    for (int k = 0; k <= 16; ++k) {
        // probes stay strictly inside [omega_lo, omega_hi]
        const double omega = omega_lo + h + (omega_hi - omega_lo - 2.0 * h) * k / 16.0;
        const std::complex<double> hi = transfer(omega + h);
        const std::complex<double> lo = transfer(omega - h);
        max_slope = std::max(max_slope, std::abs(std::arg(hi * std::conj(lo))) / (2.0 * h));
    }
    const double needed = (omega_hi - omega_lo) * max_slope / (0.25 * pi);
    std::size_t points = initial_points;
    if (needed + 2.0 > static_cast<double>(points))
        points = static_cast<std::size_t>(needed) + 2;

    // Doubling still backstops slope spikes the probe missed; a scan counts
    // once two successive densities agree at their shared samples.
    PhaseScan previous;
    bool have_previous = false;
    for (int round = 0; round <= max_doublings; ++round, points = points * 2 - 1) {
        bool ok = true;
        PhaseScan scan = attempt(points, ok);
        if (ok && have_previous) {
            // the doubled grid keeps every old sample at index 2k
            const std::size_t mid = (previous.phases.size() - 1) / 2;
            const double d_end = scan.phases.back() - previous.phases.back();
            const double d_mid = scan.phases[2 * mid] - previous.phases[mid];
            if (std::abs(d_end) < 1e-6 && std::abs(d_mid) < 1e-6) return scan;
        }
        have_previous = ok;
        if (ok) previous = std::move(scan);
    }
    throw numerical_error("phase unwrap failed: adjacent branch ambiguity persists");
}

}  // namespace biphoton
