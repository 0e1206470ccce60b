#include "biphoton/hom.hpp"

#include <cmath>
#include <stdexcept>

#include "biphoton/constants.hpp"

namespace biphoton {

namespace {
const std::complex<double> iu(0.0, 1.0);
}

std::complex<double> ArmConfig::transfer(double omega) const {
    std::complex<double> h = std::exp(iu * (omega * extra_delay));
    for (const auto& element : elements) h *= element(omega);
    return h;
}

namespace {

// Entangled pair: the joint support is the anti-diagonal omega_a + omega_b =
// pump, so one detuning index labels both detected frequencies. With
// g(Omega) = f(Omega) H_A(omega0+Omega) H_B(omega0-Omega), the coincidence
// amplitude for the assignment (D1 at omega0+Omega, D2 at omega0-Omega) is
//   A(Omega) = 1/2 [ g(Omega) e^{-i Omega tau} - g(-Omega) e^{+i Omega tau} ],
// the minus sign being t^2 + r^2 = 0 at the 50/50 splitter.
HomScan scan_entangled(const PhotonPairState& pair, const ArmConfig& arm_a,
                       const ArmConfig& arm_b, const std::vector<double>& delays) {
    const FrequencyGrid& grid = pair.grid;
    const std::size_t n = grid.size();

    std::vector<std::complex<double>> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double wa = grid.omega(i);
        const double wb = grid.omega(grid.mirror_index(i));
        g[i] = pair.amplitude[i] * arm_a.transfer(wa) * arm_b.transfer(wb);
    }

    double baseline = 0.0;
    for (std::size_t i = 0; i < n; ++i) baseline += 0.5 * std::norm(g[i]) * grid.weights[i];
    if (!(baseline > 0.0)) throw std::invalid_argument("arms transmit no amplitude");

    HomScan scan;
    scan.delays = delays;
    scan.rates.resize(delays.size());
    for (std::size_t k = 0; k < delays.size(); ++k) {
        const double tau = delays[k];
        double raw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::complex<double> phase = std::exp(iu * (-grid.detunings[i] * tau));
            const std::complex<double> amp =
                0.5 * (g[i] * phase - g[grid.mirror_index(i)] * std::conj(phase));
            raw += std::norm(amp) * grid.weights[i];
        }
        scan.rates[k] = raw / baseline;
    }
    return scan;
}

// Separable control source: the photons carry the same marginal but
// independent detunings. The double integral factorizes, leaving
//   rate(tau) = 1 - |m(tau)|^2 / (P_A P_B),
//   m(tau) = sum w |f|^2 H_A conj(H_B) e^{-i omega tau}.
HomScan scan_separable(const PhotonPairState& pair, const ArmConfig& arm_a,
                       const ArmConfig& arm_b, const std::vector<double>& delays) {
    const FrequencyGrid& grid = pair.grid;
    const std::size_t n = grid.size();

    std::vector<double> u(n);
    std::vector<std::complex<double>> ha(n), hb(n);
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::norm(pair.amplitude[i]) * grid.weights[i];
        ha[i] = arm_a.transfer(grid.omega(i));
        hb[i] = arm_b.transfer(grid.omega(i));
        pa += u[i] * std::norm(ha[i]);
        pb += u[i] * std::norm(hb[i]);
    }
    if (!(pa > 0.0 && pb > 0.0)) throw std::invalid_argument("arms transmit no amplitude");

    HomScan scan;
    scan.delays = delays;
    scan.rates.resize(delays.size());
    for (std::size_t k = 0; k < delays.size(); ++k) {
        const double tau = delays[k];
        std::complex<double> m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            m += u[i] * ha[i] * std::conj(hb[i]) * std::exp(iu * (-grid.omega(i) * tau));
        scan.rates[k] = 1.0 - std::norm(m) / (pa * pb);
    }
    return scan;
}

}  // namespace

HomScan hom_coincidence_scan(const PhotonPairState& pair, const ArmConfig& arm_a,
                             const ArmConfig& arm_b, const std::vector<double>& delays) {
    if (std::abs(pair.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("pair state is not normalized");
    return pair.entangled ? scan_entangled(pair, arm_a, arm_b, delays)
                          : scan_separable(pair, arm_a, arm_b, delays);
}

DelayMeasurement sample_delay_measurement(const PhotonPairState& pair,
                                          const ScalarTransfer& sample) {
    const double tc = correlation_time(pair);
    const double half_span = 8.0 * tc;
    const std::size_t points = 161;

    // The compensating prism has to sit near the sample's group delay; seed
    // the scan window from the analytic phase slope at band center.
    const double sample_delay = transfer_group_delay(sample, pair.grid.center_omega);

    auto window = [&](double center) {
        std::vector<double> delays(points);
        for (std::size_t k = 0; k < points; ++k)
            delays[k] =
                center - half_span + 2.0 * half_span * static_cast<double>(k) / (points - 1);
        return delays;
    };

    ArmConfig empty;
    ArmConfig with_sample;
    with_sample.elements.push_back(sample);

    const HomScan ref_scan = hom_coincidence_scan(pair, empty, empty, window(0.0));
    const HomScan smp_scan =
        hom_coincidence_scan(pair, with_sample, empty, window(sample_delay));

    const auto ref_fit = fit_dip(ref_scan);
    const auto smp_fit = fit_dip(smp_scan);
    if (!ref_fit || !smp_fit)
        throw std::invalid_argument("delay measurement found no dip to fit");

    DelayMeasurement out;
    out.reference_fit = *ref_fit;
    out.sample_fit = *smp_fit;
    out.delay_shift = smp_fit->center - ref_fit->center;
    out.width_ratio = smp_fit->rms_width / ref_fit->rms_width;
    return out;
}

double classical_pulse_width(const Material& material, double length,
                             double input_rms_width, double center_wavelength) {
    if (!(input_rms_width > 0.0)) throw std::invalid_argument("pulse width must be positive");
    if (!(length >= 0.0)) throw std::invalid_argument("length must be >= 0");
    const double beta2 = material_dispersion(material, center_wavelength).gvd;
    const double chirp = beta2 * length / (2.0 * input_rms_width * input_rms_width);
    return input_rms_width * std::sqrt(1.0 + chirp * chirp);
}

}  // namespace biphoton
