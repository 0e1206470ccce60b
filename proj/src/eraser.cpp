#include "biphoton/eraser.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "biphoton/constants.hpp"
#include "biphoton/elements.hpp"

namespace biphoton {

namespace {

using cd = std::complex<double>;
const cd iu(0.0, 1.0);

struct Pol {
    cd x, y;
};

cd dot(const Pol& analyzer, const Pol& field) {
    return std::conj(analyzer.x) * field.x + std::conj(analyzer.y) * field.y;
}

std::vector<Pol> analyzer_basis(const std::optional<double>& pol) {
    if (pol) return {{std::cos(*pol), std::sin(*pol)}};
    return {{1.0, 0.0}, {0.0, 1.0}};  // full incoherent trace
}

struct Projections {
    // a: photon A seen by D1 and photon B by D2 (transmit-transmit);
    // b: the exchanged assignment (reflect-reflect).
    std::vector<std::pair<cd, cd>> ab;
};

Projections projections(const EraserConfig& config) {
    const JonesMatrix hwp = half_wave_plate(config.hwp_angle);
    const Pol in_a{std::cos(config.pair.pol_a), std::sin(config.pair.pol_a)};
    const Pol in_b{std::cos(config.pair.pol_b), std::sin(config.pair.pol_b)};
    const auto [eax, eay] = hwp.apply(in_a.x, in_a.y);
    const Pol e_a{eax, eay};
    const Pol e_b = in_b;

    Projections out;
    for (const Pol& mu : analyzer_basis(config.pol1))
        for (const Pol& nu : analyzer_basis(config.pol2))
            out.ab.emplace_back(dot(mu, e_a) * dot(nu, e_b),
                                dot(mu, e_b) * dot(nu, e_a));
    return out;
}

double raw_rate(const EraserConfig& config, const Projections& proj, double tau) {
    const FrequencyGrid& grid = config.pair.grid;
    const std::size_t n = grid.size();
    double raw = 0.0;
    if (config.pair.entangled) {
        for (const auto& [a, b] : proj.ab) {
            for (std::size_t i = 0; i < n; ++i) {
                const cd phase = std::exp(iu * (-grid.detunings[i] * tau));
                const cd amp = 0.5 * (config.pair.amplitude[i] * a * phase -
                                      config.pair.amplitude[grid.mirror_index(i)] * b *
                                          std::conj(phase));
                raw += std::norm(amp) * grid.weights[i];
            }
        }
    } else {
        cd m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            m += std::norm(config.pair.amplitude[i]) * grid.weights[i] *
                 std::exp(iu * (grid.detunings[i] * tau));
        const double overlap = std::norm(m);
        for (const auto& [a, b] : proj.ab)
            raw += 0.25 * (std::norm(a) + std::norm(b) -
                           2.0 * (a * std::conj(b)).real() * overlap);
    }
    return raw;
}

double baseline(const Projections& proj) {
    double sum = 0.0;
    for (const auto& [a, b] : proj.ab) sum += 0.25 * (std::norm(a) + std::norm(b));
    return sum;
}

}  // namespace

void EraserConfig::validate() const {
    auto in_range = [](double angle) { return angle >= -0.5 * pi && angle <= 0.5 * pi; };
    if (!in_range(hwp_angle) || (pol1 && !in_range(*pol1)) || (pol2 && !in_range(*pol2)))
        throw std::invalid_argument("eraser angles must lie in [-pi/2, pi/2]");
    if (std::abs(pair.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("pair state is not normalized");
}

EraserProfile eraser_scan(const EraserConfig& config, const std::vector<double>& delays) {
    config.validate();
    const Projections proj = projections(config);
    const double base = baseline(proj);
    if (!(base > 0.0))
        throw std::invalid_argument("polarizers block all coincidence amplitude");

    EraserProfile profile;
    profile.scan.delays = delays;
    profile.scan.rates.resize(delays.size());
    for (std::size_t k = 0; k < delays.size(); ++k)
        profile.scan.rates[k] = raw_rate(config, proj, delays[k]) / base;
    profile.visibility = 1.0 - raw_rate(config, proj, 0.0) / base;
    return profile;
}

double eraser_rate(const EraserConfig& config, double delay) {
    config.validate();
    const Projections proj = projections(config);
    const double base = baseline(proj);
    if (!(base > 0.0))
        throw std::invalid_argument("polarizers block all coincidence amplitude");
    return raw_rate(config, proj, delay) / base;
}

std::vector<double> eraser_visibility_curve(double hwp_angle, double pol1,
                                            const std::vector<double>& pol2_values,
                                            const PhotonPairState& pair) {
    std::vector<double> out;
    out.reserve(pol2_values.size());
    for (double pol2 : pol2_values) {
        EraserConfig config;
        config.hwp_angle = hwp_angle;
        config.pol1 = pol1;
        config.pol2 = pol2;
        config.pair = pair;
        out.push_back(1.0 - eraser_rate(config, 0.0));
    }
    return out;
}

double eraser_singles_rate(const EraserConfig& config, int detector) {
    config.validate();
    if (detector != 1 && detector != 2)
        throw std::invalid_argument("detector must be 1 or 2");

    const JonesMatrix hwp = half_wave_plate(config.hwp_angle);
    const auto [eax, eay] = hwp.apply(std::cos(config.pair.pol_a), std::sin(config.pair.pol_a));
    const Pol e_a{eax, eay};
    const Pol e_b{std::cos(config.pair.pol_b), std::sin(config.pair.pol_b)};

    // Each photon reaches either detector with probability 1/2; anything in
    // front of the other detector cannot touch this marginal.
    const auto& own_pol = detector == 1 ? config.pol1 : config.pol2;
    double rate = 0.0;
    for (const Pol& mu : analyzer_basis(own_pol))
        rate += 0.5 * (std::norm(dot(mu, e_a)) + std::norm(dot(mu, e_b)));
    return rate;
}

}  // namespace biphoton
