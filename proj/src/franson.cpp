#include "biphoton/franson.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "biphoton/constants.hpp"
#include "biphoton/elements.hpp"

namespace biphoton {

void FransonConfig::validate() const {
    if (!(path_imbalance > 0.0 && coherence_length > 0.0))
        throw std::invalid_argument("franson: lengths must be positive");
    if (!(path_imbalance / coherence_length > 100.0))
        throw std::invalid_argument(
            "franson: path imbalance must exceed 100 coherence lengths");
    if (!(coincidence_window > 0.0 &&
          coincidence_window < path_imbalance / speed_of_light))
        throw std::invalid_argument(
            "franson: coincidence window must resolve the path imbalance");
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw std::invalid_argument("franson: visibility must be in [0, 1]");
}

namespace {

// Residual first-order fringe visibility of one unbalanced interferometer;
// the config invariant drives this to zero.
double fringe_envelope(const FransonConfig& config) {
    const double x = config.path_imbalance / config.coherence_length;
    return std::exp(-0.5 * x * x);
}

double postselected_rate(const FransonConfig& config, PortPattern pattern,
                         double phi1, double phi2) {
    if (config.entangled) {
        const auto [t, r] = beamsplitter_amplitudes();
        const std::complex<double> iu(0.0, 1.0);
        // Per-photon amplitudes into the monitored ports. Interferometer 2's
        // like-port is the cross port, fixing the spec sign convention.
        const std::complex<double> short2 =
            pattern == PortPattern::like ? t * r : t * t;
        const std::complex<double> long2 =
            (pattern == PortPattern::like ? r * t : r * r) * std::exp(iu * phi2);
        const std::complex<double> a_ss = (t * t) * short2;
        const std::complex<double> a_ll = (r * r) * std::exp(iu * phi1) * long2;
        // Visibility scales only the interference cross term. Two port
        // patterns per class (both "+" and both "-") double the rate.
        const double one_pattern =
            std::norm(a_ss) + std::norm(a_ll) +
            2.0 * config.visibility * (a_ss * std::conj(a_ll)).real();
        return 2.0 * one_pattern;
    }
    // Factorized local model: independent port choices with first-order
    // fringes suppressed by the imbalance.
    const double v1 = fringe_envelope(config);
    const double q1 = 0.5 * (1.0 - v1 * std::cos(phi1));
    const double q2 = 0.5 * (1.0 - v1 * std::cos(phi2));
    const double same = q1 * q2 + (1.0 - q1) * (1.0 - q2);
    const double picked = pattern == PortPattern::like ? same : 1.0 - same;
    return 0.5 * picked;  // the surviving short-short + long-long half
}

}  // namespace

EventClassRates franson_coincidence(const FransonConfig& config, PortPattern pattern) {
    config.validate();

    EventClassRates rates;
    // Each photon takes short or long with amplitude 1/sqrt(2); the four
    // path classes are equally likely before any port interference.
    rates.p_ss = rates.p_ll = rates.p_sl = rates.p_ls = 0.25;
    rates.port_pattern = pattern;
    rates.p_postselected_coincidence =
        postselected_rate(config, pattern, config.phi1, config.phi2);
    return rates;
}

double franson_correlation(const FransonConfig& config, double phi1, double phi2) {
    const double like = postselected_rate(config, PortPattern::like, phi1, phi2);
    const double unlike = postselected_rate(config, PortPattern::unlike, phi1, phi2);
    return (like - unlike) / (like + unlike);
}

ChshResult chsh_s(double visibility, double a, double a_prime, double b,
                  double b_prime) {
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw std::invalid_argument("chsh: visibility must be in [0, 1]");

    ChshResult result;
    result.settings = {{{a, b}, {a, b_prime}, {a_prime, b}, {a_prime, b_prime}}};

    int positive = 0, negative = 0, candidate = -1;
    for (int k = 0; k < 4; ++k) {
        const auto [p1, p2] = result.settings[k];
        const double cosine = std::cos(p1 + p2);
        result.correlations[k] = -visibility * cosine;
        if (cosine > 1e-12)
            ++positive;
        else if (cosine < -1e-12)
            ++negative;
    }
    for (int k = 0; k < 4; ++k) {
        const auto [p1, p2] = result.settings[k];
        const double cosine = std::cos(p1 + p2);
        const bool lone_negative = negative == 1 && positive == 3 && cosine < -1e-12;
        const bool lone_positive = positive == 1 && negative == 3 && cosine > 1e-12;
        if (lone_negative || lone_positive) candidate = k;
    }
    if (candidate < 0)
        throw std::domain_error("chsh: no sign-consistent combination at these settings");

    result.subtracted_term = candidate;
    result.s_value = 0.0;
    for (int k = 0; k < 4; ++k)
        result.s_value += (k == candidate ? -1.0 : 1.0) * result.correlations[k];
    result.violated = std::abs(result.s_value) > 2.0;
    return result;
}

}  // namespace biphoton
