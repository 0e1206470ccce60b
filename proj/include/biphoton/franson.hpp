#pragma once

#include <array>
#include <utility>

namespace biphoton {

// Twin unbalanced interferometers fed by the energy-anticorrelated pair.
// The imbalance must dwarf the single-photon coherence length (no
// first-order fringes) and the coincidence window must resolve the
// short-long arrival offsets so those classes can be rejected.
struct FransonConfig {
    double path_imbalance = 0.63;       // m, identical in both interferometers
    double phi1 = 0.0;                  // rad
    double phi2 = 0.0;                  // rad
    double visibility = 1.0;            // all imperfections folded into one scalar
    double coincidence_window = 1e-9;   // s
    double coherence_length = 50e-6;    // m
    bool entangled = true;

    void validate() const;
};

enum class PortPattern { like, unlike };

struct EventClassRates {
    double p_ss, p_ll, p_sl, p_ls;        // path-class probabilities, sum to 1
    double p_postselected_coincidence;    // window-selected rate for the pattern
    PortPattern port_pattern;
};

// Feynman two-amplitude sum over the indistinguishable short-short and
// long-long processes; the short-long and long-short classes are excluded
// by the coincidence window. Port labels on interferometer 2 follow the
// convention that like-port coincidences vanish at phi1 + phi2 = 0, i.e.
// the post-selected like-port rate is (1/4)[1 - V cos(phi1 + phi2)].
EventClassRates franson_coincidence(const FransonConfig& config,
                                    PortPattern pattern = PortPattern::like);

// Correlation E(phi1, phi2) = [P(like) - P(unlike)] / [P(like) + P(unlike)].
// Entangled: -V cos(phi1 + phi2). Separable: the factorized local model,
// whose first-order fringe visibility is killed by the imbalance.
double franson_correlation(const FransonConfig& config, double phi1, double phi2);

struct ChshResult {
    std::array<std::pair<double, double>, 4> settings;  // (phi1, phi2) per term
    std::array<double, 4> correlations;
    int subtracted_term;  // index of the term entering S with a minus sign
    double s_value;
    bool violated;  // |S| > 2
};

// CHSH combination at settings (a,b), (a,b'), (a',b), (a',b'). The canonical
// form allows the minus sign on any one term; it lands deterministically on
// the term whose phase-sum cosine has the opposite sign to the other three.
// Degenerate settings without such a term throw std::domain_error.
ChshResult chsh_s(double visibility, double a, double a_prime, double b,
                  double b_prime);

}  // namespace biphoton
