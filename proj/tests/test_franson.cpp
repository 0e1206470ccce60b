#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "biphoton/constants.hpp"
#include "biphoton/franson.hpp"
#include "oracles.hpp"

using namespace biphoton;

namespace {
FransonConfig base_config(double visibility = 1.0, bool entangled = true) {
    FransonConfig config;
    config.path_imbalance = 0.63;
    config.coherence_length = 50e-6;
    config.coincidence_window = 1e-9;
    config.visibility = visibility;
    config.entangled = entangled;
    return config;
}
}  // namespace

TEST_CASE("franson coincidence rates") {
    SUBCASE("like-port null at zero phase sum, full visibility") {
        FransonConfig config = base_config();
        config.phi1 = 0.4;
        config.phi2 = -0.4;
        const EventClassRates rates = franson_coincidence(config, PortPattern::like);
        CHECK(std::abs(rates.p_postselected_coincidence) < 1e-15);
    }

    SUBCASE("path classes are flat quarters (brute-force enumeration)") {
        FransonConfig config = base_config(0.7);
        config.phi1 = 1.1;
        config.phi2 = 0.3;
        const EventClassRates rates = franson_coincidence(config);
        const double oracle = oracles::franson_class_probability();
        CHECK(rates.p_ss == doctest::Approx(oracle).epsilon(1e-15));
        CHECK(rates.p_ll == doctest::Approx(oracle).epsilon(1e-15));
        CHECK(rates.p_sl == doctest::Approx(oracle).epsilon(1e-15));
        CHECK(rates.p_ls == doctest::Approx(oracle).epsilon(1e-15));
        CHECK(rates.p_ss + rates.p_ll + rates.p_sl + rates.p_ls ==
              doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("closed form on a 20x20 grid, like and unlike") {
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                FransonConfig config = base_config(0.93);
                config.phi1 = -pi + 2.0 * pi * i / 19.0;
                config.phi2 = -pi + 2.0 * pi * j / 19.0;
                const double expected_like =
                    0.25 * (1.0 - 0.93 * std::cos(config.phi1 + config.phi2));
                const double like =
                    franson_coincidence(config, PortPattern::like).p_postselected_coincidence;
                const double unlike =
                    franson_coincidence(config, PortPattern::unlike).p_postselected_coincidence;
                CHECK(std::abs(like - expected_like) < 1e-12);
                CHECK(std::abs(like + unlike - 0.5) < 1e-12);
            }
        }
    }

    SUBCASE("rate depends only on the phase sum") {
        FransonConfig config = base_config(0.8);
        config.phi1 = 0.7;
        config.phi2 = 0.5;
        const double reference =
            franson_coincidence(config).p_postselected_coincidence;
        for (int k = -5; k <= 5; ++k) {
            FransonConfig shifted = config;
            shifted.phi1 = config.phi1 + 0.37 * k;
            shifted.phi2 = config.phi2 - 0.37 * k;
            CHECK(std::abs(franson_coincidence(shifted).p_postselected_coincidence -
                           reference) < 1e-12);
        }
    }

    SUBCASE("separable source: phase-independent post-selected rate") {
        double reference = -1.0;
        for (int k = 0; k < 25; ++k) {
            FransonConfig config = base_config(1.0, false);
            config.phi1 = 0.23 * k;
            config.phi2 = -0.61 * k;
            const double rate = franson_coincidence(config).p_postselected_coincidence;
            if (reference < 0.0) reference = rate;
            CHECK(std::abs(rate - reference) < 1e-12);
        }
    }

    SUBCASE("config invariants enforced") {
        FransonConfig bad = base_config();
        bad.coherence_length = 0.01;  // imbalance / coherence < 100
        CHECK_THROWS_AS(franson_coincidence(bad), std::invalid_argument);
        FransonConfig wide = base_config();
        wide.coincidence_window = 1.0;  // cannot reject short-long events
        CHECK_THROWS_AS(franson_coincidence(wide), std::invalid_argument);
    }
}

TEST_CASE("chsh") {
    const double a = deg_to_rad(45), ap = deg_to_rad(135);
    const double b = deg_to_rad(0), bp = deg_to_rad(-90);

    SUBCASE("perfect visibility saturates the Tsirelson bound") {
        const ChshResult result = chsh_s(1.0, a, ap, b, bp);
        CHECK(result.s_value == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-9));
        CHECK(result.violated);
        CHECK(result.subtracted_term == 2);  // the (a', b) term carries the minus
    }

    SUBCASE("V = 0.93 reproduces S = -2.63") {
        CHECK(chsh_s(0.93, a, ap, b, bp).s_value == doctest::Approx(-2.63).epsilon(0.004));
    }

    SUBCASE("the 70.7% visibility boundary sits exactly at |S| = 2") {
        const ChshResult result = chsh_s(1.0 / std::sqrt(2.0), a, ap, b, bp);
        CHECK(std::abs(std::abs(result.s_value) - 2.0) < 1e-9);
    }

    SUBCASE("|S| increases monotonically with visibility") {
        double prev = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double v = k / 20.0;
            const double s = std::abs(chsh_s(v, a, ap, b, bp).s_value);
            CHECK(s > prev);
            prev = s;
            if (v < 1.0 / std::sqrt(2.0)) CHECK(s < 2.0);
            if (v > 1.0 / std::sqrt(2.0) + 1e-9) CHECK(s > 2.0);
        }
    }

    SUBCASE("correlations are bounded by the visibility") {
        const ChshResult result = chsh_s(0.8, a, ap, b, bp);
        for (double e : result.correlations) CHECK(std::abs(e) <= 0.8 + 1e-12);
        CHECK(std::abs(result.s_value) <= 2.0 * std::sqrt(2.0) * 0.8 + 1e-9);
    }

    SUBCASE("degenerate settings are reported, not guessed") {
        // all four phase sums share one cosine sign
        CHECK_THROWS_AS(chsh_s(1.0, 0.0, 0.1, 0.0, 0.1), std::domain_error);
    }

    SUBCASE("factorized local model never violates |S| <= 2") {
        std::mt19937_64 rng(20260808);
        std::uniform_real_distribution<double> angle(-pi, pi);
        auto f = [](double x) { return std::cos(x); };
        for (int trial = 0; trial < 1000; ++trial) {
            const double worst = oracles::chsh_max_local(f, f, angle(rng), angle(rng),
                                                         angle(rng), angle(rng));
            CHECK(worst <= 2.0 + 1e-9);
        }
    }

    SUBCASE("separable franson correlations satisfy every CHSH combination") {
        FransonConfig config = base_config(1.0, false);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> angle(-pi, pi);
        for (int trial = 0; trial < 200; ++trial) {
            const double sa = angle(rng), sap = angle(rng), sb = angle(rng),
                         sbp = angle(rng);
            const double e[4] = {franson_correlation(config, sa, sb),
                                 franson_correlation(config, sa, sbp),
                                 franson_correlation(config, sap, sb),
                                 franson_correlation(config, sap, sbp)};
            for (int flip = 0; flip < 4; ++flip) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += (k == flip ? -1.0 : 1.0) * e[k];
                CHECK(std::abs(s) <= 2.0 + 1e-9);
            }
        }
    }
}
