#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "biphoton/constants.hpp"
#include "biphoton/multilayer.hpp"
#include "oracles.hpp"

using namespace biphoton;

namespace {
// Paper-anchored mirror: (HL)^5 H quarter-wave stack designed at 692 nm.
LayerStack design_stack() { return quarter_wave_stack(692e-9, 2.22, 1.41, 5); }
}  // namespace

TEST_CASE("quarter-wave stack geometry") {
    SUBCASE("design wavelength solved from the total thickness") {
        const double l0 = quarter_wave_design_wavelength(1.1e-6, 2.22, 1.41, 5);
        CHECK(l0 == doctest::Approx(704.135e-9).epsilon(1e-4));
        const LayerStack stack = quarter_wave_stack(l0, 2.22, 1.41, 5);
        CHECK(stack.layers.size() == 11);
        CHECK(stack.layers[0].thickness == doctest::Approx(l0 / (4 * 2.22)).epsilon(1e-12));
        CHECK(stack.layers[0].thickness == doctest::Approx(79.3e-9).epsilon(1e-3));
        CHECK(stack.layers[1].thickness == doctest::Approx(124.8e-9).epsilon(1e-3));
        CHECK(stack.total_thickness() == doctest::Approx(1.1e-6).epsilon(1e-9));
        CHECK(stack.total_thickness() / speed_of_light ==
              doctest::Approx(3.67e-15).epsilon(1e-3));
    }

    SUBCASE("one period gives H L H") {
        const LayerStack stack = quarter_wave_stack(700e-9, 2.0, 1.5, 1);
        REQUIRE(stack.layers.size() == 3);
        CHECK(stack.layers[0].n.real() == 2.0);
        CHECK(stack.layers[1].n.real() == 1.5);
        CHECK(stack.layers[2].n.real() == 2.0);
    }
}

TEST_CASE("stack response basics") {
    SUBCASE("index-matched single layer is pure propagation") {
        LayerStack slab;
        slab.layers.push_back({1.0, 2e-6});
        const StackResponse resp = stack_response(slab, 702e-9, 0.0, Polarization::p);
        CHECK(resp.transmission == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(resp.r) < 1e-12);
        const double expected_phase = 2.0 * pi / 702e-9 * 2e-6;
        CHECK(std::arg(resp.t) ==
              doctest::Approx(std::remainder(expected_phase, 2.0 * pi)).epsilon(1e-9));
    }

    SUBCASE("bare interface reproduces the Fresnel coefficients") {
        LayerStack interface;
        interface.ambient_out = 1.52;
        const double theta = deg_to_rad(35.0);
        const StackResponse s = stack_response(interface, 600e-9, theta, Polarization::s);
        const StackResponse p = stack_response(interface, 600e-9, theta, Polarization::p);
        CHECK(s.transmission ==
              doctest::Approx(oracles::fresnel_ts_power(1.0, 1.52, theta)).epsilon(1e-12));
        CHECK(p.transmission ==
              doctest::Approx(oracles::fresnel_tp_power(1.0, 1.52, theta)).epsilon(1e-12));
        CHECK(s.reflectance ==
              doctest::Approx(oracles::fresnel_rs_power(1.0, 1.52, theta)).epsilon(1e-12));
        CHECK(p.reflectance ==
              doctest::Approx(oracles::fresnel_rp_power(1.0, 1.52, theta)).epsilon(1e-12));
    }

    SUBCASE("design stack transmission anchors") {
        const LayerStack stack = design_stack();
        // stop-band floor of about 1% at the design wavelength
        const StackResponse mid = stack_response(stack, 692e-9, 0.0, Polarization::p);
        CHECK(mid.transmission > 0.005);
        CHECK(mid.transmission < 0.015);
        // near the band edge at 55 degrees the stack opens up past 40%
        const StackResponse tilted =
            stack_response(stack, 702e-9, deg_to_rad(55.0), Polarization::p);
        CHECK(tilted.transmission > 0.40);
    }

    SUBCASE("unitarity for the lossless equal-ambient stack") {
        const LayerStack stack = design_stack();
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 5; ++j) {
                const double lam = (500.0 + 45.0 * i) * 1e-9;
                const double ang = deg_to_rad(8.0 * j);
                for (Polarization pol : {Polarization::s, Polarization::p}) {
                    const StackResponse resp = stack_response(stack, lam, ang, pol);
                    CHECK(std::abs(resp.transmission + resp.reflectance - 1.0) < 1e-10);
                }
            }
    }

    SUBCASE("reciprocity: reversed layer order, same transmission amplitude") {
        LayerStack asym;
        asym.layers.push_back({2.22, 80e-9});
        asym.layers.push_back({1.41, 120e-9});
        asym.layers.push_back({1.9, 200e-9});
        const StackResponse fwd = stack_response(asym, 650e-9, deg_to_rad(20), Polarization::s);
        const StackResponse rev =
            stack_response(asym.reversed(), 650e-9, deg_to_rad(20), Polarization::s);
        CHECK(std::abs(fwd.t - rev.t) < 1e-10);
    }

    SUBCASE("total internal reflection at the output is rejected") {
        LayerStack stack;
        stack.ambient_in = 1.5;
        stack.ambient_out = 1.0;
        stack.layers.push_back({1.41, 100e-9});
        CHECK_THROWS_AS(stack_response(stack, 700e-9, deg_to_rad(60), Polarization::s),
                        std::invalid_argument);
    }
}

TEST_CASE("bloch dispersion") {
    const BlochCell cell{2.22, 692e-9 / (4 * 2.22), 1.41, 692e-9 / (4 * 1.41)};

    SUBCASE("real wavevector outside the gap, evanescent inside") {
        CHECK(bloch_wavevector(cell, 500e-9, 0, Polarization::p).imag() == 0.0);
        CHECK(bloch_wavevector(cell, 900e-9, 0, Polarization::p).imag() == 0.0);
        const std::complex<double> mid = bloch_wavevector(cell, 692e-9, 0, Polarization::p);
        CHECK(mid.imag() > 0.0);
        CHECK(mid.real() == doctest::Approx(pi / cell.period()).epsilon(1e-12));
    }

    SUBCASE("gap edges near 600 and 800 nm") {
        const auto [lo, hi] = band_gap_edges(cell, 0, Polarization::p, 692e-9);
        CHECK(lo == doctest::Approx(605.3e-9).epsilon(1e-3));
        CHECK(hi == doctest::Approx(807.7e-9).epsilon(1e-3));
    }

    SUBCASE("decay constant peaks at the gap center") {
        // scan kappa(omega) and verify the interior maximum sits at the
        // design frequency, where the derivative vanishes
        const double w0 = omega_from_wavelength(692e-9);
        double best_w = 0.0, best_kappa = -1.0;
        for (int k = -200; k <= 200; ++k) {
            const double w = w0 * (1.0 + 1e-4 * k);
            const double kappa =
                bloch_wavevector(cell, wavelength_from_omega(w), 0, Polarization::p).imag();
            if (kappa > best_kappa) {
                best_kappa = kappa;
                best_w = w;
            }
        }
        CHECK(std::abs(best_w - w0) / w0 < 2e-4);
    }

    SUBCASE("degenerate cell reduces to the homogeneous medium") {
        const BlochCell uniform{1.7, 40e-9, 1.7, 60e-9};
        const double lam = 900e-9;  // K Lambda < pi, first zone
        const std::complex<double> k = bloch_wavevector(uniform, lam, 0, Polarization::s);
        CHECK(k.imag() == 0.0);
        CHECK(k.real() ==
              doctest::Approx(1.7 * omega_from_wavelength(lam) / speed_of_light).epsilon(1e-10));
    }
}

TEST_CASE("tunneling times") {
    const LayerStack stack = design_stack();
    const double d_over_c = stack.total_thickness() / speed_of_light;

    SUBCASE("midgap group delay is superluminal, near 1.7 fs") {
        const TunnelingTimes tt = tunneling_times(stack, 692e-9, 0, Polarization::p);
        CHECK(tt.group_delay > 1.3e-15);
        CHECK(tt.group_delay < 2.1e-15);
        CHECK(tt.group_delay < d_over_c);
        CHECK(tt.d_over_c == doctest::Approx(d_over_c).epsilon(1e-12));
    }

    SUBCASE("semiclassical time vanishes at the gap center") {
        const TunnelingTimes tt = tunneling_times(stack, 692e-9, 0, Polarization::p);
        CHECK(std::abs(tt.semiclassical) < 0.2e-15);
    }

    SUBCASE("larmor combines its components and tracks the group delay") {
        const TunnelingTimes tt = tunneling_times(stack, 692e-9, 0, Polarization::p);
        CHECK(tt.larmor ==
              doctest::Approx(std::hypot(tt.larmor_y, tt.larmor_z)).epsilon(1e-12));
        CHECK(std::abs(tt.larmor / tt.group_delay - 1.0) < 0.15);
        const TunnelingTimes far = tunneling_times(stack, 550e-9, 0, Polarization::p);
        CHECK(std::abs(far.larmor / far.group_delay - 1.0) < 0.15);
    }

    SUBCASE("angle scan crosses the fixed d/c level exactly once by 55 degrees") {
        int crossings = 0;
        double prev = 0.0;
        for (int k = 0; k <= 110; ++k) {
            const double angle = deg_to_rad(0.5 * k);
            const TunnelingTimes tt = tunneling_times(stack, 702e-9, angle, Polarization::p);
            const double diff = tt.group_delay - d_over_c;
            if (k > 0 && prev * diff < 0.0) ++crossings;
            prev = diff;
        }
        CHECK(crossings == 1);
        CHECK(tunneling_times(stack, 702e-9, 0, Polarization::p).group_delay < d_over_c);
        CHECK(tunneling_times(stack, 702e-9, deg_to_rad(55), Polarization::p).group_delay >
              d_over_c);
    }

    SUBCASE("tilted reference is d / (c cos theta)") {
        const TunnelingTimes tt = tunneling_times(stack, 702e-9, deg_to_rad(40), Polarization::p);
        CHECK(tt.d_over_c ==
              doctest::Approx(d_over_c / std::cos(deg_to_rad(40))).epsilon(1e-12));
    }

    SUBCASE("Bragg shift: transmission minimum moves blue with angle") {
        double prev_min = 1e9;
        for (int a = 0; a <= 55; a += 5) {
            double t_min = 1e9, lambda_min = 0.0;
            for (double lam = 520e-9; lam <= 820e-9; lam += 0.5e-9) {
                const double T =
                    stack_response(stack, lam, deg_to_rad(a), Polarization::p).transmission;
                if (T < t_min) {
                    t_min = T;
                    lambda_min = lam;
                }
            }
            if (a > 0) CHECK(lambda_min < prev_min);
            prev_min = lambda_min;
        }
    }

    SUBCASE("s-polarized stop band is wider than p at oblique incidence") {
        const BlochCell cell{2.22, 692e-9 / (4 * 2.22), 1.41, 692e-9 / (4 * 1.41)};
        const auto [ps, pe] = band_gap_edges(cell, deg_to_rad(30), Polarization::p, 630e-9);
        const auto [ss, se] = band_gap_edges(cell, deg_to_rad(30), Polarization::s, 630e-9);
        CHECK(se - ss > pe - ps);
    }

    SUBCASE("derivative hygiene: halving the step barely moves the answers") {
        for (double lam : {692e-9, 650e-9, 750e-9}) {
            const TunnelingTimes full = tunneling_times(stack, lam, 0, Polarization::p, 1e-6);
            const TunnelingTimes half = tunneling_times(stack, lam, 0, Polarization::p, 5e-7);
            CHECK(std::abs(full.group_delay / half.group_delay - 1.0) < 1e-4);
            CHECK(std::abs(full.larmor / half.larmor - 1.0) < 1e-4);
        }
    }
}
