#pragma once

namespace biphoton {

inline constexpr double speed_of_light = 299792458.0;  // m/s, exact
inline constexpr double pi = 3.141592653589793238462643383279502884;

inline constexpr const char* version_string = "biphoton 0.1.0";

// Vacuum wavelength <-> angular frequency.
inline constexpr double omega_from_wavelength(double lambda) {
    return 2.0 * pi * speed_of_light / lambda;
}

inline constexpr double wavelength_from_omega(double omega) {
    return 2.0 * pi * speed_of_light / omega;
}

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace biphoton
