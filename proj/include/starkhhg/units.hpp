#pragma once

#include <numbers>

namespace starkhhg::units {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018 values.
inline constexpr double speed_of_light_au = 137.035999084;
inline constexpr double bohr_radius_cm = 0.529177210903e-8;
inline constexpr double bohr_radius_nm = 0.0529177210903;
// Intensity of a linearly polarized field of 1 au amplitude, I = F^2 * I_au.
inline constexpr double atomic_intensity_Wcm2 = 3.50945e16;

double field_from_intensity(double intensity_Wcm2);
double intensity_from_field(double field_au);

// Carrier angular frequency (au) of light with the given vacuum wavelength.
double angular_frequency_from_wavelength(double wavelength_nm);
double optical_period(double angular_frequency_au);

// Wavelength in cm of light with the given angular frequency (au).
double wavelength_cm(double angular_frequency_au);

}  // namespace starkhhg::units
