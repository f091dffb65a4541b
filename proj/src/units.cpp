#include "starkhhg/units.hpp"

#include <cmath>

#include "starkhhg/errors.hpp"

namespace starkhhg::units {

double field_from_intensity(double intensity_Wcm2) {
  if (!std::isfinite(intensity_Wcm2) || intensity_Wcm2 < 0.0) {
    throw DomainError("intensity must be finite and non-negative");
  }
  return std::sqrt(intensity_Wcm2 / atomic_intensity_Wcm2);
}

double intensity_from_field(double field_au) {
  if (!std::isfinite(field_au) || field_au < 0.0) {
    throw DomainError("field amplitude must be finite and non-negative");
  }
  return field_au * field_au * atomic_intensity_Wcm2;
}

double angular_frequency_from_wavelength(double wavelength_nm) {
  if (!std::isfinite(wavelength_nm) || wavelength_nm <= 0.0) {
    throw DomainError("wavelength must be positive");
  }
  return 2.0 * pi * speed_of_light_au / (wavelength_nm / bohr_radius_nm);
}

double optical_period(double angular_frequency_au) {
  return 2.0 * pi / angular_frequency_au;
}

double wavelength_cm(double angular_frequency_au) {
  return 2.0 * pi * speed_of_light_au / angular_frequency_au * bohr_radius_cm;
}

}  // namespace starkhhg::units
