#include "starkhhg/molecule.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "starkhhg/errors.hpp"

namespace starkhhg {

StarkParameters StarkParameters::carbon_monoxide(double orientation_rad) {
  StarkParameters p;
  p.orientation_rad = orientation_rad;
  return p;
}

Eigen::Matrix3d StarkParameters::rotation() const {
  return Eigen::AngleAxisd(orientation_rad, Eigen::Vector3d::UnitY())
      .toRotationMatrix();
}

Eigen::Vector3d StarkParameters::lab_dipole() const {
  return dipole_au * (rotation() * dipole_direction);
}

Eigen::Matrix3d StarkParameters::lab_polarizability() const {
  const Eigen::Matrix3d r = rotation();
  const Eigen::Vector3d diag(alpha_perpendicular_au, alpha_perpendicular_au,
                             alpha_parallel_au);
  return r * diag.asDiagonal() * r.transpose();
}

StarkParameters StarkParameters::flipped() const {
  StarkParameters p = *this;
  p.dipole_direction = -dipole_direction;
  return p;
}

void StarkParameters::validate() const {
  if (!(field_free_energy_au < 0.0)) {
    throw DomainError("field-free orbital energy must be negative");
  }
  if (!(dipole_au >= 0.0)) throw DomainError("dipole magnitude must be >= 0");
  if (!(alpha_parallel_au >= 0.0) || !(alpha_perpendicular_au >= 0.0)) {
    throw DomainError("polarizabilities must be >= 0");
  }
  if (std::abs(dipole_direction.norm() - 1.0) > 1e-12) {
    throw DomainError("dipole direction must be a unit vector");
  }
  if (!std::isfinite(orientation_rad)) {
    throw DomainError("orientation angle must be finite");
  }
}

double stark_energy(const StarkParameters& params,
                    const Eigen::Vector3d& field) {
  if (!field.allFinite()) throw DomainError("stark_energy: non-finite field");
  return params.field_free_energy_au - params.lab_dipole().dot(field) -
         0.5 * field.dot(params.lab_polarizability() * field);
}

double ip_of_field(const StarkParameters& params,
                   const Eigen::Vector3d& field) {
  const double e = stark_energy(params, field);
  if (!(e < 0.0)) {
    throw NumericalError(
        "Stark-shifted level reached the continuum; adiabatic model invalid");
  }
  return -e;
}

}  // namespace starkhhg
