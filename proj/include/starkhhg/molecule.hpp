#pragma once

#include <Eigen/Core>

namespace starkhhg {

// Stark parameters of the HOMO, given in the molecular frame.
//
// Frames: the laser polarization is lab z; the molecule is rotated by
// orientation_rad about lab y, so with orientation 0 the molecular axis
// (molecular z) coincides with lab z.
struct StarkParameters {
  double field_free_energy_au = -0.5150;
  double dipole_au = 1.1;
  // Unit vector, molecular frame. For CO it points from C to O.
  Eigen::Vector3d dipole_direction = Eigen::Vector3d::UnitZ();
  double alpha_parallel_au = 3.2;
  double alpha_perpendicular_au = 2.8;
  double orientation_rad = 0.0;

  static StarkParameters carbon_monoxide(double orientation_rad = 0.0);

  double field_free_ip() const { return -field_free_energy_au; }

  Eigen::Matrix3d rotation() const;
  Eigen::Vector3d lab_dipole() const;
  Eigen::Matrix3d lab_polarizability() const;

  // Same molecule turned head-to-tail (mu -> -mu).
  StarkParameters flipped() const;

  void validate() const;
};

// E(F) = E0 - mu.F - 1/2 F^T alpha F with mu and alpha in the lab frame.
double stark_energy(const StarkParameters& params, const Eigen::Vector3d& field);

// |E(F)|. Throws NumericalError when E(F) >= 0: the adiabatic bound-state
// picture has broken down.
double ip_of_field(const StarkParameters& params, const Eigen::Vector3d& field);

}  // namespace starkhhg
