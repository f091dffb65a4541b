#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace starkhhg {

// Linearly polarized driving pulse in atomic units.
//
// The field envelope is cos^2 over the full duration tau = duration_cycles * T,
// F(t) = F0 cos^2(pi (t - tau/2) / tau) sin(omega t + cep) along the
// polarization axis for t in [0, tau] and zero elsewhere. For tau = 2T the
// intensity FWHM is 0.729 T. The flat-top shape (envelope 1 on [0, tau]) is
// the long-pulse limit used for cutoff checks.
enum class Envelope { cos2, flat_top };

struct LaserPulse {
  double peak_field_au = 0.071;
  double omega_au = 0.0569542;
  double duration_cycles = 2.0;
  double cep_rad = 0.0;
  Envelope envelope_shape = Envelope::cos2;
  Eigen::Vector3d polarization = Eigen::Vector3d::UnitZ();

  static LaserPulse from_wavelength(double wavelength_nm, double peak_field_au,
                                    double duration_cycles = 2.0,
                                    double cep_rad = 0.0);

  double period() const;
  double duration() const;
  // Intensity FWHM of the envelope in optical cycles.
  double intensity_fwhm_cycles() const;
  double ponderomotive_energy() const;

  double envelope(double t) const;
  // Signed field component along the polarization axis.
  double field(double t) const;

  // Throws DomainError when the invariants do not hold.
  void validate() const;
};

Eigen::Vector3d field_at(const LaserPulse& pulse, double t);

// A(t) = -int_0^t F dt'' and B(t) = int_0^t A dt'', tabulated by cumulative
// Simpson on panels with midpoints. Off-grid values add a Simpson remainder
// from the nearest lower node, so dA/dt = -F holds to quadrature accuracy
// everywhere.
class VectorPotential {
 public:
  explicit VectorPotential(const LaserPulse& pulse, int min_panels = 1 << 14);

  const LaserPulse& pulse() const { return pulse_; }

  // Component along the polarization axis.
  double along(double t) const;
  Eigen::Vector3d at(double t) const;
  // int_0^t A dt'' along the polarization axis.
  double integral(double t) const;

 private:
  double remainder_a(int node, double t) const;

  LaserPulse pulse_;
  double step_ = 0.0;
  int panels_ = 0;
  std::vector<double> a_nodes_;
  std::vector<double> b_nodes_;
};

// Builds a table on every call; prefer VectorPotential for repeated use.
Eigen::Vector3d vector_potential(const LaserPulse& pulse, double t);

// Gaussian TEM00 focus. Positions are measured along the propagation axis
// relative to the centre of the medium.
struct FocusGeometry {
  double confocal_parameter_cm = 2.0;
  double focus_position_cm = -0.70;
  double peak_intensity_Wcm2 = 3.0e14;

  void validate() const;
};

double beam_waist_cm(const FocusGeometry& focus, double omega_au);
double beam_radius_cm(const FocusGeometry& focus, double z_cm, double omega_au);

// Complex fundamental-field factor relative to the focus (r = 0): amplitude
// w0/w exp(-r^2/w^2), phase k r^2 / (2 R(z)) - arctan(2 dz / b), with the
// exp(i k z) plane-wave part removed. Convention: fields ~ exp(-i omega t).
std::complex<double> gaussian_beam_factor(const FocusGeometry& focus,
                                          double z_cm, double r_cm,
                                          double omega_au);

}  // namespace starkhhg
