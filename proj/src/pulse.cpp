#include "starkhhg/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "starkhhg/errors.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg {

using units::pi;

LaserPulse LaserPulse::from_wavelength(double wavelength_nm,
                                       double peak_field_au,
                                       double duration_cycles,
                                       double cep_rad) {
  LaserPulse p;
  p.peak_field_au = peak_field_au;
  p.omega_au = units::angular_frequency_from_wavelength(wavelength_nm);
  p.duration_cycles = duration_cycles;
  p.cep_rad = cep_rad;
  return p;
}

double LaserPulse::period() const { return 2.0 * pi / omega_au; }

double LaserPulse::duration() const { return duration_cycles * period(); }

double LaserPulse::intensity_fwhm_cycles() const {
  if (envelope_shape == Envelope::flat_top) return duration_cycles;
  // cos^4(pi x / tau) = 1/2
  return 2.0 * std::acos(std::pow(0.5, 0.25)) / pi * duration_cycles;
}

double LaserPulse::ponderomotive_energy() const {
  return peak_field_au * peak_field_au / (4.0 * omega_au * omega_au);
}

double LaserPulse::envelope(double t) const {
  const double tau = duration();
  if (!(t >= 0.0 && t <= tau)) return 0.0;
  if (envelope_shape == Envelope::flat_top) return 1.0;
  const double c = std::cos(pi * (t - 0.5 * tau) / tau);
  return c * c;
}

double LaserPulse::field(double t) const {
  if (!std::isfinite(t)) throw DomainError("field_at: non-finite time");
  const double env = envelope(t);
  if (env == 0.0) return 0.0;
  return peak_field_au * env * std::sin(omega_au * t + cep_rad);
}

void LaserPulse::validate() const {
  if (!(peak_field_au >= 0.0) || !std::isfinite(peak_field_au)) {
    throw DomainError("peak field must be finite and non-negative");
  }
  if (!(omega_au > 0.0) || !std::isfinite(omega_au)) {
    throw DomainError("carrier frequency must be positive");
  }
  if (!(duration_cycles > 0.0) || !std::isfinite(duration_cycles)) {
    throw DomainError("pulse duration must be positive");
  }
  if (!std::isfinite(cep_rad)) throw DomainError("CEP must be finite");
  if (std::abs(polarization.norm() - 1.0) > 1e-12) {
    throw DomainError("polarization axis must be a unit vector");
  }
}

Eigen::Vector3d field_at(const LaserPulse& pulse, double t) {
  return pulse.field(t) * pulse.polarization;
}

namespace {

double simpson(double h, double f0, double fm, double f1) {
  return h / 6.0 * (f0 + 4.0 * fm + f1);
}

}  // namespace

VectorPotential::VectorPotential(const LaserPulse& pulse, int min_panels)
    : pulse_(pulse) {
  pulse_.validate();
  panels_ = std::max(min_panels, 16);
  step_ = pulse_.duration() / panels_;
  a_nodes_.assign(panels_ + 1, 0.0);
  b_nodes_.assign(panels_ + 1, 0.0);
  for (int k = 0; k < panels_; ++k) {
    const double t0 = k * step_;
    const double tm = t0 + 0.5 * step_;
    const double t1 = (k + 1 == panels_) ? pulse_.duration() : t0 + step_;
    a_nodes_[k + 1] = a_nodes_[k] - simpson(step_, pulse_.field(t0),
                                            pulse_.field(tm), pulse_.field(t1));
  }
  for (int k = 0; k < panels_; ++k) {
    const double tm = (k + 0.5) * step_;
    b_nodes_[k + 1] = b_nodes_[k] + simpson(step_, a_nodes_[k],
                                            remainder_a(k, tm), a_nodes_[k + 1]);
  }
}

double VectorPotential::remainder_a(int node, double t) const {
  const double t0 = node * step_;
  const double h = t - t0;
  if (h == 0.0) return a_nodes_[node];
  return a_nodes_[node] - simpson(h, pulse_.field(t0),
                                  pulse_.field(t0 + 0.5 * h), pulse_.field(t));
}

double VectorPotential::along(double t) const {
  if (!std::isfinite(t)) throw DomainError("vector_potential: non-finite time");
  if (t <= 0.0) return 0.0;
  if (t >= pulse_.duration()) return a_nodes_.back();
  const int node = std::min(static_cast<int>(t / step_), panels_ - 1);
  return remainder_a(node, t);
}

Eigen::Vector3d VectorPotential::at(double t) const {
  return along(t) * pulse_.polarization;
}

double VectorPotential::integral(double t) const {
  if (!std::isfinite(t)) throw DomainError("vector_potential: non-finite time");
  if (t <= 0.0) return 0.0;
  const double end = pulse_.duration();
  if (t >= end) return b_nodes_.back() + a_nodes_.back() * (t - end);
  const int node = std::min(static_cast<int>(t / step_), panels_ - 1);
  const double t0 = node * step_;
  const double h = t - t0;
  return b_nodes_[node] + simpson(h, a_nodes_[node],
                                  remainder_a(node, t0 + 0.5 * h),
                                  remainder_a(node, t));
}

Eigen::Vector3d vector_potential(const LaserPulse& pulse, double t) {
  return VectorPotential(pulse).at(t);
}

void FocusGeometry::validate() const {
  if (!(confocal_parameter_cm > 0.0) || !std::isfinite(confocal_parameter_cm)) {
    throw DomainError("confocal parameter must be positive");
  }
  if (!std::isfinite(focus_position_cm)) {
    throw DomainError("focus position must be finite");
  }
  if (!(peak_intensity_Wcm2 >= 0.0) || !std::isfinite(peak_intensity_Wcm2)) {
    throw DomainError("peak intensity must be finite and non-negative");
  }
}

double beam_waist_cm(const FocusGeometry& focus, double omega_au) {
  const double lambda = units::wavelength_cm(omega_au);
  return std::sqrt(focus.confocal_parameter_cm * lambda / (2.0 * pi));
}

double beam_radius_cm(const FocusGeometry& focus, double z_cm,
                      double omega_au) {
  const double zr = 0.5 * focus.confocal_parameter_cm;
  const double dz = z_cm - focus.focus_position_cm;
  return beam_waist_cm(focus, omega_au) * std::sqrt(1.0 + (dz / zr) * (dz / zr));
}

std::complex<double> gaussian_beam_factor(const FocusGeometry& focus,
                                          double z_cm, double r_cm,
                                          double omega_au) {
  focus.validate();
  const double zr = 0.5 * focus.confocal_parameter_cm;
  const double dz = z_cm - focus.focus_position_cm;
  const double w0 = beam_waist_cm(focus, omega_au);
  const double ratio2 = 1.0 + (dz / zr) * (dz / zr);
  const double w2 = w0 * w0 * ratio2;
  const double k = 2.0 * pi / units::wavelength_cm(omega_au);
  const double inv_curvature = dz / (dz * dz + zr * zr);
  const double phase = 0.5 * k * r_cm * r_cm * inv_curvature - std::atan(dz / zr);
  const double amplitude = std::exp(-r_cm * r_cm / w2) / std::sqrt(ratio2);
  return std::polar(amplitude, phase);
}

}  // namespace starkhhg
