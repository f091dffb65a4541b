#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "starkhhg/execution.hpp"
#include "starkhhg/molecule.hpp"
#include "starkhhg/pulse.hpp"

namespace starkhhg {

enum class StarkMode { none, first_order, first_and_second };

std::string_view to_string(StarkMode m);
StarkMode stark_mode_from_string(std::string_view s);

struct LewensteinOptions {
  int samples_per_cycle = 4096;
  double tau_max_cycles = 1.0;
  // Excursions shorter than tau_min are dropped and [tau_min, 2 tau_min] is
  // ramped in with sin^2; the eps-regularized prefactor is not grid-converged
  // at tau -> 0.
  double tau_min_cycles = 0.05;
  double tau_taper_fraction = 0.1;
  double epsilon_au = 1e-4;
  // 0 selects ceil(pulse duration + tau_max) cycles.
  double span_cycles = 0.0;
  // Test knob: orientation-independent ionization amplitude (no dipole
  // origin term, no Stark shift of the tunnelling step).
  bool symmetric_ionization = false;
};

// Single-centre hydrogenic 1s orbital, kappa = sqrt(2 Ip), whose centre sits
// at R = -mu (electron charge -1), so its dipole expectation is mu. Only the
// component along the field enters the 1D dipole.
struct ModelOrbital {
  double kappa = 0.0;
  double centre_along_field = 0.0;

  static ModelOrbital from(const StarkParameters& params,
                           const LaserPulse& pulse);

  std::complex<double> momentum_wavefunction(double p) const;
  // <p| z |psi_R> along the field, including the translation phase.
  std::complex<double> dipole_element(double p) const;
};

struct DipoleSignal {
  double dt = 0.0;
  std::vector<std::complex<double>> samples;  // d(t_n), t_n = n dt
  StarkMode mode = StarkMode::none;

  double time(std::size_t n) const { return static_cast<double>(n) * dt; }
  double span() const { return dt * static_cast<double>(samples.size()); }
};

// Emission part of the Lewenstein dipole along the polarization axis,
//   d(t) = i int dtau (pi / (eps + i tau/2))^{3/2} d*(p_s + A(t)) F(t - tau)
//          d(p_s + A(t - tau)) exp(-i S(p_s, t, t - tau)),
// S = int [v^2/2 - E(F)] with the Stark orders of E selected by `mode`.
// The physical dipole is 2 Re d(t).
DipoleSignal dipole_time_series(const LaserPulse& pulse,
                                const StarkParameters& params, StarkMode mode,
                                const LewensteinOptions& options = {},
                                Execution exec = Execution::parallel);

// Several Stark modes from one pass over (t, tau).
std::vector<DipoleSignal> dipole_time_series(
    const LaserPulse& pulse, const StarkParameters& params,
    std::span<const StarkMode> modes, const LewensteinOptions& options = {},
    Execution exec = Execution::parallel);

}  // namespace starkhhg
