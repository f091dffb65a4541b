#include "starkhhg/lewenstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "starkhhg/errors.hpp"
#include "starkhhg/kernels.hpp"
#include "starkhhg/starkphase.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg {

using units::pi;

std::string_view to_string(StarkMode m) {
  switch (m) {
    case StarkMode::none: return "none";
    case StarkMode::first_order: return "first_order";
    case StarkMode::first_and_second: return "first_and_second";
  }
  return "unknown";
}

StarkMode stark_mode_from_string(std::string_view s) {
  if (s == "none") return StarkMode::none;
  if (s == "first_order" || s == "first") return StarkMode::first_order;
  if (s == "first_and_second" || s == "second") {
    return StarkMode::first_and_second;
  }
  throw ConfigError("stark_mode", "unknown Stark mode '" + std::string(s) + "'");
}

ModelOrbital ModelOrbital::from(const StarkParameters& params,
                                const LaserPulse& pulse) {
  ModelOrbital orb;
  orb.kappa = std::sqrt(2.0 * params.field_free_ip());
  orb.centre_along_field = -dipole_along_field(params, pulse);
  return orb;
}

std::complex<double> ModelOrbital::momentum_wavefunction(double p) const {
  const double q = 1.0 / (p * p + kappa * kappa);
  return 2.0 * std::sqrt(2.0) * std::pow(kappa, 2.5) / pi * q * q;
}

std::complex<double> ModelOrbital::dipole_element(double p) const {
  const double q = 1.0 / (p * p + kappa * kappa);
  const double c = 8.0 * std::sqrt(2.0) * std::pow(kappa, 2.5) / pi;
  const std::complex<double> centred(0.0, -c * p * q * q * q);
  const std::complex<double> value =
      centred + centre_along_field * momentum_wavefunction(p);
  return std::polar(1.0, -p * centre_along_field) * value;
}

namespace kernels {

DipoleGrid make_dipole_grid(const LaserPulse& pulse,
                            const StarkParameters& params,
                            const LewensteinOptions& options) {
  pulse.validate();
  params.validate();
  if (options.samples_per_cycle < 4096) {
    throw ConfigError("numerics.samples_per_cycle",
                      "Lewenstein dipole needs >= 4096 samples per cycle");
  }
  if (!(options.tau_max_cycles > 0.0) || options.tau_max_cycles > 3.0) {
    throw ConfigError("numerics.tau_max_cycles", "must be in (0, 3]");
  }
  if (!(options.tau_min_cycles >= 0.0) ||
      2.0 * options.tau_min_cycles >= options.tau_max_cycles) {
    throw ConfigError("numerics.tau_min_cycles",
                      "must be >= 0 and below tau_max / 2");
  }
  if (!(options.tau_taper_fraction >= 0.0) ||
      options.tau_taper_fraction >= 1.0) {
    throw ConfigError("numerics.tau_taper_fraction", "must be in [0, 1)");
  }
  if (!(options.epsilon_au > 0.0)) {
    throw ConfigError("numerics.epsilon_au", "must be positive");
  }

  DipoleGrid g;
  const int spc = options.samples_per_cycle;
  const double period = pulse.period();
  g.dt = period / spc;
  const double span_cycles =
      options.span_cycles > 0.0
          ? options.span_cycles
          : std::ceil(pulse.duration_cycles + options.tau_max_cycles - 1e-9);
  g.samples = static_cast<int>(std::lround(span_cycles * spc));
  g.tau_last = std::min(static_cast<int>(std::lround(options.tau_max_cycles * spc)),
                        g.samples - 1);
  const int tau_min = static_cast<int>(std::lround(options.tau_min_cycles * spc));
  g.tau_first = std::max(tau_min, 1);
  g.ip = params.field_free_ip();
  g.mu = dipole_along_field(params, pulse);
  g.alpha = polarizability_along_field(params, pulse);
  g.epsilon = options.epsilon_au;
  g.symmetric = options.symmetric_ionization;
  g.orbital = ModelOrbital::from(params, pulse);
  if (g.symmetric) g.orbital.centre_along_field = 0.0;

  const VectorPotential vp(pulse);
  const int n = g.samples;
  g.field.resize(n);
  g.potential.resize(n);
  g.int_potential.assign(n, 0.0);
  g.int_potential2.assign(n, 0.0);
  g.int_field2.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double t = i * g.dt;
    g.field[i] = pulse.field(t);
    g.potential[i] = vp.along(t);
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double tm = (i + 0.5) * g.dt;
    const double am = vp.along(tm);
    const double fm = pulse.field(tm);
    const double a0 = g.potential[i], a1 = g.potential[i + 1];
    const double f0 = g.field[i], f1 = g.field[i + 1];
    const double h6 = g.dt / 6.0;
    g.int_potential[i + 1] = g.int_potential[i] + h6 * (a0 + 4.0 * am + a1);
    g.int_potential2[i + 1] =
        g.int_potential2[i] + h6 * (a0 * a0 + 4.0 * am * am + a1 * a1);
    g.int_field2[i + 1] =
        g.int_field2[i] + h6 * (f0 * f0 + 4.0 * fm * fm + f1 * f1);
  }

  g.tau_weight.assign(g.tau_last + 1, 0.0);
  const int taper_start = static_cast<int>(
      std::lround((1.0 - options.tau_taper_fraction) * g.tau_last));
  for (int k = g.tau_first; k <= g.tau_last; ++k) {
    double w = g.dt;
    if (tau_min > 0 && k < 2 * tau_min) {
      const double s = std::sin(0.5 * pi * (k - tau_min) / tau_min);
      w *= s * s;
    }
    if (k > taper_start && g.tau_last > taper_start) {
      const double c =
          std::cos(0.5 * pi * (k - taper_start) / (g.tau_last - taper_start));
      w *= c * c;
    }
    g.tau_weight[k] = w;
  }
  return g;
}

}  // namespace kernels

std::vector<DipoleSignal> dipole_time_series(const LaserPulse& pulse,
                                             const StarkParameters& params,
                                             std::span<const StarkMode> modes,
                                             const LewensteinOptions& options,
                                             Execution exec) {
  const kernels::DipoleGrid grid = kernels::make_dipole_grid(pulse, params, options);
  auto raw = kernels::dipole_kernel(grid, modes, exec);
  std::vector<DipoleSignal> out(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out[i].dt = grid.dt;
    out[i].mode = modes[i];
    out[i].samples = std::move(raw[i]);
  }
  return out;
}

DipoleSignal dipole_time_series(const LaserPulse& pulse,
                                const StarkParameters& params, StarkMode mode,
                                const LewensteinOptions& options,
                                Execution exec) {
  const StarkMode modes[] = {mode};
  return std::move(dipole_time_series(pulse, params, modes, options, exec)[0]);
}

}  // namespace starkhhg
