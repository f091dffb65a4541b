#include <cmath>

#include "starkhhg/kernels.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg::kernels {

namespace {

struct Accumulate {
  bool none = false;
  bool first = false;
  bool second = false;
};

// One output sample: the tau sum for fixed t_n in ascending tau order.
void sweep_sample(const DipoleGrid& g,
                  const std::vector<std::complex<double>>& prefactor,
                  std::span<const StarkMode> modes, int n,
                  std::vector<std::vector<std::complex<double>>>& out) {
  const double kappa2 = g.orbital.kappa * g.orbital.kappa;
  const double c_dip = 8.0 * std::sqrt(2.0) * std::pow(g.orbital.kappa, 2.5) /
                       units::pi;
  const double c_wf = c_dip / 4.0;
  const double centre = g.orbital.centre_along_field;

  std::complex<double> sum_none{}, sum_first{}, sum_second{};
  Accumulate acc;
  for (StarkMode m : modes) {
    acc.none |= m == StarkMode::none;
    acc.first |= m == StarkMode::first_order;
    acc.second |= m == StarkMode::first_and_second;
  }

  const int k_end = std::min(g.tau_last, n);
  const double a_n = g.potential[n];
  for (int k = g.tau_first; k <= k_end; ++k) {
    const int m = n - k;
    const double f_ion = g.field[m];
    if (f_ion == 0.0) continue;
    const double tau = k * g.dt;
    const double d1 = g.int_potential[n] - g.int_potential[m];
    const double d2 = g.int_potential2[n] - g.int_potential2[m];
    const double p = -d1 / tau;
    const double action = 0.5 * (d2 - d1 * d1 / tau) + g.ip * tau;

    const double v_rec = p + a_n;
    const double v_ion = p + g.potential[m];
    const double q_rec = 1.0 / (v_rec * v_rec + kappa2);
    const double q_ion = 1.0 / (v_ion * v_ion + kappa2);
    // Centred matrix elements without the translation phase, which is folded
    // into the action below: g(v) = -i c v q^3 + R c_wf q^2.
    const std::complex<double> rec(centre * c_wf * q_rec * q_rec,
                                   c_dip * v_rec * q_rec * q_rec * q_rec);
    const std::complex<double> ion(centre * c_wf * q_ion * q_ion,
                                   -c_dip * v_ion * q_ion * q_ion * q_ion);
    const double phase = -action + (a_n - g.potential[m]) * centre;
    const std::complex<double> base =
        prefactor[k] * rec * ion * f_ion * std::polar(1.0, phase);

    if (acc.none) sum_none += base;
    if (acc.first || acc.second) {
      const double phi1 =
          g.symmetric ? g.mu * v_rec : g.mu * (a_n - g.potential[m]);
      const std::complex<double> with1 = base * std::polar(1.0, phi1);
      if (acc.first) sum_first += with1;
      if (acc.second) {
        const double phi2 = -0.5 * g.alpha * (g.int_field2[n] - g.int_field2[m]);
        sum_second += with1 * std::polar(1.0, phi2);
      }
    }
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    switch (modes[i]) {
      case StarkMode::none: out[i][n] = sum_none; break;
      case StarkMode::first_order: out[i][n] = sum_first; break;
      case StarkMode::first_and_second: out[i][n] = sum_second; break;
    }
  }
}

}  // namespace

std::vector<std::vector<std::complex<double>>> dipole_kernel(
    const DipoleGrid& grid, std::span<const StarkMode> modes, Execution exec) {
  // i * tau-weight * (pi / (eps + i tau / 2))^{3/2}
  std::vector<std::complex<double>> prefactor(grid.tau_last + 1);
  for (int k = grid.tau_first; k <= grid.tau_last; ++k) {
    const std::complex<double> z(grid.epsilon, 0.5 * k * grid.dt);
    prefactor[k] = std::complex<double>(0.0, grid.tau_weight[k]) *
                   std::pow(units::pi / z, 1.5);
  }
  std::vector<std::vector<std::complex<double>>> out(
      modes.size(), std::vector<std::complex<double>>(grid.samples));
  const int n_samples = grid.samples;
  if (exec == Execution::serial) {
    for (int n = 0; n < n_samples; ++n) sweep_sample(grid, prefactor, modes, n, out);
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (int n = 0; n < n_samples; ++n) sweep_sample(grid, prefactor, modes, n, out);
  }
  return out;
}

}  // namespace starkhhg::kernels
