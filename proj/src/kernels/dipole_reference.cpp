#include <cmath>

#include "starkhhg/kernels.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg::kernels {

std::vector<std::complex<double>> dipole_reference(const DipoleGrid& g,
                                                   StarkMode mode) {
  using namespace std::complex_literals;
  std::vector<std::complex<double>> out(g.samples);
  for (int n = 0; n < g.samples; ++n) {
    std::complex<double> sum = 0.0;
    for (int k = g.tau_first; k <= std::min(g.tau_last, n); ++k) {
      const int m = n - k;
      const double tau = k * g.dt;
      const double p_stat = -(g.int_potential[n] - g.int_potential[m]) / tau;
      const double kinetic =
          0.5 * p_stat * p_stat * tau +
          p_stat * (g.int_potential[n] - g.int_potential[m]) +
          0.5 * (g.int_potential2[n] - g.int_potential2[m]);
      double stark = 0.0;
      if (mode != StarkMode::none) {
        stark += g.symmetric ? g.mu * (p_stat + g.potential[n])
                             : g.mu * (g.potential[n] - g.potential[m]);
      }
      if (mode == StarkMode::first_and_second) {
        stark += -0.5 * g.alpha * (g.int_field2[n] - g.int_field2[m]);
      }
      // S = int (v^2/2 + Ip) - Phi_Stark
      const double action = kinetic + g.ip * tau - stark;
      const std::complex<double> spread =
          std::pow(units::pi / (g.epsilon + 0.5i * tau), 1.5);
      const std::complex<double> rec =
          std::conj(g.orbital.dipole_element(p_stat + g.potential[n]));
      const std::complex<double> ion =
          g.orbital.dipole_element(p_stat + g.potential[m]);
      sum += 1.0i * g.tau_weight[k] * spread * rec * g.field[m] * ion *
             std::exp(-1.0i * action);
    }
    out[n] = sum;
  }
  return out;
}

}  // namespace starkhhg::kernels
