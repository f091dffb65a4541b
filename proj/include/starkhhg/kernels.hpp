#pragma once

#include <complex>
#include <span>
#include <vector>

#include "starkhhg/execution.hpp"
#include "starkhhg/lewenstein.hpp"

namespace starkhhg::kernels {

// Everything the (t, tau) double loop needs, tabulated on the uniform grid.
// Prefix integrals use Simpson panels with midpoint samples.
struct DipoleGrid {
  double dt = 0.0;
  int samples = 0;
  int tau_first = 1;  // first tau index with non-zero weight
  int tau_last = 0;
  double ip = 0.0;
  double mu = 0.0;     // dipole along the field
  double alpha = 0.0;  // polarizability along the field
  double epsilon = 1e-4;
  bool symmetric = false;
  ModelOrbital orbital;

  std::vector<double> field;          // F(t_n)
  std::vector<double> potential;      // A(t_n)
  std::vector<double> int_potential;  // int_0^t A
  std::vector<double> int_potential2; // int_0^t A^2
  std::vector<double> int_field2;     // int_0^t F^2
  std::vector<double> tau_weight;     // ramp * taper * dt, per tau index
};

DipoleGrid make_dipole_grid(const LaserPulse& pulse,
                            const StarkParameters& params,
                            const LewensteinOptions& options);

// Optimized kernel: all requested modes in one sweep, common phases folded
// into one exponential. Bit-identical between serial and parallel.
std::vector<std::vector<std::complex<double>>> dipole_kernel(
    const DipoleGrid& grid, std::span<const StarkMode> modes, Execution exec);

// Straightforward per-mode evaluation of the same integral, kept as the
// reference for the optimized kernel.
std::vector<std::complex<double>> dipole_reference(const DipoleGrid& grid,
                                                   StarkMode mode);

}  // namespace starkhhg::kernels
