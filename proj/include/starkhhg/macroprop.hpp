#pragma once

#include <complex>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "starkhhg/execution.hpp"
#include "starkhhg/hankel.hpp"
#include "starkhhg/lewenstein.hpp"
#include "starkhhg/molecule.hpp"
#include "starkhhg/pulse.hpp"
#include "starkhhg/spectrum.hpp"

namespace starkhhg {

struct MediumSpec {
  double length_cm = 0.5;
  double density_cm3 = 5e14;
  int slices = 21;

  void validate() const;
  // Midpoint-rule slice centres, relative to the medium centre.
  std::vector<double> slice_positions() const;
};

enum class Plane { near, far, refocused };

std::string_view to_string(Plane p);

// Harmonic amplitude on an (omega x radial node) grid. In the far plane the
// radial coordinate is the transverse spatial frequency rho (1/cm); the
// divergence half-angle of frequency omega is lambda(omega) * rho.
struct FieldMap {
  std::vector<double> omega;
  std::vector<double> radius;
  std::vector<double> radial_weights;  // for int f r dr
  Eigen::MatrixXcd amplitude;          // rows: omega, cols: radius
  Plane plane = Plane::near;
  double omega0 = 0.0;
  // Grid of the Hankel transform that produced / consumes this map.
  int hankel_nodes = 0;
  double hankel_r_max_cm = 0.0;
};

struct FilterSpec {
  enum class Shape { hard_edge, super_gaussian };
  Shape shape = Shape::hard_edge;
  double cutoff_divergence_rad = 0.0;
  int order = 4;
};

struct MacroGrid {
  int radial_nodes = 128;
  // Outer radius in units of the fundamental beam radius at the exit plane.
  double radial_extent_waists = 4.0;
};

// Single-molecule spectra on a log-spaced intensity grid, for interpolation
// at the local intensity of each (z, r) node. Phases are unwrapped along the
// intensity axis per frequency bin.
struct DipoleTable {
  std::vector<double> intensities_Wcm2;
  std::vector<double> omega;
  double omega0 = 0.0;
  std::map<StarkMode, std::vector<std::vector<double>>> magnitude;
  std::map<StarkMode, std::vector<std::vector<double>>> phase;

  // Linear interpolation in log intensity; zero below the table.
  std::vector<std::complex<double>> response(double intensity_Wcm2,
                                             StarkMode mode) const;
  bool has(StarkMode mode) const { return magnitude.count(mode) > 0; }
};

struct DipoleTableSpec {
  // Zero selects the range the jet samples, cut below lowest_fraction of the
  // maximum where plateau emission is negligible.
  double min_intensity_Wcm2 = 0.0;
  double max_intensity_Wcm2 = 0.0;
  double lowest_fraction = 0.2;
  double relative_spacing = 0.01;
  // Kept harmonic band in units of omega0.
  double min_order = 5.0;
  double max_order = 40.0;
  Window window = Window::cos8;
  Observable observable = Observable::dipole;
};

// `pulse` supplies wavelength, duration and CEP; its amplitude is replaced by
// each table intensity. Throws NumericalError if the strongest field breaks
// the adiabatic Stark model.
DipoleTable build_dipole_table(const LaserPulse& pulse,
                               const StarkParameters& params,
                               const LewensteinOptions& options,
                               const DipoleTableSpec& spec,
                               std::span<const StarkMode> modes,
                               Execution exec = Execution::parallel);

// Intensity range the jet samples on the radial grid (max on axis).
std::pair<double, double> jet_intensity_range(const FocusGeometry& focus,
                                              const MediumSpec& medium,
                                              double omega0,
                                              const MacroGrid& grid);

HankelTransform make_radial_transform(const FocusGeometry& focus,
                                      const MediumSpec& medium, double omega0,
                                      const MacroGrid& grid);

// Near field at the jet exit: coherent midpoint sum over slices of
// density * dz * D(omega; I(z, r)) * exp(i (omega/omega0) psi(z, r)), with psi
// the fundamental phase relative to the medium centre on axis. Harmonic
// dispersion and absorption are neglected.
FieldMap propagate_jet(const DipoleTable& table, const FocusGeometry& focus,
                       const MediumSpec& medium, StarkMode mode,
                       const MacroGrid& grid = {},
                       Execution exec = Execution::parallel);

// Builds a table for `mode` and propagates.
FieldMap propagate_jet(const LaserPulse& pulse, const FocusGeometry& focus,
                       const MediumSpec& medium, const StarkParameters& params,
                       StarkMode mode, const LewensteinOptions& options = {},
                       const DipoleTableSpec& table_spec = {},
                       const MacroGrid& grid = {},
                       Execution exec = Execution::parallel);

FieldMap to_far_field(const FieldMap& near, Execution exec = Execution::parallel);
FieldMap to_near_field(const FieldMap& far, Execution exec = Execution::parallel);

FieldMap apply_filter(const FieldMap& far, const FilterSpec& filter);

// Divergence half-angle containing `fraction` of the far-field energy at the
// bin nearest `omega`.
double divergence_radius(const FieldMap& far, double omega, double fraction);

struct PhaseMap {
  Eigen::MatrixXd phase;  // rows: omega, cols: radius
  std::vector<double> omega;
};

// Per-radius extraction. Each bin is put on the branch of its strongest
// radius and the map is unwrapped upwards in omega from the first reliable
// bin above ip.
PhaseMap extract_phase_map(const FieldMap& with, const FieldMap& without,
                           double ip, const ExtractionOptions& options = {});

struct AveragedPhase {
  std::vector<double> omega;
  std::vector<double> phase;
  std::vector<bool> defined;
};

// <Phi(omega)>_r = int Phi |F|^2 r dr / int |F|^2 r dr.
AveragedPhase radial_average_phase(const Eigen::MatrixXd& phase,
                                   const FieldMap& map);

// Coherent sum of the two orientations (mu and -mu) at the jet exit.
FieldMap aligned_ensemble(const DipoleTable& oriented,
                          const DipoleTable& flipped,
                          const FocusGeometry& focus, const MediumSpec& medium,
                          StarkMode mode, const MacroGrid& grid = {},
                          Execution exec = Execution::parallel);

FieldMap aligned_ensemble(const LaserPulse& pulse, const FocusGeometry& focus,
                          const MediumSpec& medium,
                          const StarkParameters& params, StarkMode mode,
                          const LewensteinOptions& options = {},
                          const DipoleTableSpec& table_spec = {},
                          const MacroGrid& grid = {},
                          Execution exec = Execution::parallel);

// Far field, filter, refocus and extract for a pair of near-field maps.
struct FilteredExtraction {
  FieldMap far_with, far_without;
  FieldMap refocused_with, refocused_without;
  FilterSpec filter;
  PhaseMap phase_map;
  AveragedPhase averaged;
};

// cutoff_scale multiplies the default cutoff: the divergence radius holding
// 50% of the reference (without-Stark) energy at reference_omega.
FilteredExtraction filtered_stark_phase(const FieldMap& near_with,
                                        const FieldMap& near_without,
                                        double ip, double reference_omega,
                                        double cutoff_scale = 1.0,
                                        FilterSpec::Shape shape =
                                            FilterSpec::Shape::hard_edge,
                                        const ExtractionOptions& options = {},
                                        Execution exec = Execution::parallel);

}  // namespace starkhhg
