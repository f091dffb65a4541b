#pragma once

#include <string>
#include <string_view>

#include "starkhhg/lewenstein.hpp"
#include "starkhhg/macroprop.hpp"
#include "starkhhg/molecule.hpp"
#include "starkhhg/pulse.hpp"
#include "starkhhg/spectrum.hpp"
#include "starkhhg/starkphase.hpp"
#include "starkhhg/trajectories.hpp"

namespace starkhhg {

// Fully resolved run configuration.
//
// Text format: `[section]` headers followed by `key = value` lines, or
// dotted `section.key = value` lines anywhere. `#` and `;` start comments.
// Strings may be quoted. Physical quantities carry their unit in the key
// name. The pulse field envelope is cos^2 over duration_cycles optical
// cycles; for 2 cycles the intensity FWHM is 0.729 cycles.
struct RunConfig {
  double wavelength_nm = 800.0;
  LaserPulse pulse;  // peak field resolved from field or intensity
  bool pulse_from_intensity = false;

  std::string molecule_preset = "CO";
  StarkParameters molecule;

  LewensteinOptions lewenstein;
  // Set once numerics.tau_max_cycles is given; reproduce-fig3 otherwise
  // admits long trajectories (1.5 cycles).
  bool tau_max_explicit = false;
  TrajectoryOptions trajectories;
  ExtractionOptions extraction;
  StarkMode stark_mode = StarkMode::first_order;
  Window window = Window::cos8;
  Observable observable = Observable::dipole;
  Formulation formulation = Formulation::frequency_timedep;

  MediumSpec medium;
  FocusGeometry focus;
  MacroGrid macro_grid;
  DipoleTableSpec table;
  FilterSpec::Shape filter_shape = FilterSpec::Shape::hard_edge;
  double filter_cutoff_scale = 1.0;
  int filter_order = 4;
  double filter_reference_order = 21.0;
  bool aligned = false;

  std::string output_directory = "out";
};

Formulation formulation_from_string(std::string_view s);
// eq3 | eq6 | eq7 | eq8
std::string_view formulation_key(Formulation f);

// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Key/value override with the same rules as a config line, e.g.
// apply_override(cfg, "numerics.tau_max_cycles", "0.65").
void apply_override(RunConfig& cfg, std::string_view dotted_key,
                    std::string_view value);

// Re-checks cross-key constraints after overrides.
void validate(const RunConfig& cfg);

// Canonical JSON text of every resolved parameter (sorted keys).
std::string canonical_json(const RunConfig& cfg);
// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace starkhhg
