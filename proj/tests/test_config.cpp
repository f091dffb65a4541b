#include <cmath>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "starkhhg/config.hpp"
#include "starkhhg/errors.hpp"
#include "starkhhg/output.hpp"
#include "starkhhg/units.hpp"

using namespace starkhhg;

namespace {

std::string failing_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse_config("");
  CHECK(c.wavelength_nm == 800.0);
  CHECK(c.pulse.omega_au == doctest::Approx(0.0569542).epsilon(1e-6));
  CHECK(c.pulse.duration_cycles == 2.0);
  CHECK(c.molecule_preset == "CO");
  CHECK(c.molecule.field_free_ip() == 0.5150);
  CHECK(c.molecule.dipole_au == 1.1);
  CHECK(c.lewenstein.samples_per_cycle == 4096);
  CHECK(c.medium.slices == 21);
  CHECK(c.focus.peak_intensity_Wcm2 == 3.0e14);
  CHECK(c.filter_cutoff_scale == 1.0);
}

TEST_CASE("sections, dotted keys and comments") {
  const auto c = parse_config(R"(
# comment
[pulse]
wavelength_nm = 800   ; trailing comment
peak_intensity_Wcm2 = 2e14
envelope = "flat_top"
[molecule]
theta_deg = 30
[numerics]
stark_mode = first_and_second
formulation = eq8
output.directory = "runs/a#1"
)");
  CHECK(c.pulse.peak_field_au == doctest::Approx(units::field_from_intensity(2e14)));
  CHECK(c.pulse.envelope_shape == Envelope::flat_top);
  CHECK(c.molecule.orientation_rad == doctest::Approx(units::pi / 6));
  CHECK(c.molecule.dipole_au == 1.1);
  CHECK(c.stark_mode == StarkMode::first_and_second);
  CHECK(c.formulation == Formulation::frequency_analytic);
  CHECK(c.output_directory == "runs/a#1");
}

TEST_CASE("errors name the key") {
  CHECK(failing_key("[pulse]\nwavelength_nm = -800\n") == "pulse.wavelength_nm");
  CHECK(failing_key("[pulse]\nwavelength = 800\n") == "pulse.wavelength");
  CHECK(failing_key("[laser]\nx = 1\n") == "laser");
  CHECK(failing_key("[pulse]\nduration_cycles = 2\nduration_cycles = 3\n") ==
        "pulse.duration_cycles");
  CHECK(failing_key("[pulse]\npeak_field_au = 0.05\npeak_intensity_Wcm2 = 2e14\n") ==
        "pulse.peak_field_au");
  CHECK(failing_key("[numerics]\nsamples_per_cycle = 1024\n") == "numerics.samples_per_cycle");
  CHECK(failing_key("[numerics]\ntau_max_cycles = 4\n") == "numerics.tau_max_cycles");
  CHECK(failing_key("[numerics]\nstark_mode = third\n") == "numerics.stark_mode");
  CHECK(failing_key("[molecule]\nmu_au = -1\n") == "molecule.mu_au");
  CHECK(failing_key("[molecule]\npreset = N2\n") == "molecule.preset");
  CHECK(failing_key("[macroscopic]\nslices = 0\n") == "macroscopic.slices");
  CHECK(failing_key("[output]\nformat = hdf5\n") == "output.format");
  CHECK(failing_key("[pulse]\nduration_cycles = two\n") == "pulse.duration_cycles");

  // Consistent field and intensity are accepted.
  const double f = units::field_from_intensity(2e14);
  CHECK_NOTHROW(parse_config("[pulse]\npeak_intensity_Wcm2 = 2e14\npeak_field_au = " +
                             format_number(f) + "\n"));
}

TEST_CASE("preset and overrides") {
  const auto c = parse_config("[molecule]\nmu_au = 0.5\npreset = CO\n");
  CHECK(c.molecule.dipole_au == 0.5);
  auto d = parse_config("");
  apply_override(d, "numerics.tau_max_cycles", "0.65");
  CHECK(d.lewenstein.tau_max_cycles == 0.65);
  CHECK(d.tau_max_explicit);
  CHECK_THROWS_AS(apply_override(d, "numerics.nope", "1"), ConfigError);
  apply_override(d, "numerics.tau_min_cycles", "0.4");
  CHECK_THROWS_AS(validate(d), ConfigError);
}

TEST_CASE("canonical form and hash") {
  const auto a = parse_config("[pulse]\npeak_field_au = 0.05\n[molecule]\ntheta_deg = 10\n");
  const auto b = parse_config("molecule.theta_deg = 10\npulse.peak_field_au = 0.05\n");
  CHECK(canonical_json(a) == canonical_json(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  const auto c = parse_config("[pulse]\npeak_field_au = 0.0500001\n");
  CHECK(config_hash(a) != config_hash(c));
  const auto j = nlohmann::json::parse(canonical_json(a));
  CHECK(j.is_object());
  CHECK(formulation_key(formulation_from_string("eq7")) == "eq7");
}

TEST_CASE("csv output") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e300) == "1e+300");
  CHECK(std::stod(format_number(units::pi)) == units::pi);
  CsvTable t({"a", "b"}, "0123456789abcdef");
  t.note("units", "au");
  t.row({"1", "2"});
  CHECK(t.str() == "# config_hash: 0123456789abcdef\n# units: au\na,b\n1,2\n");
  CHECK_THROWS(t.row({"1"}));
}
