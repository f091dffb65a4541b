#include "starkhhg/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "starkhhg/errors.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg {

Formulation formulation_from_string(std::string_view s) {
  if (s == "eq3") return Formulation::time_integral;
  if (s == "eq6") return Formulation::return_velocity;
  if (s == "eq7") return Formulation::frequency_timedep;
  if (s == "eq8") return Formulation::frequency_analytic;
  throw ConfigError("numerics.formulation",
                    "unknown formulation '" + std::string(s) +
                        "' (expected eq3, eq6, eq7 or eq8)");
}

std::string_view formulation_key(Formulation f) {
  switch (f) {
    case Formulation::time_integral: return "eq3";
    case Formulation::return_velocity: return "eq6";
    case Formulation::frequency_timedep: return "eq7";
    case Formulation::frequency_analytic: return "eq8";
  }
  return "unknown";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_number(const std::string& key, const std::string& v) {
  const std::string s = unquote(v);
  if (s.empty()) throw ConfigError(key, "expected a number");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError(key, "expected a number, got '" + s + "'");
  }
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

double positive(const std::string& key, const std::string& v) {
  const double x = to_number(key, v);
  if (!(x > 0.0)) throw ConfigError(key, "must be > 0");
  return x;
}

double non_negative(const std::string& key, const std::string& v) {
  const double x = to_number(key, v);
  if (!(x >= 0.0)) throw ConfigError(key, "must be >= 0");
  return x;
}

int to_int(const std::string& key, const std::string& v, int lo) {
  const double x = to_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ConfigError(key, "expected an integer");
  }
  if (x < lo) throw ConfigError(key, "must be >= " + std::to_string(lo));
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string s = unquote(v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected true or false");
}

void set_peak_field(RunConfig& c, double f) {
  c.pulse.peak_field_au = f;
  c.pulse_from_intensity = false;
}

void set_peak_intensity(RunConfig& c, double i) {
  c.pulse.peak_field_au = units::field_from_intensity(i);
  c.pulse_from_intensity = true;
}

void load_preset(RunConfig& c, const std::string& key, const std::string& v) {
  const std::string name = unquote(v);
  if (name == "CO" || name == "co") {
    const double theta = c.molecule.orientation_rad;
    c.molecule = StarkParameters::carbon_monoxide(theta);
    c.molecule_preset = "CO";
  } else if (name == "custom") {
    c.molecule_preset = "custom";
  } else {
    throw ConfigError(key, "unknown preset '" + name + "' (expected CO or custom)");
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"pulse.wavelength_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.wavelength_nm = positive(k, v);
         c.pulse.omega_au = units::angular_frequency_from_wavelength(c.wavelength_nm);
       }},
      {"pulse.peak_field_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         set_peak_field(c, positive(k, v));
       }},
      {"pulse.peak_intensity_Wcm2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         set_peak_intensity(c, positive(k, v));
       }},
      {"pulse.duration_cycles",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pulse.duration_cycles = positive(k, v);
       }},
      {"pulse.envelope",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string s = unquote(v);
         if (s == "cos2") {
           c.pulse.envelope_shape = Envelope::cos2;
         } else if (s == "flat_top") {
           c.pulse.envelope_shape = Envelope::flat_top;
         } else {
           throw ConfigError(k, "expected cos2 or flat_top");
         }
       }},
      {"pulse.cep_rad",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pulse.cep_rad = to_number(k, v);
       }},
      {"molecule.preset", load_preset},
      {"molecule.E0_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double e = to_number(k, v);
         if (!(e < 0.0)) throw ConfigError(k, "bound-state energy must be < 0");
         c.molecule.field_free_energy_au = e;
       }},
      {"molecule.mu_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.molecule.dipole_au = non_negative(k, v);
       }},
      {"molecule.alpha_par_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.molecule.alpha_parallel_au = non_negative(k, v);
       }},
      {"molecule.alpha_perp_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.molecule.alpha_perpendicular_au = non_negative(k, v);
       }},
      {"molecule.theta_deg",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.molecule.orientation_rad = to_number(k, v) * units::pi / 180.0;
       }},
      {"numerics.samples_per_cycle",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lewenstein.samples_per_cycle = to_int(k, v, 4096);
       }},
      {"numerics.tau_max_cycles",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double x = positive(k, v);
         if (x > 3.0) throw ConfigError(k, "must be in (0, 3]");
         c.lewenstein.tau_max_cycles = x;
         c.tau_max_explicit = true;
       }},
      {"numerics.tau_min_cycles",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lewenstein.tau_min_cycles = non_negative(k, v);
       }},
      {"numerics.tau_taper_fraction",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double x = non_negative(k, v);
         if (x >= 1.0) throw ConfigError(k, "must be in [0, 1)");
         c.lewenstein.tau_taper_fraction = x;
       }},
      {"numerics.epsilon_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lewenstein.epsilon_au = positive(k, v);
       }},
      {"numerics.span_cycles",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lewenstein.span_cycles = non_negative(k, v);
       }},
      {"numerics.symmetric_ionization",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.lewenstein.symmetric_ionization = to_bool(k, v);
       }},
      {"numerics.stark_mode",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.stark_mode = stark_mode_from_string(unquote(v));
       }},
      {"numerics.window",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.window = window_from_string(unquote(v));
       }},
      {"numerics.observable",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.observable = observable_from_string(unquote(v));
       }},
      {"numerics.formulation",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.formulation = formulation_from_string(unquote(v));
       }},
      {"numerics.trajectory_samples_per_cycle",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.trajectories.samples_per_cycle = to_int(k, v, 16);
       }},
      {"numerics.scan_steps_per_cycle",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.trajectories.scan_steps_per_cycle = to_int(k, v, 16);
       }},
      {"numerics.root_tolerance_au",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.trajectories.root_tolerance_au = positive(k, v);
       }},
      {"numerics.first_return_only",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.trajectories.first_return_only = to_bool(k, v);
       }},
      {"numerics.relative_floor",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double x = non_negative(k, v);
         if (x >= 1.0) throw ConfigError(k, "must be in [0, 1)");
         c.extraction.relative_floor = x;
       }},
      {"numerics.noise_floor",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double x = non_negative(k, v);
         if (x >= 1.0) throw ConfigError(k, "must be in [0, 1)");
         c.extraction.noise_floor = x;
       }},
      {"macroscopic.length_cm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.medium.length_cm = positive(k, v);
       }},
      {"macroscopic.density_cm3",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.medium.density_cm3 = non_negative(k, v);
       }},
      {"macroscopic.slices",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.medium.slices = to_int(k, v, 1);
       }},
      {"macroscopic.confocal_parameter_cm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.focus.confocal_parameter_cm = positive(k, v);
       }},
      {"macroscopic.focus_position_cm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.focus.focus_position_cm = to_number(k, v);
       }},
      {"macroscopic.peak_intensity_Wcm2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.focus.peak_intensity_Wcm2 = positive(k, v);
       }},
      {"macroscopic.radial_nodes",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.macro_grid.radial_nodes = to_int(k, v, 1);
       }},
      {"macroscopic.radial_extent_waists",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.macro_grid.radial_extent_waists = positive(k, v);
       }},
      {"macroscopic.table_spacing",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.table.relative_spacing = positive(k, v);
       }},
      {"macroscopic.table_lowest_fraction",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double x = positive(k, v);
         if (x > 1.0) throw ConfigError(k, "must be in (0, 1]");
         c.table.lowest_fraction = x;
       }},
      {"macroscopic.min_harmonic_order",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.table.min_order = non_negative(k, v);
       }},
      {"macroscopic.max_harmonic_order",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.table.max_order = positive(k, v);
       }},
      {"macroscopic.filter_shape",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string s = unquote(v);
         if (s == "hard_edge") {
           c.filter_shape = FilterSpec::Shape::hard_edge;
         } else if (s == "super_gaussian") {
           c.filter_shape = FilterSpec::Shape::super_gaussian;
         } else {
           throw ConfigError(k, "expected hard_edge or super_gaussian");
         }
       }},
      {"macroscopic.filter_cutoff_scale",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.filter_cutoff_scale = positive(k, v);
       }},
      {"macroscopic.filter_order",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.filter_order = to_int(k, v, 1);
       }},
      {"macroscopic.filter_reference_order",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.filter_reference_order = positive(k, v);
       }},
      {"macroscopic.aligned",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.aligned = to_bool(k, v);
       }},
      {"output.directory",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string s = unquote(v);
         if (s.empty()) throw ConfigError(k, "must not be empty");
         c.output_directory = s;
       }},
      {"output.format",
       [](RunConfig&, const std::string& k, const std::string& v) {
         if (unquote(v) != "csv") throw ConfigError(k, "only csv is supported");
       }},
  };
  return table;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(key, "unknown key");
  try {
    it->second(cfg, key, value);
  } catch (const ConfigError& e) {
    if (e.key() == key) throw;
    throw ConfigError(key, e.what());
  }
}

}  // namespace

void validate(const RunConfig& cfg) {
  const auto& l = cfg.lewenstein;
  if (2.0 * l.tau_min_cycles >= l.tau_max_cycles) {
    throw ConfigError("numerics.tau_min_cycles", "must be below tau_max_cycles / 2");
  }
  if (cfg.table.min_order >= cfg.table.max_order) {
    throw ConfigError("macroscopic.min_harmonic_order",
                      "must be below max_harmonic_order");
  }
  try {
    cfg.pulse.validate();
  } catch (const DomainError& e) {
    throw ConfigError("pulse", e.what());
  }
  try {
    cfg.molecule.validate();
  } catch (const DomainError& e) {
    throw ConfigError("molecule", e.what());
  }
  try {
    cfg.medium.validate();
    cfg.focus.validate();
  } catch (const DomainError& e) {
    throw ConfigError("macroscopic", e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::vector<std::string> order;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    // Strip comments outside quotes.
    bool quoted = false;
    char q = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == q) quoted = false;
      } else if (ch == '"' || ch == '\'') {
        quoted = true;
        q = ch;
      } else if (ch == '#' || ch == ';') {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no), "malformed section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const char* known[] = {"pulse", "molecule", "numerics",
                                    "macroscopic", "output"};
      bool ok = false;
      for (const char* s : known) ok = ok || section == s;
      if (!ok) throw ConfigError(section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no), "missing key");
    }
    if (key.find('.') == std::string::npos) {
      if (section.empty()) throw ConfigError(key, "key outside any section");
      key = section + "." + key;
    }
    if (!setters().count(key)) throw ConfigError(key, "unknown key");
    if (entries.count(key)) throw ConfigError(key, "duplicate key");
    entries[key] = value;
    order.push_back(key);
  }

  RunConfig cfg;
  // Preset first so explicit molecule keys override it.
  if (entries.count("molecule.theta_deg")) {
    apply(cfg, "molecule.theta_deg", entries["molecule.theta_deg"]);
  }
  if (entries.count("molecule.preset")) {
    apply(cfg, "molecule.preset", entries["molecule.preset"]);
  }
  for (const auto& key : order) {
    if (key == "molecule.preset") continue;
    apply(cfg, key, entries[key]);
  }

  const bool has_f = entries.count("pulse.peak_field_au") > 0;
  const bool has_i = entries.count("pulse.peak_intensity_Wcm2") > 0;
  if (has_f && has_i) {
    const double f = to_number("pulse.peak_field_au", entries["pulse.peak_field_au"]);
    const double i = units::field_from_intensity(
        to_number("pulse.peak_intensity_Wcm2", entries["pulse.peak_intensity_Wcm2"]));
    if (std::abs(f - i) > 1e-6 * std::max(f, i)) {
      throw ConfigError("pulse.peak_field_au",
                        "conflicts with pulse.peak_intensity_Wcm2; set only one");
    }
    set_peak_field(cfg, f);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, std::string_view dotted_key,
                    std::string_view value) {
  apply(cfg, std::string(dotted_key), trim(value));
}

std::string canonical_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["pulse"] = {{"wavelength_nm", c.wavelength_nm},
                {"omega_au", c.pulse.omega_au},
                {"peak_field_au", c.pulse.peak_field_au},
                {"peak_intensity_Wcm2",
                 units::intensity_from_field(c.pulse.peak_field_au)},
                {"duration_cycles", c.pulse.duration_cycles},
                {"intensity_fwhm_cycles", c.pulse.intensity_fwhm_cycles()},
                {"cep_rad", c.pulse.cep_rad},
                {"envelope", c.pulse.envelope_shape == Envelope::cos2 ? "cos2" : "flat_top"}};
  j["molecule"] = {{"preset", c.molecule_preset},
                   {"E0_au", c.molecule.field_free_energy_au},
                   {"mu_au", c.molecule.dipole_au},
                   {"alpha_par_au", c.molecule.alpha_parallel_au},
                   {"alpha_perp_au", c.molecule.alpha_perpendicular_au},
                   {"theta_deg", c.molecule.orientation_rad * 180.0 / units::pi}};
  const auto& l = c.lewenstein;
  const auto& t = c.trajectories;
  j["numerics"] = {{"samples_per_cycle", l.samples_per_cycle},
                   {"tau_max_cycles", l.tau_max_cycles},
                   {"tau_min_cycles", l.tau_min_cycles},
                   {"tau_taper_fraction", l.tau_taper_fraction},
                   {"epsilon_au", l.epsilon_au},
                   {"span_cycles", l.span_cycles},
                   {"symmetric_ionization", l.symmetric_ionization},
                   {"stark_mode", std::string(to_string(c.stark_mode))},
                   {"window", std::string(to_string(c.window))},
                   {"observable", std::string(to_string(c.observable))},
                   {"formulation", std::string(formulation_key(c.formulation))},
                   {"trajectory_samples_per_cycle", t.samples_per_cycle},
                   {"scan_steps_per_cycle", t.scan_steps_per_cycle},
                   {"root_tolerance_au", t.root_tolerance_au},
                   {"first_return_only", t.first_return_only},
                   {"relative_floor", c.extraction.relative_floor},
                   {"noise_floor", c.extraction.noise_floor}};
  j["macroscopic"] = {
      {"length_cm", c.medium.length_cm},
      {"density_cm3", c.medium.density_cm3},
      {"slices", c.medium.slices},
      {"confocal_parameter_cm", c.focus.confocal_parameter_cm},
      {"focus_position_cm", c.focus.focus_position_cm},
      {"peak_intensity_Wcm2", c.focus.peak_intensity_Wcm2},
      {"radial_nodes", c.macro_grid.radial_nodes},
      {"radial_extent_waists", c.macro_grid.radial_extent_waists},
      {"table_spacing", c.table.relative_spacing},
      {"table_lowest_fraction", c.table.lowest_fraction},
      {"min_harmonic_order", c.table.min_order},
      {"max_harmonic_order", c.table.max_order},
      {"filter_shape", c.filter_shape == FilterSpec::Shape::hard_edge
                           ? "hard_edge"
                           : "super_gaussian"},
      {"filter_cutoff_scale", c.filter_cutoff_scale},
      {"filter_order", c.filter_order},
      {"filter_reference_order", c.filter_reference_order},
      {"aligned", c.aligned}};
  j["output"] = {{"directory", c.output_directory}, {"format", "csv"}};
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = canonical_json(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace starkhhg
