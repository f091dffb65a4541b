// Batch front-end: one config file, one subcommand, deterministic CSV + JSON.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "starkhhg/config.hpp"
#include "starkhhg/errors.hpp"
#include "starkhhg/lewenstein.hpp"
#include "starkhhg/macroprop.hpp"
#include "starkhhg/output.hpp"
#include "starkhhg/spectrum.hpp"
#include "starkhhg/starkphase.hpp"
#include "starkhhg/trajectories.hpp"
#include "starkhhg/units.hpp"

namespace fs = std::filesystem;
using namespace starkhhg;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string stark_mode, observable, window, formulation;
  std::optional<double> tau_max_cycles;
  bool aligned = false;
};

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? parse_config("") : load_config(c.config_path);
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(o, "override must look like section.key=value");
    }
    apply_override(cfg, o.substr(0, eq), o.substr(eq + 1));
  }
  if (!c.stark_mode.empty()) apply_override(cfg, "numerics.stark_mode", c.stark_mode);
  if (!c.observable.empty()) apply_override(cfg, "numerics.observable", c.observable);
  if (!c.window.empty()) apply_override(cfg, "numerics.window", c.window);
  if (!c.formulation.empty()) apply_override(cfg, "numerics.formulation", c.formulation);
  if (c.tau_max_cycles) {
    apply_override(cfg, "numerics.tau_max_cycles", format_number(*c.tau_max_cycles));
  }
  if (c.aligned) cfg.aligned = true;
  if (!c.out_dir.empty()) cfg.output_directory = c.out_dir;
  validate(cfg);
  return cfg;
}

class Run {
 public:
  Run(const RunConfig& cfg, std::string command)
      : cfg_(cfg), command_(std::move(command)), hash_(config_hash(cfg)),
        dir_(cfg.output_directory) {
    fs::create_directories(dir_);
  }

  CsvTable table(std::vector<std::string> columns) const {
    CsvTable t(std::move(columns), hash_);
    t.note("command", command_);
    return t;
  }

  void write(const CsvTable& t, const std::string& name) {
    t.write(dir_ / name);
    files_.push_back(name);
  }

  void finish() {
    files_.push_back("manifest.json");
    write_manifest(dir_ / "manifest.json", cfg_, command_, files_);
    for (const auto& f : files_) std::cout << (dir_ / f).string() << '\n';
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  std::string hash_;
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string num(double x) { return format_number(x); }
std::string flag(bool b) { return b ? "1" : "0"; }

double harmonic_order(const RunConfig& cfg, double omega) {
  return omega / cfg.pulse.omega_au;
}

TrajectoryTable classical_table(const RunConfig& cfg, const VectorPotential& vp) {
  return trajectory_table(vp, cfg.molecule, cfg.trajectories);
}

void trajectories_csv(Run& run, const RunConfig& cfg, const std::string& name,
                      bool with_phase) {
  const VectorPotential vp(cfg.pulse);
  const auto tt = classical_table(cfg, vp);
  std::vector<std::string> cols = {"t_ion_au", "t_rec_au", "v_ret_au", "omega_au",
                                   "omega_harmonic_order", "branch", "half_cycle"};
  if (with_phase) {
    cols.insert(cols.end(), {"ionization_weight", "dominant", "phase1_rad", "phase2_rad"});
  }
  auto t = run.table(cols);
  t.note("dominant_half_cycle", std::to_string(tt.dominant_half_cycle));
  t.note("cutoff_energy_au", num(tt.cutoff_energy()));
  for (const auto& tr : tt.entries) {
    std::vector<std::string> row = {
        num(tr.ionization_time), num(tr.return_time),
        num(tr.return_velocity.dot(cfg.pulse.polarization)), num(tr.photon_energy),
        num(harmonic_order(cfg, tr.photon_energy)), std::string(to_string(tr.branch)),
        std::to_string(tr.half_cycle)};
    if (with_phase) {
      row.push_back(num(tr.ionization_weight));
      row.push_back(flag(tr.half_cycle == tt.dominant_half_cycle));
      row.push_back(num(phase1_return_velocity(cfg.molecule, tr)));
      row.push_back(num(phase2_time_integral(cfg.molecule, cfg.pulse,
                                             tr.ionization_time, tr.return_time)));
    }
    t.row(row);
  }
  run.write(t, name);
}

std::vector<double> classical_omega_grid(const RunConfig& cfg,
                                         const TrajectoryTable& tt) {
  std::vector<double> grid;
  const double w0 = cfg.pulse.omega_au;
  const double lo = std::ceil(cfg.molecule.field_free_ip() / w0 * 4.0) / 4.0;
  for (double q = lo; q * w0 <= tt.cutoff_energy(); q += 0.25) grid.push_back(q * w0);
  return grid;
}

void stark_phase_csv(Run& run, const RunConfig& cfg, Formulation f,
                     const std::string& name) {
  const VectorPotential vp(cfg.pulse);
  const auto tt = classical_table(cfg, vp);
  const auto recs = stark_phase_records(cfg.molecule, vp, tt, f,
                                        classical_omega_grid(cfg, tt));
  auto t = run.table({"omega_au", "harmonic_order", "phase1_rad", "phase2_rad", "branch"});
  t.note("formulation", std::string(formulation_key(f)));
  for (const auto& r : recs) {
    t.row({num(r.omega), num(harmonic_order(cfg, r.omega)), num(r.phase_order1),
           num(r.phase_order2), std::string(to_string(r.branch))});
  }
  run.write(t, name);
}

void spectrum_csv(Run& run, const RunConfig& cfg, const HarmonicSpectrum& s,
                  const PhaseCurve* phase, const std::string& name) {
  auto t = run.table({"omega_au", "harmonic_order", "abs_amp", "phase_rad", "reliable_flag"});
  t.note("stark_mode", std::string(to_string(s.mode)));
  t.note("window", std::string(to_string(s.window)));
  t.note("observable", std::string(to_string(s.observable)));
  double peak = 0.0;
  for (std::size_t k = 0; k < s.omega.size(); ++k) {
    if (s.omega[k] >= cfg.molecule.field_free_ip()) {
      peak = std::max(peak, std::abs(s.amplitude[k]));
    }
  }
  for (std::size_t k = 0; k < s.omega.size(); ++k) {
    const double a = std::abs(s.amplitude[k]);
    const double ph = phase ? phase->phase[k] : std::arg(s.amplitude[k]);
    const bool ok = phase ? static_cast<bool>(phase->reliable[k])
                          : a >= cfg.extraction.noise_floor * peak && a > 0.0;
    t.row({num(s.omega[k]), num(harmonic_order(cfg, s.omega[k])), num(a), num(ph),
           flag(ok)});
  }
  run.write(t, name);
}

ExtractionRun extraction(const RunConfig& cfg, StarkMode with, StarkMode without) {
  return run_extraction(cfg.pulse, cfg.molecule, with, without, cfg.lewenstein,
                        cfg.window, cfg.observable, cfg.extraction);
}

void field_map_csv(Run& run, const RunConfig& cfg, const FieldMap& m,
                   const std::string& name) {
  const bool far = m.plane == Plane::far;
  // Far-field maps are indexed by transverse spatial frequency.
  auto t = run.table({"omega_au", far ? "rho_per_cm" : "r_cm", "re", "im"});
  t.note("plane", std::string(to_string(m.plane)));
  (void)cfg;
  for (long k = 0; k < m.amplitude.rows(); ++k) {
    for (long n = 0; n < m.amplitude.cols(); ++n) {
      const auto z = m.amplitude(k, n);
      t.row({num(m.omega[k]), num(m.radius[n]), num(z.real()), num(z.imag())});
    }
  }
  run.write(t, name);
}

void averaged_csv(Run& run, const RunConfig& cfg, const AveragedPhase& a,
                  const std::string& name, double cutoff_rad) {
  auto t = run.table({"omega_au", "harmonic_order", "phase_rad", "defined_flag"});
  t.note("filter_cutoff_rad", num(cutoff_rad));
  for (std::size_t k = 0; k < a.omega.size(); ++k) {
    t.row({num(a.omega[k]), num(harmonic_order(cfg, a.omega[k])),
           num(a.phase[k]), flag(a.defined[k])});
  }
  run.write(t, name);
}

struct MacroResult {
  FieldMap near_with, near_without;
  FilteredExtraction filtered;
};

MacroResult macroscopic(const RunConfig& cfg, StarkMode mode) {
  DipoleTableSpec spec = cfg.table;
  spec.window = cfg.window;
  spec.observable = cfg.observable;
  const auto [lo, hi] =
      jet_intensity_range(cfg.focus, cfg.medium, cfg.pulse.omega_au, cfg.macro_grid);
  spec.max_intensity_Wcm2 = hi;
  spec.min_intensity_Wcm2 = std::max(lo, spec.lowest_fraction * hi);
  const StarkMode modes[] = {mode, StarkMode::none};
  const auto oriented =
      build_dipole_table(cfg.pulse, cfg.molecule, cfg.lewenstein, spec, modes);
  MacroResult r;
  if (cfg.aligned) {
    const auto flipped = build_dipole_table(cfg.pulse, cfg.molecule.flipped(),
                                            cfg.lewenstein, spec, modes);
    r.near_with = aligned_ensemble(oriented, flipped, cfg.focus, cfg.medium, mode,
                                   cfg.macro_grid);
    r.near_without = aligned_ensemble(oriented, flipped, cfg.focus, cfg.medium,
                                      StarkMode::none, cfg.macro_grid);
  } else {
    r.near_with = propagate_jet(oriented, cfg.focus, cfg.medium, mode, cfg.macro_grid);
    r.near_without =
        propagate_jet(oriented, cfg.focus, cfg.medium, StarkMode::none, cfg.macro_grid);
  }
  r.filtered = filtered_stark_phase(
      r.near_with, r.near_without, cfg.molecule.field_free_ip(),
      cfg.filter_reference_order * cfg.pulse.omega_au, cfg.filter_cutoff_scale,
      cfg.filter_shape, cfg.extraction);
  return r;
}

// Short-branch classical curves at the mid-jet on-axis intensity.
void classical_reference_csv(Run& run, const RunConfig& cfg, double intensity,
                             const std::string& name) {
  RunConfig local = cfg;
  local.pulse.peak_field_au = units::field_from_intensity(intensity);
  const VectorPotential vp(local.pulse);
  const auto tt = classical_table(local, vp);
  const int sign = recollision_sign(local.pulse, tt);
  auto t = run.table({"omega_au", "harmonic_order", "eq7_short_rad", "eq7_long_rad",
                      "eq8_rad"});
  t.note("peak_intensity_Wcm2", num(intensity));
  for (double w : classical_omega_grid(local, tt)) {
    auto eq7 = [&](Branch b) {
      try {
        return num(phase1_frequency_timedep(local.molecule, vp, tt, w, b).phase);
      } catch (const OutOfRangeError&) {
        return std::string("nan");
      }
    };
    t.row({num(w), num(harmonic_order(local, w)), eq7(Branch::short_), eq7(Branch::long_),
           num(phase1_analytic(local.molecule, local.pulse, w, sign).phase)});
  }
  run.write(t, name);
}

void cmd_trajectories(const RunConfig& cfg) {
  Run run(cfg, "trajectories");
  trajectories_csv(run, cfg, "trajectories.csv", false);
  run.finish();
}

void cmd_stark_phase(const RunConfig& cfg) {
  Run run(cfg, "stark-phase");
  stark_phase_csv(run, cfg, cfg.formulation,
                  "stark_phase_" + std::string(formulation_key(cfg.formulation)) + ".csv");
  run.finish();
}

void cmd_spectrum(const RunConfig& cfg) {
  Run run(cfg, "spectrum");
  const StarkMode modes[] = {cfg.stark_mode};
  const auto sig = dipole_time_series(cfg.pulse, cfg.molecule, modes, cfg.lewenstein);
  const auto s = spectrum(sig[0], cfg.window, cfg.observable);
  spectrum_csv(run, cfg, s, nullptr,
               "spectrum_" + std::string(to_string(cfg.stark_mode)) + ".csv");
  run.finish();
}

void cmd_extract(const RunConfig& cfg) {
  Run run(cfg, "extract");
  const auto ex = extraction(cfg, cfg.stark_mode, StarkMode::none);
  spectrum_csv(run, cfg, ex.with, &ex.phase,
               "extract_" + std::string(to_string(cfg.stark_mode)) + ".csv");
  run.finish();
}

void cmd_propagate(const RunConfig& cfg) {
  Run run(cfg, "propagate");
  const auto r = macroscopic(cfg, cfg.stark_mode);
  field_map_csv(run, cfg, r.near_with, "near_field.csv");
  field_map_csv(run, cfg, r.filtered.far_with, "far_field.csv");
  field_map_csv(run, cfg, r.filtered.refocused_with, "refocused_field.csv");
  averaged_csv(run, cfg, r.filtered.averaged, "averaged_phase.csv",
               r.filtered.filter.cutoff_divergence_rad);
  run.finish();
}

void cmd_fig2(const RunConfig& cfg) {
  Run run(cfg, "reproduce-fig2");
  trajectories_csv(run, cfg, "fig2_trajectories.csv", true);
  run.finish();
}

void cmd_fig3(const RunConfig& base) {
  RunConfig cfg = base;
  if (!cfg.tau_max_explicit) cfg.lewenstein.tau_max_cycles = 1.5;
  Run run(cfg, "reproduce-fig3");
  const StarkMode mode =
      cfg.stark_mode == StarkMode::none ? StarkMode::first_order : cfg.stark_mode;
  const auto ex = extraction(cfg, mode, StarkMode::none);
  spectrum_csv(run, cfg, ex.with, &ex.phase,
               "fig3_extracted_" + std::string(to_string(mode)) + ".csv");
  if (mode == StarkMode::first_and_second) {
    const auto second = extraction(cfg, StarkMode::first_and_second, StarkMode::first_order);
    spectrum_csv(run, cfg, second.with, &second.phase, "fig3_second_order.csv");
  }
  classical_reference_csv(run, cfg, units::intensity_from_field(cfg.pulse.peak_field_au),
                          "fig3_classical.csv");
  run.finish();
}

void cmd_fig4(const RunConfig& cfg) {
  Run run(cfg, "reproduce-fig4");
  const auto r = macroscopic(cfg, cfg.stark_mode);
  averaged_csv(run, cfg, r.filtered.averaged,
               cfg.aligned ? "fig4_aligned_phase.csv" : "fig4_oriented_phase.csv",
               r.filtered.filter.cutoff_divergence_rad);
  const double mid = cfg.focus.peak_intensity_Wcm2 *
                     std::norm(gaussian_beam_factor(cfg.focus, 0.0, 0.0, cfg.pulse.omega_au));
  classical_reference_csv(run, cfg, mid, "fig4_classical.csv");
  run.finish();
}

void set_threads() {
  if (const char* env = std::getenv("STARKHHG_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw ConfigError("STARKHHG_THREADS", "must be a positive integer");
    }
    omp_set_num_threads(static_cast<int>(n));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stark phases in high-order harmonic generation from polar molecules"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config_path, "configuration file");
    sub->add_option("-s,--set", common.overrides, "override, section.key=value");
    sub->add_option("-o,--out", common.out_dir, "output directory");
    sub->add_option("--stark-mode", common.stark_mode,
                    "none | first_order | first_and_second");
    sub->add_option("--observable", common.observable, "dipole | acceleration");
    sub->add_option("--window", common.window, "cos8 | hann | rectangular");
    sub->add_option("--tau-max-cycles", common.tau_max_cycles,
                    "longest excursion time kept, in cycles");
  };

  struct Entry {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&);
  };
  const Entry entries[] = {
      {"trajectories", "classical return table", cmd_trajectories},
      {"stark-phase", "classical Stark phases", cmd_stark_phase},
      {"spectrum", "single-molecule harmonic spectrum", cmd_spectrum},
      {"extract", "Stark phase by spectral subtraction", cmd_extract},
      {"propagate", "macroscopic jet, far field, filter and average", cmd_propagate},
      {"reproduce-fig2", "classical trajectories for CO", cmd_fig2},
      {"reproduce-fig3", "extracted single-molecule Stark phase", cmd_fig3},
      {"reproduce-fig4", "Stark phases from a gas jet", cmd_fig4},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    if (std::string(e.name) == "stark-phase") {
      sub->add_option("--formulation", common.formulation, "eq3 | eq6 | eq7 | eq8");
    }
    if (std::string(e.name) == "propagate" || std::string(e.name) == "reproduce-fig4") {
      sub->add_flag("--aligned", common.aligned, "coherent sum of both orientations");
    }
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    set_threads();
    const RunConfig cfg = resolve(common);
    for (const auto& [sub, entry] : subs) {
      if (sub->parsed()) entry->run(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
