#include "starkhhg/macroprop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starkhhg/errors.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg {

using units::pi;
using cd = std::complex<double>;

void MediumSpec::validate() const {
  if (!(length_cm > 0.0) || !std::isfinite(length_cm)) {
    throw DomainError("medium length must be > 0");
  }
  if (!(density_cm3 >= 0.0) || !std::isfinite(density_cm3)) {
    throw DomainError("medium density must be >= 0");
  }
  if (slices < 1) throw DomainError("medium needs at least one slice");
}

std::vector<double> MediumSpec::slice_positions() const {
  std::vector<double> z(slices);
  const double dz = length_cm / slices;
  for (int i = 0; i < slices; ++i) z[i] = -0.5 * length_cm + (i + 0.5) * dz;
  return z;
}

std::string_view to_string(Plane p) {
  switch (p) {
    case Plane::near: return "near";
    case Plane::far: return "far";
    case Plane::refocused: return "refocused";
  }
  return "unknown";
}

std::vector<cd> DipoleTable::response(double intensity_Wcm2,
                                      StarkMode mode) const {
  const auto mit = magnitude.find(mode);
  if (mit == magnitude.end()) {
    throw DomainError("dipole table has no entry for mode " +
                      std::string(to_string(mode)));
  }
  const auto& mag = mit->second;
  const auto& ph = phase.at(mode);
  const std::size_t nb = omega.size();
  std::vector<cd> out(nb, cd(0.0, 0.0));
  if (intensities_Wcm2.empty() || !(intensity_Wcm2 > 0.0)) return out;
  const double lo = intensities_Wcm2.front();
  const double hi = intensities_Wcm2.back();
  constexpr double tol = 1e-12;
  if (intensity_Wcm2 < lo * (1.0 - tol)) return out;
  if (intensity_Wcm2 > hi * (1.0 + tol)) {
    throw DomainError("intensity above the dipole table");
  }
  std::size_t i = 0;
  double frac = 0.0;
  if (intensities_Wcm2.size() > 1) {
    const double x = std::log(std::clamp(intensity_Wcm2, lo, hi));
    auto it = std::upper_bound(intensities_Wcm2.begin(), intensities_Wcm2.end(),
                               std::exp(x));
    i = static_cast<std::size_t>(std::distance(intensities_Wcm2.begin(), it));
    i = std::clamp<std::size_t>(i, 1, intensities_Wcm2.size() - 1) - 1;
    const double x0 = std::log(intensities_Wcm2[i]);
    const double x1 = std::log(intensities_Wcm2[i + 1]);
    frac = std::clamp((x - x0) / (x1 - x0), 0.0, 1.0);
  }
  for (std::size_t k = 0; k < nb; ++k) {
    double a = mag[i][k];
    double p = ph[i][k];
    if (frac > 0.0) {
      a += frac * (mag[i + 1][k] - a);
      p += frac * (ph[i + 1][k] - p);
    }
    out[k] = std::polar(a, p);
  }
  return out;
}

DipoleTable build_dipole_table(const LaserPulse& pulse,
                               const StarkParameters& params,
                               const LewensteinOptions& options,
                               const DipoleTableSpec& spec,
                               std::span<const StarkMode> modes,
                               Execution exec) {
  const double lo = spec.min_intensity_Wcm2;
  const double hi = spec.max_intensity_Wcm2;
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw DomainError("dipole table needs 0 < min intensity <= max intensity");
  }
  if (!(spec.relative_spacing > 0.0)) {
    throw DomainError("dipole table spacing must be > 0");
  }
  if (modes.empty()) throw DomainError("dipole table needs at least one mode");

  const double f_max = units::field_from_intensity(hi);
  ip_of_field(params, f_max * pulse.polarization);
  ip_of_field(params, -f_max * pulse.polarization);

  DipoleTable table;
  table.omega0 = pulse.omega_au;
  int count = 1;
  if (hi > lo) {
    count = 1 + static_cast<int>(std::ceil(std::log(hi / lo) /
                                           std::log1p(spec.relative_spacing)));
  }
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    table.intensities_Wcm2.push_back(i + 1 == count ? hi
                                                    : lo * std::pow(hi / lo, s));
  }

  std::vector<std::size_t> band;
  for (int i = 0; i < count; ++i) {
    LaserPulse local = pulse;
    local.peak_field_au = units::field_from_intensity(table.intensities_Wcm2[i]);
    const auto signals = dipole_time_series(local, params, modes, options, exec);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const auto spec_m = spectrum(signals[m], spec.window, spec.observable);
      if (band.empty()) {
        for (std::size_t k = 0; k < spec_m.omega.size(); ++k) {
          const double q = spec_m.omega[k] / pulse.omega_au;
          if (q >= spec.min_order && q <= spec.max_order) band.push_back(k);
        }
        if (band.empty()) throw DomainError("dipole table band is empty");
        for (auto k : band) table.omega.push_back(spec_m.omega[k]);
      }
      auto& mag = table.magnitude[modes[m]];
      auto& ph = table.phase[modes[m]];
      std::vector<double> a(band.size()), p(band.size());
      for (std::size_t b = 0; b < band.size(); ++b) {
        const cd x = spec_m.amplitude[band[b]];
        a[b] = std::abs(x);
        p[b] = std::arg(x);
        if (!ph.empty()) {
          const double prev = ph.back()[b];
          p[b] = prev + std::remainder(p[b] - prev, 2.0 * pi);
        }
      }
      mag.push_back(std::move(a));
      ph.push_back(std::move(p));
    }
  }
  return table;
}

namespace {

double exit_plane(const MediumSpec& medium) { return 0.5 * medium.length_cm; }

double intensity_at(const FocusGeometry& focus, double z, double r,
                    double omega0) {
  return focus.peak_intensity_Wcm2 *
         std::norm(gaussian_beam_factor(focus, z, r, omega0));
}

void check_grid(const MacroGrid& grid) {
  if (grid.radial_nodes < 1) throw DomainError("radial grid needs >= 1 node");
  if (!(grid.radial_extent_waists > 0.0)) {
    throw DomainError("radial extent must be > 0");
  }
}

}  // namespace

HankelTransform make_radial_transform(const FocusGeometry& focus,
                                      const MediumSpec& medium, double omega0,
                                      const MacroGrid& grid) {
  check_grid(grid);
  const double w = beam_radius_cm(focus, exit_plane(medium), omega0);
  // A single node is handled by a two-node transform truncated to its first
  // node (see propagate_jet).
  return HankelTransform(std::max(grid.radial_nodes, 2),
                         grid.radial_extent_waists * w);
}

std::pair<double, double> jet_intensity_range(const FocusGeometry& focus,
                                              const MediumSpec& medium,
                                              double omega0,
                                              const MacroGrid& grid) {
  focus.validate();
  medium.validate();
  const auto ht = make_radial_transform(focus, medium, omega0, grid);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double z : medium.slice_positions()) {
    for (int n = 0; n < grid.radial_nodes; ++n) {
      const double i = intensity_at(focus, z, ht.radii()[n], omega0);
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  return {lo, hi};
}

namespace {

// Emission of one slice on (omega x node), phase relative to the fundamental
// at the medium centre on axis.
Eigen::MatrixXcd slice_source(const DipoleTable& table,
                              const FocusGeometry& focus, double z,
                              const std::vector<double>& radii, int nodes,
                              StarkMode mode, double scale, Execution exec) {
  const double omega0 = table.omega0;
  const double ref = std::arg(gaussian_beam_factor(focus, 0.0, 0.0, omega0));
  const long nw = static_cast<long>(table.omega.size());
  Eigen::MatrixXcd src = Eigen::MatrixXcd::Zero(nw, static_cast<long>(radii.size()));
  auto node = [&](int n) {
    const cd g = gaussian_beam_factor(focus, z, radii[n], omega0);
    const double intensity = focus.peak_intensity_Wcm2 * std::norm(g);
    const double psi = std::arg(g) - ref;
    const auto d = table.response(intensity, mode);
    for (long k = 0; k < nw; ++k) {
      const double q = table.omega[k] / omega0;
      src(k, n) = scale * d[k] * std::polar(1.0, q * psi);
    }
  };
  if (exec == Execution::serial) {
    for (int n = 0; n < nodes; ++n) node(n);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (int n = 0; n < nodes; ++n) node(n);
  }
  return src;
}

FieldMap empty_map(const DipoleTable& table, const HankelTransform& ht,
                   int nodes, Plane plane) {
  FieldMap m;
  m.omega = table.omega;
  m.omega0 = table.omega0;
  m.plane = plane;
  m.hankel_nodes = ht.size();
  m.hankel_r_max_cm = ht.r_max();
  const auto& grid = plane == Plane::far ? ht.frequencies() : ht.radii();
  const auto& w =
      plane == Plane::far ? ht.frequency_weights() : ht.radial_weights();
  m.radius.assign(grid.begin(), grid.begin() + nodes);
  m.radial_weights.assign(w.begin(), w.begin() + nodes);
  m.amplitude = Eigen::MatrixXcd::Zero(static_cast<long>(table.omega.size()), nodes);
  return m;
}

// Pads to the transform size with zeros, or returns the block unchanged.
Eigen::MatrixXcd padded(const Eigen::MatrixXcd& a, int size) {
  if (a.cols() == size) return a;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.rows(), size);
  out.leftCols(a.cols()) = a;
  return out;
}

// Paraxial free-space transfer over distance d for spatial frequency rho,
// relative to the harmonic plane wave.
cd transfer(double omega, double rho, double d) {
  const double lambda = units::wavelength_cm(omega);
  return std::polar(1.0, -pi * lambda * d * rho * rho);
}

}  // namespace

FieldMap propagate_jet(const DipoleTable& table, const FocusGeometry& focus,
                       const MediumSpec& medium, StarkMode mode,
                       const MacroGrid& grid, Execution exec) {
  focus.validate();
  medium.validate();
  const auto ht = make_radial_transform(focus, medium, table.omega0, grid);
  const int nodes = grid.radial_nodes;
  const long nw = static_cast<long>(table.omega.size());
  const double dz = medium.length_cm / medium.slices;
  const double scale = medium.density_cm3 * dz;
  const double exit = exit_plane(medium);

  // Each slice is carried to the exit plane in the spatial-frequency domain.
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(nw, ht.size());
  for (double z : medium.slice_positions()) {
    const Eigen::MatrixXcd src = padded(
        slice_source(table, focus, z, ht.radii(), nodes, mode, scale, exec),
        ht.size());
    Eigen::MatrixXcd spec = ht.forward_rows(src, exec);
    for (long k = 0; k < nw; ++k) {
      for (int m = 0; m < ht.size(); ++m) {
        spec(k, m) *= transfer(table.omega[k], ht.frequencies()[m], exit - z);
      }
    }
    acc += spec;
  }
  FieldMap out = empty_map(table, ht, nodes, Plane::near);
  out.amplitude = ht.inverse_rows(acc, exec).leftCols(nodes);
  return out;
}

FieldMap propagate_jet(const LaserPulse& pulse, const FocusGeometry& focus,
                       const MediumSpec& medium, const StarkParameters& params,
                       StarkMode mode, const LewensteinOptions& options,
                       const DipoleTableSpec& table_spec, const MacroGrid& grid,
                       Execution exec) {
  DipoleTableSpec spec = table_spec;
  if (spec.max_intensity_Wcm2 <= 0.0 || spec.min_intensity_Wcm2 <= 0.0) {
    const auto [lo, hi] = jet_intensity_range(focus, medium, pulse.omega_au, grid);
    spec.max_intensity_Wcm2 = hi;
    spec.min_intensity_Wcm2 = std::max(lo, spec.lowest_fraction * hi);
  }
  const StarkMode modes[] = {mode};
  const auto table = build_dipole_table(pulse, params, options, spec, modes, exec);
  return propagate_jet(table, focus, medium, mode, grid, exec);
}

namespace {

HankelTransform transform_of(const FieldMap& map) {
  if (map.hankel_nodes < 2 || !(map.hankel_r_max_cm > 0.0)) {
    throw DomainError("field map carries no radial transform");
  }
  return HankelTransform(map.hankel_nodes, map.hankel_r_max_cm);
}

}  // namespace

FieldMap to_far_field(const FieldMap& near, Execution exec) {
  if (near.plane == Plane::far) {
    throw DomainError("to_far_field needs a near-field map");
  }
  const auto ht = transform_of(near);
  const int nodes = static_cast<int>(near.radius.size());
  FieldMap out = near;
  out.plane = Plane::far;
  out.radius.assign(ht.frequencies().begin(), ht.frequencies().begin() + nodes);
  out.radial_weights.assign(ht.frequency_weights().begin(),
                            ht.frequency_weights().begin() + nodes);
  out.amplitude =
      ht.forward_rows(padded(near.amplitude, ht.size()), exec).leftCols(nodes);
  return out;
}

FieldMap to_near_field(const FieldMap& far, Execution exec) {
  if (far.plane != Plane::far) {
    throw DomainError("to_near_field needs a far-field map");
  }
  const auto ht = transform_of(far);
  const int nodes = static_cast<int>(far.radius.size());
  FieldMap out = far;
  out.plane = Plane::refocused;
  out.radius.assign(ht.radii().begin(), ht.radii().begin() + nodes);
  out.radial_weights.assign(ht.radial_weights().begin(),
                            ht.radial_weights().begin() + nodes);
  out.amplitude =
      ht.inverse_rows(padded(far.amplitude, ht.size()), exec).leftCols(nodes);
  return out;
}

FieldMap apply_filter(const FieldMap& far, const FilterSpec& filter) {
  if (far.plane != Plane::far) {
    throw DomainError("apply_filter needs a far-field map");
  }
  if (!(filter.cutoff_divergence_rad > 0.0)) {
    throw DomainError("filter cutoff must be > 0");
  }
  if (filter.shape == FilterSpec::Shape::super_gaussian && filter.order < 1) {
    throw DomainError("super-Gaussian order must be >= 1");
  }
  FieldMap out = far;
  for (long k = 0; k < out.amplitude.rows(); ++k) {
    const double lambda = units::wavelength_cm(out.omega[k]);
    for (long n = 0; n < out.amplitude.cols(); ++n) {
      const double x = lambda * out.radius[n] / filter.cutoff_divergence_rad;
      double t = 0.0;
      if (filter.shape == FilterSpec::Shape::hard_edge) {
        t = x <= 1.0 ? 1.0 : 0.0;
      } else {
        t = std::exp(-std::pow(x, 2 * filter.order));
      }
      out.amplitude(k, n) *= t;
    }
  }
  return out;
}

double divergence_radius(const FieldMap& far, double omega, double fraction) {
  if (far.plane != Plane::far) {
    throw DomainError("divergence_radius needs a far-field map");
  }
  if (far.omega.empty()) throw DomainError("empty field map");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw DomainError("energy fraction must be in (0, 1]");
  }
  std::size_t k = 0;
  for (std::size_t i = 1; i < far.omega.size(); ++i) {
    if (std::abs(far.omega[i] - omega) < std::abs(far.omega[k] - omega)) k = i;
  }
  const double lambda = units::wavelength_cm(far.omega[k]);
  const long nr = far.amplitude.cols();
  std::vector<double> cum(nr);
  double total = 0.0;
  for (long n = 0; n < nr; ++n) {
    total += std::norm(far.amplitude(static_cast<long>(k), n)) *
             far.radial_weights[n];
    cum[n] = total;
  }
  if (!(total > 0.0)) {
    throw NumericalError("no far-field energy at the reference frequency");
  }
  const double target = fraction * total;
  double prev_c = 0.0, prev_t = 0.0;
  for (long n = 0; n < nr; ++n) {
    const double t = lambda * far.radius[n];
    if (cum[n] >= target) {
      if (n == 0) return t;
      return prev_t + (t - prev_t) * (target - prev_c) / (cum[n] - prev_c);
    }
    prev_c = cum[n];
    prev_t = t;
  }
  return prev_t;
}

PhaseMap extract_phase_map(const FieldMap& with, const FieldMap& without,
                           double ip, const ExtractionOptions& options) {
  if (with.amplitude.rows() != without.amplitude.rows() ||
      with.amplitude.cols() != without.amplitude.cols() ||
      with.omega.size() != without.omega.size()) {
    throw DomainError("extract_phase_map: maps on different grids");
  }
  for (std::size_t n = 0; n < with.radius.size(); ++n) {
    if (with.radius[n] != without.radius[n]) {
      throw DomainError("extract_phase_map: maps on different grids");
    }
  }
  PhaseMap out;
  out.omega = with.omega;
  const long rows = with.amplitude.rows();
  const long cols = with.amplitude.cols();
  out.phase.resize(rows, cols);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> reliable(rows, cols);
  HarmonicSpectrum a, b;
  a.omega = with.omega;
  b.omega = without.omega;
  for (long n = 0; n < cols; ++n) {
    const auto ca = with.amplitude.col(n);
    const auto cb = without.amplitude.col(n);
    a.amplitude.assign(ca.data(), ca.data() + ca.size());
    b.amplitude.assign(cb.data(), cb.data() + cb.size());
    const auto curve = extract_stark_phase(a, b, ip, with.omega0, options);
    for (long k = 0; k < rows; ++k) {
      out.phase(k, n) = curve.phase[k];
      reliable(k, n) = curve.reliable[k];
    }
  }
  if (cols == 0) return out;

  // Columns are unwrapped along frequency one by one, and weak bins can slip
  // a column by whole turns. Put every bin on the branch of its strongest
  // radius, then carry the weighted row mean up in frequency from the first
  // reliable row above ip, whose branch is taken in (-pi, pi].
  const double turn = 2.0 * units::pi;
  std::vector<double> mean(rows, 0.0), energy(rows, 0.0);
  std::vector<bool> ok(rows, false);
  for (long k = 0; k < rows; ++k) {
    long strongest = 0;
    double best = -1.0;
    for (long n = 0; n < cols; ++n) {
      const double w = std::norm(with.amplitude(k, n)) * with.radial_weights[n];
      if (w > best) {
        best = w;
        strongest = n;
      }
    }
    const double ref = out.phase(k, strongest);
    double num = 0.0;
    for (long n = 0; n < cols; ++n) {
      double& v = out.phase(k, n);
      v += turn * std::round((ref - v) / turn);
      const double w = std::norm(with.amplitude(k, n)) * with.radial_weights[n];
      num += w * v;
      energy[k] += w;
    }
    mean[k] = energy[k] > 0.0 ? num / energy[k] : ref;
    ok[k] = with.omega[k] >= ip && reliable(k, strongest);
  }
  long seed = 0;
  while (seed < rows && !ok[seed]) ++seed;
  if (seed == rows) return out;
  auto shift_row = [&](long k, double target) {
    const double s = turn * std::round((target - mean[k]) / turn);
    out.phase.row(k).array() += s;
    mean[k] += s;
  };
  shift_row(seed, std::remainder(mean[seed], turn));
  // Each step is referred to the strongest reliable row within one harmonic
  // spacing below it, so weak bins between harmonics do not steer the chain.
  long last = seed;
  for (long k = seed + 1; k < rows; ++k) {
    long anchor = last;
    for (long j = k - 1; j >= seed; --j) {
      if (with.omega[k] - with.omega[j] > with.omega0) break;
      if (ok[j] && energy[j] > energy[anchor]) anchor = j;
    }
    shift_row(k, mean[anchor] + std::remainder(mean[k] - mean[anchor], turn));
    if (ok[k]) last = k;
  }
  return out;
}

AveragedPhase radial_average_phase(const Eigen::MatrixXd& phase,
                                   const FieldMap& map) {
  if (phase.rows() != map.amplitude.rows() ||
      phase.cols() != map.amplitude.cols()) {
    throw DomainError("radial_average_phase: phase and map differ in shape");
  }
  AveragedPhase out;
  out.omega = map.omega;
  out.phase.assign(map.omega.size(), 0.0);
  out.defined.assign(map.omega.size(), false);
  for (long k = 0; k < phase.rows(); ++k) {
    double num = 0.0, den = 0.0;
    for (long n = 0; n < phase.cols(); ++n) {
      const double w = std::norm(map.amplitude(k, n)) * map.radial_weights[n];
      num += w * phase(k, n);
      den += w;
    }
    if (den > 0.0 && std::isfinite(num / den)) {
      out.phase[k] = num / den;
      out.defined[k] = true;
    }
  }
  return out;
}

FieldMap aligned_ensemble(const DipoleTable& oriented,
                          const DipoleTable& flipped,
                          const FocusGeometry& focus, const MediumSpec& medium,
                          StarkMode mode, const MacroGrid& grid,
                          Execution exec) {
  if (oriented.omega != flipped.omega) {
    throw DomainError("aligned_ensemble: tables on different grids");
  }
  FieldMap a = propagate_jet(oriented, focus, medium, mode, grid, exec);
  const FieldMap b = propagate_jet(flipped, focus, medium, mode, grid, exec);
  a.amplitude += b.amplitude;
  return a;
}

FieldMap aligned_ensemble(const LaserPulse& pulse, const FocusGeometry& focus,
                          const MediumSpec& medium,
                          const StarkParameters& params, StarkMode mode,
                          const LewensteinOptions& options,
                          const DipoleTableSpec& table_spec,
                          const MacroGrid& grid, Execution exec) {
  FieldMap a = propagate_jet(pulse, focus, medium, params, mode, options,
                             table_spec, grid, exec);
  const FieldMap b = propagate_jet(pulse, focus, medium, params.flipped(), mode,
                                   options, table_spec, grid, exec);
  a.amplitude += b.amplitude;
  return a;
}

FilteredExtraction filtered_stark_phase(const FieldMap& near_with,
                                        const FieldMap& near_without,
                                        double ip, double reference_omega,
                                        double cutoff_scale,
                                        FilterSpec::Shape shape,
                                        const ExtractionOptions& options,
                                        Execution exec) {
  FilteredExtraction out;
  out.far_with = to_far_field(near_with, exec);
  out.far_without = to_far_field(near_without, exec);
  out.filter.shape = shape;
  out.filter.cutoff_divergence_rad =
      cutoff_scale * divergence_radius(out.far_without, reference_omega, 0.5);
  out.refocused_with =
      to_near_field(apply_filter(out.far_with, out.filter), exec);
  out.refocused_without =
      to_near_field(apply_filter(out.far_without, out.filter), exec);
  out.phase_map = extract_phase_map(out.refocused_with, out.refocused_without,
                                    ip, options);
  out.averaged = radial_average_phase(out.phase_map.phase, out.refocused_with);
  return out;
}

}  // namespace starkhhg
