#include "starkhhg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fftw3.h>

#include "starkhhg/errors.hpp"
#include "starkhhg/units.hpp"

namespace starkhhg {

using units::pi;

std::string_view to_string(Window w) {
  switch (w) {
    case Window::cos8: return "cos8";
    case Window::hann: return "hann";
    case Window::rectangular: return "rectangular";
  }
  return "unknown";
}

std::string_view to_string(Observable o) {
  return o == Observable::dipole ? "dipole" : "acceleration";
}

Window window_from_string(std::string_view s) {
  if (s == "cos8") return Window::cos8;
  if (s == "hann") return Window::hann;
  if (s == "rectangular" || s == "rect") return Window::rectangular;
  throw ConfigError("window", "unknown window '" + std::string(s) + "'");
}

Observable observable_from_string(std::string_view s) {
  if (s == "dipole") return Observable::dipole;
  if (s == "acceleration") return Observable::acceleration;
  throw ConfigError("observable", "unknown observable '" + std::string(s) + "'");
}

std::vector<double> window_values(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::rectangular) return out;
  const double len = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(pi * (static_cast<double>(i) - 0.5 * len) / len);
    out[i] = w == Window::hann ? c * c : std::pow(c, 8);
  }
  return out;
}

std::vector<std::complex<double>> full_transform(const DipoleSignal& dipole,
                                                 Window window,
                                                 Observable observable) {
  const std::size_t n = dipole.samples.size();
  std::vector<std::complex<double>> buf(n);
  if (n == 0) return buf;
  const auto w = window_values(window, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> s = dipole.samples[i];
    if (observable == Observable::acceleration) {
      if (i == 0 || i + 1 == n) {
        s = 0.0;
      } else {
        s = (dipole.samples[i + 1] - 2.0 * dipole.samples[i] +
             dipole.samples[i - 1]) /
            (dipole.dt * dipole.dt);
      }
    }
    buf[i] = w[i] * s;
  }
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  // Planner calls are not thread-safe.
#pragma omp critical(fftw_planner)
  plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_BACKWARD,
                          FFTW_ESTIMATE);
  fftw_execute(plan);
#pragma omp critical(fftw_planner)
  fftw_destroy_plan(plan);
  for (auto& x : buf) x *= dipole.dt;
  return buf;
}

HarmonicSpectrum spectrum(const DipoleSignal& dipole, Window window,
                          Observable observable) {
  auto full = full_transform(dipole, window, observable);
  const std::size_t n = full.size();
  HarmonicSpectrum out;
  out.mode = dipole.mode;
  out.window = window;
  out.observable = observable;
  const double dw = 2.0 * pi / dipole.span();
  for (std::size_t k = 0; k <= n / 2 && k < n; ++k) {
    out.omega.push_back(dw * static_cast<double>(k));
    out.amplitude.push_back(full[k]);
  }
  return out;
}

namespace {

double wrap(double x) { return std::remainder(x, 2.0 * pi); }

}  // namespace

PhaseCurve extract_stark_phase(const HarmonicSpectrum& with,
                               const HarmonicSpectrum& without, double ip,
                               double omega0,
                               const ExtractionOptions& options) {
  const std::size_t n = with.omega.size();
  if (n != without.omega.size() || with.window != without.window ||
      with.observable != without.observable) {
    throw DomainError("extract_stark_phase: spectra on different grids");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(with.omega[k] - without.omega[k]) >
        1e-12 * std::max(1.0, std::abs(with.omega[k]))) {
      throw DomainError("extract_stark_phase: spectra on different grids");
    }
  }
  PhaseCurve out;
  out.omega = with.omega;
  out.phase.assign(n, 0.0);
  out.reliable.assign(n, false);
  if (n == 0) return out;

  const double dw = n > 1 ? with.omega[1] - with.omega[0] : 1.0;
  const long half = std::max(1L, std::lround(omega0 / dw));
  auto local_ok = [&](const HarmonicSpectrum& s, std::size_t k, double global) {
    const double a = std::abs(s.amplitude[k]);
    if (a < options.noise_floor * global || a == 0.0) return false;
    double peak = 0.0;
    const long lo = std::max(0L, static_cast<long>(k) - half);
    const long hi = std::min(static_cast<long>(n) - 1, static_cast<long>(k) + half);
    for (long j = lo; j <= hi; ++j) peak = std::max(peak, std::abs(s.amplitude[j]));
    return a >= options.relative_floor * peak;
  };
  double gmax_with = 0.0, gmax_without = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (with.omega[k] < ip) continue;
    gmax_with = std::max(gmax_with, std::abs(with.amplitude[k]));
    gmax_without = std::max(gmax_without, std::abs(without.amplitude[k]));
  }

  std::vector<double> raw(n);
  for (std::size_t k = 0; k < n; ++k) {
    raw[k] = std::arg(with.amplitude[k] * std::conj(without.amplitude[k]));
    out.phase[k] = raw[k];
    out.reliable[k] = with.omega[k] >= ip &&
                      local_ok(with, k, gmax_with) &&
                      local_ok(without, k, gmax_without);
  }
  std::size_t seed = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (out.reliable[k]) {
      seed = k;
      break;
    }
  }
  if (seed == n) return out;
  double anchor = raw[seed];
  for (std::size_t k = seed + 1; k < n; ++k) {
    out.phase[k] = anchor + wrap(raw[k] - anchor);
    if (out.reliable[k]) anchor = out.phase[k];
  }
  return out;
}

double band_phase_difference(const HarmonicSpectrum& with,
                             const HarmonicSpectrum& without, double centre,
                             double half_width) {
  if (with.omega.size() != without.omega.size()) {
    throw DomainError("band_phase_difference: spectra on different grids");
  }
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < with.omega.size(); ++k) {
    if (std::abs(with.omega[k] - centre) <= half_width) {
      acc += with.amplitude[k] * std::conj(without.amplitude[k]);
    }
  }
  return std::arg(acc);
}

ExtractionRun run_extraction(const LaserPulse& pulse,
                             const StarkParameters& params, StarkMode with,
                             StarkMode without,
                             const LewensteinOptions& options, Window window,
                             Observable observable,
                             const ExtractionOptions& extraction,
                             Execution exec) {
  const StarkMode modes[] = {with, without};
  const auto signals = dipole_time_series(pulse, params, modes, options, exec);
  ExtractionRun run;
  run.with = spectrum(signals[0], window, observable);
  run.without = spectrum(signals[1], window, observable);
  run.phase = extract_stark_phase(run.with, run.without, params.field_free_ip(),
                                  pulse.omega_au, extraction);
  return run;
}

}  // namespace starkhhg
