#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "starkhhg/lewenstein.hpp"

namespace starkhhg {

enum class Window { cos8, hann, rectangular };
enum class Observable { dipole, acceleration };

std::string_view to_string(Window w);
std::string_view to_string(Observable o);
Window window_from_string(std::string_view s);
Observable observable_from_string(std::string_view s);

// Window samples over the full signal; cos8 is cos^8(pi (t - t_c) / L).
std::vector<double> window_values(Window w, std::size_t n);

struct HarmonicSpectrum {
  std::vector<double> omega;  // k * 2 pi / span, k = 0 .. N/2
  std::vector<std::complex<double>> amplitude;
  StarkMode mode = StarkMode::none;
  Window window = Window::cos8;
  Observable observable = Observable::dipole;
};

// X(omega_k) = dt * sum_n w_n s_n exp(+i omega_k t_n) over all N bins, with s
// the dipole or its second finite difference. Fields ~ exp(-i omega t) land
// on positive omega.
std::vector<std::complex<double>> full_transform(const DipoleSignal& dipole,
                                                 Window window,
                                                 Observable observable);

HarmonicSpectrum spectrum(const DipoleSignal& dipole,
                          Window window = Window::cos8,
                          Observable observable = Observable::dipole);

struct ExtractionOptions {
  // A bin is unreliable where either amplitude is below this fraction of its
  // maximum within +-omega0 (spectral minima) ...
  double relative_floor = 0.1;
  // ... or below this fraction of the global maximum above threshold.
  double noise_floor = 1e-6;
};

struct PhaseCurve {
  std::vector<double> omega;
  std::vector<double> phase;
  std::vector<bool> reliable;
};

// Phi(omega) = arg X_with - arg X_without, unwrapped upwards from the first
// reliable bin above `ip`. Unreliable bins are unwrapped against the last
// reliable value so spikes do not shift later bins by 2 pi. Throws
// DomainError on mismatched grids.
PhaseCurve extract_stark_phase(const HarmonicSpectrum& with,
                               const HarmonicSpectrum& without, double ip,
                               double omega0,
                               const ExtractionOptions& options = {});

// Phase of sum_k X_with conj(X_without) over |omega_k - centre| <= half_width:
// the phase difference of a whole harmonic band.
double band_phase_difference(const HarmonicSpectrum& with,
                             const HarmonicSpectrum& without, double centre,
                             double half_width);

struct ExtractionRun {
  HarmonicSpectrum with, without;
  PhaseCurve phase;
};

// Both dipoles from one pass, then spectra and extraction.
ExtractionRun run_extraction(const LaserPulse& pulse,
                             const StarkParameters& params, StarkMode with,
                             StarkMode without,
                             const LewensteinOptions& options = {},
                             Window window = Window::cos8,
                             Observable observable = Observable::dipole,
                             const ExtractionOptions& extraction = {},
                             Execution exec = Execution::parallel);

}  // namespace starkhhg
