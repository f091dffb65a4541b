#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "starkhhg/errors.hpp"
#include "starkhhg/kernels.hpp"
#include "starkhhg/lewenstein.hpp"
#include "starkhhg/spectrum.hpp"
#include "starkhhg/units.hpp"

using namespace starkhhg;
using units::pi;

namespace {

LewensteinOptions short_grid() {
  LewensteinOptions o;
  o.span_cycles = 1.0;
  o.tau_max_cycles = 0.5;
  return o;
}

double max_abs(const std::vector<std::complex<double>>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("optimized kernel matches the reference") {
  const auto p = LaserPulse::from_wavelength(800.0, 0.071);
  for (bool symmetric : {false, true}) {
    auto o = short_grid();
    o.symmetric_ionization = symmetric;
    const auto co = StarkParameters::carbon_monoxide(0.4);
    const auto grid = kernels::make_dipole_grid(p, co, o);
    const StarkMode modes[] = {StarkMode::none, StarkMode::first_order,
                               StarkMode::first_and_second};
    const auto fast = kernels::dipole_kernel(grid, modes, Execution::serial);
    for (std::size_t m = 0; m < 3; ++m) {
      const auto ref = kernels::dipole_reference(grid, modes[m]);
      const double scale = max_abs(ref);
      REQUIRE(scale > 0.0);
      double worst = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        worst = std::max(worst, std::abs(ref[i] - fast[m][i]));
      }
      CHECK_MESSAGE(worst < 1e-10 * scale, "mode " << to_string(modes[m])
                                                    << " symmetric " << symmetric);
    }
  }
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  const auto p = LaserPulse::from_wavelength(800.0, 0.071);
  const auto co = StarkParameters::carbon_monoxide();
  const StarkMode modes[] = {StarkMode::none, StarkMode::first_and_second};
  const auto a = dipole_time_series(p, co, modes, short_grid(), Execution::serial);
  const auto b = dipole_time_series(p, co, modes, short_grid(), Execution::parallel);
  for (std::size_t m = 0; m < 2; ++m) {
    REQUIRE(a[m].samples.size() == b[m].samples.size());
    CHECK(std::equal(a[m].samples.begin(), a[m].samples.end(), b[m].samples.begin()));
  }
}

TEST_CASE("trivial dipoles") {
  auto p = LaserPulse::from_wavelength(800.0, 0.0);
  const auto co = StarkParameters::carbon_monoxide();
  const auto d = dipole_time_series(p, co, StarkMode::first_order, short_grid());
  CHECK(max_abs(d.samples) == 0.0);

  p.peak_field_au = 0.071;
  auto nodip = co;
  nodip.dipole_au = 0.0;
  const StarkMode modes[] = {StarkMode::none, StarkMode::first_order};
  const auto s = dipole_time_series(p, nodip, modes, short_grid());
  double diff = 0.0;
  for (std::size_t i = 0; i < s[0].samples.size(); ++i) {
    diff = std::max(diff, std::abs(s[0].samples[i] - s[1].samples[i]));
  }
  CHECK(diff <= 1e-12 * max_abs(s[0].samples));
  CHECK(s[0].samples[0] == std::complex<double>(0.0, 0.0));
  CHECK(s[0].dt == doctest::Approx(p.period() / 4096));
  CHECK(s[0].span() == doctest::Approx(p.period()));
}

TEST_CASE("grid validation") {
  const auto p = LaserPulse::from_wavelength(800.0, 0.071);
  const auto co = StarkParameters::carbon_monoxide();
  auto o = short_grid();
  o.samples_per_cycle = 2048;
  CHECK_THROWS_AS(dipole_time_series(p, co, StarkMode::none, o), ConfigError);
  o = short_grid();
  o.tau_max_cycles = 3.5;
  CHECK_THROWS_AS(dipole_time_series(p, co, StarkMode::none, o), ConfigError);
  o = short_grid();
  o.epsilon_au = 0.0;
  CHECK_THROWS_AS(dipole_time_series(p, co, StarkMode::none, o), ConfigError);
  o = short_grid();
  o.tau_min_cycles = 0.3;
  CHECK_THROWS_AS(dipole_time_series(p, co, StarkMode::none, o), ConfigError);
  CHECK_THROWS_AS(stark_mode_from_string("third"), ConfigError);
  CHECK(stark_mode_from_string("first_and_second") == StarkMode::first_and_second);
}

TEST_CASE("model orbital") {
  const auto p = LaserPulse::from_wavelength(800.0, 0.071);
  const auto orb = ModelOrbital::from(StarkParameters::carbon_monoxide(), p);
  CHECK(orb.kappa == doctest::Approx(std::sqrt(2 * 0.5150)));
  CHECK(orb.centre_along_field == doctest::Approx(-1.1));
  // Normalization of the momentum wavefunction: int |psi(p)|^2 d^3p = 1.
  double norm = 0.0;
  const double dp = 1e-3;
  for (double k = 0.5 * dp; k < 40.0; k += dp) {
    norm += 4 * pi * k * k * std::norm(orb.momentum_wavefunction(k)) * dp;
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("reference pulse spectrum and extraction") {
  const auto p = LaserPulse::from_wavelength(800.0, 0.071);
  const auto co = StarkParameters::carbon_monoxide();
  const auto run = run_extraction(p, co, StarkMode::first_order, StarkMode::none);
  const double w0 = p.omega_au;

  auto band = [&](double lo, double hi) {
    double s = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < run.without.omega.size(); ++k) {
      const double q = run.without.omega[k] / w0;
      if (q >= lo && q <= hi) {
        s += std::norm(run.without.amplitude[k]);
        ++n;
      }
    }
    return s / n;
  };
  // Plateau then cutoff.
  const double cutoff = (3.17 * p.ponderomotive_energy() + 0.5150) / w0;
  MESSAGE("3.17 Up + Ip = H" << cutoff);
  CHECK(band(13, 19) > 100 * band(cutoff + 6, cutoff + 10));

  // Flipping the molecule flips the extracted first-order phase.
  const auto flip = run_extraction(p, co.flipped(), StarkMode::first_order, StarkMode::none);
  std::vector<double> ratio;
  for (std::size_t k = 0; k < run.phase.omega.size(); ++k) {
    const double q = run.phase.omega[k] / w0;
    if (q < 12 || q > 22 || !run.phase.reliable[k] || !flip.phase.reliable[k]) continue;
    ratio.push_back(flip.phase.phase[k] / run.phase.phase[k]);
  }
  REQUIRE(ratio.size() > 10);
  std::sort(ratio.begin(), ratio.end());
  const double median = ratio[ratio.size() / 2];
  MESSAGE("median flipped/oriented ratio " << median);
  CHECK(median < -0.5);
  CHECK(median > -2.0);

  // A common phase rotation of both runs leaves the extraction unchanged.
  auto a = run.with;
  auto b = run.without;
  for (auto& x : a.amplitude) x *= std::polar(1.0, 0.83);
  for (auto& x : b.amplitude) x *= std::polar(1.0, 0.83);
  const auto rotated = extract_stark_phase(a, b, co.field_free_ip(), w0);
  for (std::size_t k = 0; k < rotated.phase.size(); ++k) {
    CHECK(std::abs(rotated.phase[k] - run.phase.phase[k]) < 1e-9);
  }
}
