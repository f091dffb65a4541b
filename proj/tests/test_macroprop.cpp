#include <cmath>
#include <random>

#include "doctest.h"

#include "starkhhg/errors.hpp"
#include "starkhhg/macroprop.hpp"
#include "starkhhg/units.hpp"

using namespace starkhhg;
using units::pi;
using cd = std::complex<double>;

namespace {

const double w0 = units::angular_frequency_from_wavelength(800.0);

// Smooth synthetic single-molecule response on an 8-cycle frequency grid.
// The Stark mode adds an intensity-dependent phase and a small amplitude tilt.
DipoleTable synthetic_table(double stark_sign = 1.0) {
  DipoleTable t;
  t.omega0 = w0;
  for (double q = 5.0; q <= 40.0; q += 0.125) t.omega.push_back(q * w0);
  const int count = 1 + static_cast<int>(std::ceil(std::log(4.0) / std::log1p(0.01)));
  for (int i = 0; i < count; ++i) {
    t.intensities_Wcm2.push_back(1e14 * std::pow(4.0, static_cast<double>(i) / (count - 1)));
  }
  for (StarkMode m : {StarkMode::none, StarkMode::first_order}) {
    auto& mag = t.magnitude[m];
    auto& ph = t.phase[m];
    for (double inten : t.intensities_Wcm2) {
      const double s = inten / 1e14;
      std::vector<double> a, p;
      for (double w : t.omega) {
        const double q = w / w0;
        const double harmonic = 0.3 + std::pow(std::cos(pi * q / 2), 2);
        double amp = s * s * std::exp(-std::pow((q - 18) / (12 + 4 * s), 2)) * harmonic;
        double phase = -0.35 * s * q + 0.02 * q * q;
        if (m == StarkMode::first_order) {
          amp *= 1.0 + 0.01 * stark_sign * (q - 20) / 20;
          phase += stark_sign * 0.06 * std::sqrt(std::max(q * w0 - 0.515, 0.0) / w0) * s;
        }
        a.push_back(amp);
        p.push_back(phase);
      }
      mag.push_back(a);
      ph.push_back(p);
    }
  }
  return t;
}

MediumSpec medium(int slices = 21, double density = 5e14) {
  MediumSpec m;
  m.slices = slices;
  m.density_cm3 = density;
  return m;
}

FocusGeometry focus() {
  FocusGeometry f;
  f.peak_intensity_Wcm2 = 3.0e14;
  return f;
}

double row_energy(const FieldMap& m, long k) {
  double e = 0.0;
  for (long n = 0; n < m.amplitude.cols(); ++n) {
    e += std::norm(m.amplitude(k, n)) * m.radial_weights[n];
  }
  return e;
}

}  // namespace

TEST_CASE("dipole table lookup") {
  const auto t = synthetic_table();
  const auto& mag = t.magnitude.at(StarkMode::none);
  const auto& ph = t.phase.at(StarkMode::none);
  for (std::size_t i : {std::size_t{0}, std::size_t{50}, t.intensities_Wcm2.size() - 1}) {
    const auto r = t.response(t.intensities_Wcm2[i], StarkMode::none);
    for (std::size_t k = 0; k < t.omega.size(); k += 17) {
      CHECK(std::abs(r[k] - std::polar(mag[i][k], ph[i][k])) <= 1e-14 * (mag[i][k] + 1e-300));
    }
  }
  const double mid = std::sqrt(t.intensities_Wcm2[10] * t.intensities_Wcm2[11]);
  const auto r = t.response(mid, StarkMode::none);
  CHECK(std::arg(r[40]) ==
        doctest::Approx(std::remainder(0.5 * (ph[10][40] + ph[11][40]), 2 * pi)));
  for (const auto& x : t.response(0.5e14, StarkMode::none)) CHECK(x == cd(0, 0));
  CHECK_THROWS_AS(t.response(5e14, StarkMode::none), DomainError);
  CHECK_THROWS_AS(t.response(2e14, StarkMode::first_and_second), DomainError);
}

TEST_CASE("jet geometry") {
  const auto [lo, hi] = jet_intensity_range(focus(), medium(), w0, {});
  const double mid = 3.0e14 * std::norm(gaussian_beam_factor(focus(), 0.0, 0.0, w0));
  CHECK(mid == doctest::Approx(3.0e14 / 1.49).epsilon(0.03));
  CHECK(hi >= mid);
  CHECK(lo < 0.01 * hi);
  const auto z = medium(5).slice_positions();
  CHECK(z.front() == doctest::Approx(-0.2));
  CHECK(z.back() == doctest::Approx(0.2));
  MediumSpec bad;
  bad.slices = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = MediumSpec{};
  bad.length_cm = -1;
  CHECK_THROWS_AS(propagate_jet(synthetic_table(), focus(), bad, StarkMode::none), DomainError);
}

TEST_CASE("density scaling") {
  const auto t = synthetic_table();
  const MacroGrid g{32, 4.0};
  const auto zero = propagate_jet(t, focus(), medium(5, 0.0), StarkMode::none, g);
  CHECK(zero.amplitude.norm() == 0.0);
  const auto a = propagate_jet(t, focus(), medium(5, 1e14), StarkMode::none, g);
  const auto b = propagate_jet(t, focus(), medium(5, 3e14), StarkMode::none, g);
  CHECK(a.amplitude.norm() > 0.0);
  CHECK((b.amplitude - 3.0 * a.amplitude).norm() <= 1e-12 * b.amplitude.norm());
  CHECK(a.plane == Plane::near);
  CHECK(a.radius.size() == 32);
}

TEST_CASE("serial and parallel propagation agree") {
  const auto t = synthetic_table();
  const MacroGrid g{32, 4.0};
  const auto a = propagate_jet(t, focus(), medium(5), StarkMode::none, g, Execution::serial);
  const auto b = propagate_jet(t, focus(), medium(5), StarkMode::none, g, Execution::parallel);
  CHECK((a.amplitude - b.amplitude).norm() == 0.0);
}

TEST_CASE("far field and filter") {
  const auto t = synthetic_table();
  const MacroGrid g{64, 4.0};
  const auto near = propagate_jet(t, focus(), medium(7), StarkMode::none, g);
  CHECK_THROWS_AS(apply_filter(near, {}), DomainError);
  CHECK_THROWS_AS(to_near_field(near), DomainError);
  const auto far = to_far_field(near);
  CHECK(far.plane == Plane::far);
  CHECK_THROWS_AS(to_far_field(far), DomainError);
  const auto back = to_near_field(far);
  CHECK(back.plane == Plane::refocused);
  CHECK((back.amplitude - near.amplitude).norm() <= 1e-8 * near.amplitude.norm());

  FilterSpec open{FilterSpec::Shape::hard_edge, 1e3, 4};
  CHECK((apply_filter(far, open).amplitude - far.amplitude).norm() == 0.0);
  open.shape = FilterSpec::Shape::super_gaussian;
  CHECK((apply_filter(far, open).amplitude - far.amplitude).norm() <= 1e-12 * far.amplitude.norm());
  FilterSpec shut{FilterSpec::Shape::hard_edge, 1e-12, 4};
  CHECK(apply_filter(far, shut).amplitude.norm() == 0.0);

  const double theta = divergence_radius(far, 21 * w0, 0.5);
  CHECK(theta > 0.0);
  for (auto shape : {FilterSpec::Shape::hard_edge, FilterSpec::Shape::super_gaussian}) {
    for (double scale : {0.3, 1.0, 3.0}) {
      const auto f = apply_filter(far, {shape, scale * theta, 4});
      for (long k = 0; k < far.amplitude.rows(); k += 11) {
        CHECK(row_energy(f, k) <= row_energy(far, k) * (1 + 1e-14));
      }
    }
  }
  FilterSpec bad_order{FilterSpec::Shape::super_gaussian, theta, 0};
  CHECK_THROWS_AS(apply_filter(far, bad_order), DomainError);
  CHECK_THROWS_AS(divergence_radius(far, 21 * w0, 0.0), DomainError);
}

TEST_CASE("divergence radius of a Gaussian far field") {
  FieldMap far;
  far.plane = Plane::far;
  far.omega = {21 * w0};
  HankelTransform ht(256, 2.0);
  far.radius = ht.frequencies();
  far.radial_weights = ht.frequency_weights();
  far.amplitude.resize(1, ht.size());
  const double a = 8.0;  // |F|^2 = exp(-rho^2 / a^2)
  for (int n = 0; n < ht.size(); ++n) {
    far.amplitude(0, n) = std::exp(-0.5 * far.radius[n] * far.radius[n] / (a * a));
  }
  const double expect = units::wavelength_cm(21 * w0) * a * std::sqrt(std::log(2.0));
  CHECK(divergence_radius(far, 21 * w0, 0.5) == doctest::Approx(expect).epsilon(2e-3));
}

TEST_CASE("radial average") {
  FieldMap m;
  m.omega = {1.0, 2.0, 3.0};
  m.radius = {0.1, 0.2, 0.3, 0.4};
  m.radial_weights = {0.1, 0.2, 0.3, 0.4};
  m.amplitude = Eigen::MatrixXcd::Zero(3, 4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 4; ++n) m.amplitude(k, n) = cd(u(rng), u(rng));
  Eigen::MatrixXd phase(3, 4);
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 4; ++n) phase(k, n) = u(rng);

  const auto avg = radial_average_phase(phase, m);
  for (int k = 0; k < 2; ++k) {
    CHECK(avg.defined[k]);
    CHECK(avg.phase[k] >= phase.row(k).minCoeff());
    CHECK(avg.phase[k] <= phase.row(k).maxCoeff());
  }
  CHECK(!avg.defined[2]);
  CHECK(avg.phase[2] == 0.0);

  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(3, 4, 0.7);
  CHECK(radial_average_phase(flat, m).phase[0] == doctest::Approx(0.7).epsilon(1e-14));

  auto single = m;
  single.amplitude.setZero();
  single.amplitude(1, 2) = 1.0;
  CHECK(radial_average_phase(phase, single).phase[1] == phase(1, 2));
  CHECK_THROWS_AS(radial_average_phase(Eigen::MatrixXd(2, 4), m), DomainError);
}

TEST_CASE("phase map columns stay on one branch across radius") {
  FieldMap with, without;
  with.omega0 = without.omega0 = w0;
  for (int q = 11; q <= 20; ++q) with.omega.push_back(q * w0);
  without.omega = with.omega;
  with.radius = without.radius = {0.1, 0.2};
  with.radial_weights = without.radial_weights = {1.0, 1.0};
  without.amplitude = Eigen::MatrixXcd::Ones(10, 2);
  with.amplitude.resize(10, 2);
  for (int k = 0; k < 10; ++k) {
    const cd v = std::polar(1.0, -0.1 * k);
    with.amplitude(k, 0) = v;
    with.amplitude(k, 1) = v;
  }
  // A stray first bin makes the second column unwrap one turn away.
  with.amplitude(0, 1) = std::polar(1.0, 3.1);
  const auto map = extract_phase_map(with, without, 0.515);
  for (int k = 1; k < 10; ++k) {
    CHECK(map.phase(k, 1) == doctest::Approx(map.phase(k, 0)).epsilon(1e-12));
  }
}

TEST_CASE("a weak bin between harmonics does not slip the phase map") {
  FieldMap with, without;
  with.omega0 = without.omega0 = w0;
  for (int k = 0; k < 16; ++k) with.omega.push_back((11.0 + 0.25 * k) * w0);
  without.omega = with.omega;
  with.radius = without.radius = {0.1, 0.2};
  with.radial_weights = without.radial_weights = {1.0, 1.0};
  without.amplitude = Eigen::MatrixXcd::Ones(16, 2);
  with.amplitude.resize(16, 2);
  for (int k = 0; k < 16; ++k) {
    const cd v = k == 4 ? std::polar(0.3, 2.7) : std::polar(1.0, -0.1 * k);
    with.amplitude(k, 0) = v;
    with.amplitude(k, 1) = v;
  }
  const auto map = extract_phase_map(with, without, 0.515);
  for (int k = 0; k < 16; ++k) {
    if (k == 4) continue;
    CHECK(map.phase(k, 0) == doctest::Approx(-0.1 * k).epsilon(1e-12));
    CHECK(map.phase(k, 1) == doctest::Approx(-0.1 * k).epsilon(1e-12));
  }
}

TEST_CASE("aligned ensemble") {
  const auto t = synthetic_table();
  const MacroGrid g{32, 4.0};
  const auto one = propagate_jet(t, focus(), medium(5), StarkMode::none, g);
  const auto two = aligned_ensemble(t, t, focus(), medium(5), StarkMode::none, g);
  CHECK((two.amplitude - 2.0 * one.amplitude).norm() <= 1e-14 * two.amplitude.norm());

  // Opposite Stark phases cancel in the sum to first order.
  const auto flipped = synthetic_table(-1.0);
  const auto sum = aligned_ensemble(t, flipped, focus(), medium(5), StarkMode::first_order, g);
  const auto ref = aligned_ensemble(t, t, focus(), medium(5), StarkMode::none, g);
  const auto phase = extract_phase_map(sum, ref, 0.515);
  const auto single = extract_phase_map(
      propagate_jet(t, focus(), medium(5), StarkMode::first_order, g), one, 0.515);
  const long k21 = static_cast<long>((21.0 - 5.0) / 0.125);
  CHECK(std::abs(phase.phase(k21, 0)) < 0.2 * std::abs(single.phase(k21, 0)));
}

TEST_CASE("one slice and one node reduce to the single molecule") {
  const auto t = synthetic_table();
  const MacroGrid g{1, 0.5};
  MediumSpec m = medium(1);
  m.length_cm = 1e-3;
  FocusGeometry f = focus();
  // Local intensity at the node, then a one-entry table at exactly that value.
  const auto ht = make_radial_transform(f, m, w0, g);
  const double local = f.peak_intensity_Wcm2 *
                       std::norm(gaussian_beam_factor(f, 0.0, ht.radii()[0], w0));
  REQUIRE(local > t.intensities_Wcm2.front());
  DipoleTable one;
  one.omega = t.omega;
  one.omega0 = w0;
  one.intensities_Wcm2 = {local};
  for (StarkMode mode : {StarkMode::none, StarkMode::first_order}) {
    const auto r = t.response(local, mode);
    std::vector<double> a, p;
    for (const auto& x : r) {
      a.push_back(std::abs(x));
      p.push_back(std::arg(x));
    }
    one.magnitude[mode] = {a};
    one.phase[mode] = {p};
  }

  HarmonicSpectrum sw, so;
  sw.omega = so.omega = one.omega;
  sw.amplitude = one.response(local, StarkMode::first_order);
  so.amplitude = one.response(local, StarkMode::none);
  const auto single = extract_stark_phase(sw, so, 0.515, w0);

  const auto with = propagate_jet(one, f, m, StarkMode::first_order, g);
  const auto without = propagate_jet(one, f, m, StarkMode::none, g);
  REQUIRE(with.amplitude.cols() == 1);
  const auto direct = extract_phase_map(with, without, 0.515);
  const auto filtered = filtered_stark_phase(with, without, 0.515, 21 * w0, 100.0);

  int compared = 0;
  for (std::size_t k = 0; k < single.omega.size(); ++k) {
    const double q = single.omega[k] / w0;
    if (q < 10 || q > 35 || !single.reliable[k]) continue;
    CHECK(std::abs(direct.phase(static_cast<long>(k), 0) - single.phase[k]) < 1e-8);
    CHECK(filtered.averaged.defined[k]);
    CHECK(std::abs(filtered.averaged.phase[k] - single.phase[k]) < 1e-8);
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("grid convergence of the averaged phase") {
  const auto t = synthetic_table();
  auto run = [&](int nodes, int slices) {
    const MacroGrid g{nodes, 4.0};
    const auto with = propagate_jet(t, focus(), medium(slices), StarkMode::first_order, g);
    const auto without = propagate_jet(t, focus(), medium(slices), StarkMode::none, g);
    return filtered_stark_phase(with, without, 0.515, 21 * w0).averaged;
  };
  const auto base = run(64, 11);
  const auto more_nodes = run(128, 11);
  const auto more_slices = run(64, 21);
  auto rms = [&](const AveragedPhase& a, const AveragedPhase& b) {
    double s = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < a.omega.size(); ++k) {
      const double q = a.omega[k] / w0;
      if (q < 13 || q > 25 || !a.defined[k] || !b.defined[k]) continue;
      s += std::pow(a.phase[k] - b.phase[k], 2);
      ++n;
    }
    return std::sqrt(s / n);
  };
  const double dn = rms(base, more_nodes);
  const double ds = rms(base, more_slices);
  MESSAGE("rms change: nodes " << dn << " rad, slices " << ds << " rad");
  CHECK(dn < 0.02);
  CHECK(ds < 0.02);
}

TEST_CASE("table construction guards") {
  const auto p = LaserPulse::from_wavelength(800.0, 0.05);
  auto co = StarkParameters::carbon_monoxide();
  co.dipole_au = 5.0;
  co.alpha_parallel_au = co.alpha_perpendicular_au = 0.0;
  DipoleTableSpec spec;
  spec.min_intensity_Wcm2 = 1e14;
  spec.max_intensity_Wcm2 = 3e15;
  const StarkMode modes[] = {StarkMode::none};
  CHECK_THROWS_AS(build_dipole_table(p, co, {}, spec, modes), NumericalError);
  spec.max_intensity_Wcm2 = 0.5e14;
  CHECK_THROWS_AS(build_dipole_table(p, co, {}, spec, modes), DomainError);
  spec.max_intensity_Wcm2 = 2e14;
  CHECK_THROWS_AS(build_dipole_table(p, co, {}, spec, {}), DomainError);
}
