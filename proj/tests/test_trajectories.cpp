#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "starkhhg/errors.hpp"
#include "starkhhg/trajectories.hpp"
#include "starkhhg/units.hpp"

using namespace starkhhg;
using units::pi;

namespace {

LaserPulse reference_pulse() { return LaserPulse::from_wavelength(800.0, 0.071); }

LaserPulse flat_top(double intensity, double cycles) {
  auto p = LaserPulse::from_wavelength(800.0, units::field_from_intensity(intensity), cycles);
  p.envelope_shape = Envelope::flat_top;
  return p;
}

struct Landing {
  double t = 0.0;
  double v = 0.0;
  bool found = false;
};

// x'' = -F(t), x(t') = 0, v(t') = 0, integrated by RK4 until the first sign
// change of x; the crossing is refined by bisection on a single RK4 step.
Landing rk4_first_return(const LaserPulse& p, double t_ion, int steps_per_cycle) {
  const double h = p.period() / steps_per_cycle;
  auto acc = [&](double t) { return -p.field(t); };
  auto step = [&](double t, double x, double v, double dt, double& xn, double& vn) {
    const double k1x = v, k1v = acc(t);
    const double k2x = v + 0.5 * dt * k1v, k2v = acc(t + 0.5 * dt);
    const double k3x = v + 0.5 * dt * k2v, k3v = k2v;
    const double k4x = v + dt * k3v, k4v = acc(t + dt);
    xn = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    vn = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  };
  double t = t_ion, x = 0.0, v = 0.0;
  const double end = p.duration();
  int n = 0;
  while (t + h <= end) {
    double xn, vn;
    step(t, x, v, h, xn, vn);
    if (n > 2 && (xn < 0) != (x < 0)) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        double xm, vm;
        step(t, x, v, mid, xm, vm);
        if ((xm < 0) == (x < 0)) lo = mid; else hi = mid;
      }
      double xm, vm;
      step(t, x, v, lo, xm, vm);
      return {t + lo, vm, true};
    }
    t += h;
    x = xn;
    v = vn;
    ++n;
  }
  return {};
}

}  // namespace

TEST_CASE("returns against an RK4 oracle") {
  const auto p = reference_pulse();
  const VectorPotential vp(p);
  int compared = 0;
  for (double x = 0.30; x < 1.60; x += 0.0731) {
    const double t_ion = x * p.period();
    if (p.field(t_ion) == 0.0) continue;
    const auto roots = solve_returns(vp, t_ion);
    const auto oracle = rk4_first_return(p, t_ion, 100000);
    CHECK(roots.empty() == !oracle.found);
    if (roots.empty() || !oracle.found) continue;
    const double v = vp.along(roots[0]) - vp.along(t_ion);
    CHECK(roots[0] == doctest::Approx(oracle.t).epsilon(1e-4));
    CHECK(std::abs(v - oracle.v) <= 1e-4 * std::max(std::abs(oracle.v), 1e-2));
    ++compared;
  }
  CHECK(compared > 8);
}

TEST_CASE("monochromatic cutoff trajectory") {
  const auto p = flat_top(2e14, 8.0);
  const VectorPotential vp(p);
  // Field peak of the second cycle, plus 18 degrees of carrier phase.
  const double t_ion = (2 * pi + pi / 2 + 18.0 * pi / 180.0) / p.omega_au;
  const auto roots = solve_returns(vp, t_ion);
  REQUIRE(!roots.empty());
  const double excursion_cycles = (roots[0] - t_ion) / p.period();
  CHECK(excursion_cycles == doctest::Approx(0.65).epsilon(0.03));
  const double v = vp.along(roots[0]) - vp.along(t_ion);
  CHECK(0.5 * v * v / p.ponderomotive_energy() == doctest::Approx(3.17).epsilon(0.01));
  const auto oracle = rk4_first_return(p, t_ion, 100000);
  CHECK(roots[0] == doctest::Approx(oracle.t).epsilon(1e-6));
}

TEST_CASE("flat-top cutoff law") {
  const auto p = flat_top(2e14, 8.0);
  const VectorPotential vp(p);
  const auto table = trajectory_table(vp, StarkParameters::carbon_monoxide());
  double best = 0.0;
  for (const auto& tr : table.entries) {
    best = std::max(best, 0.5 * tr.return_velocity.squaredNorm());
  }
  CHECK(best / p.ponderomotive_energy() == doctest::Approx(3.17).epsilon(0.02));
}

TEST_CASE("solve_returns edge cases") {
  const auto p = reference_pulse();
  const VectorPotential vp(p);
  CHECK_THROWS_AS(solve_returns(vp, -1.0), DomainError);
  CHECK_THROWS_AS(solve_returns(vp, p.duration() + 1.0), DomainError);
  // Field zero crossing: the degenerate root t = t' is not reported.
  const double zero = p.period();
  for (double t : solve_returns(vp, zero)) CHECK(t > zero + 1e-6);
  // Release at the very end: nothing can return.
  CHECK(solve_returns(vp, p.duration()).empty());
}

TEST_CASE("photon energy") {
  const auto p = reference_pulse();
  const VectorPotential vp(p);
  const auto co = StarkParameters::carbon_monoxide();
  const double t_ion = 0.8 * p.period();
  const auto roots = solve_returns(vp, t_ion);
  REQUIRE(!roots.empty());
  const double w_stark = photon_energy(vp, co, t_ion, roots[0]);
  const double w_free = photon_energy(vp, co, t_ion, roots[0], IpModel::field_free);
  const double ip_t = ip_of_field(co, field_at(p, roots[0]));
  CHECK(w_stark - w_free == doctest::Approx(ip_t - co.field_free_ip()).epsilon(1e-12));
  CHECK_THROWS_AS(photon_energy(vp, co, roots[0], t_ion), DomainError);
  CHECK_THROWS_AS(photon_energy(vp, co, t_ion, roots[0] + 5.0), DomainError);
}

TEST_CASE("reference pulse table") {
  const auto p = reference_pulse();
  const VectorPotential vp(p);
  const auto co = StarkParameters::carbon_monoxide();
  const auto table = trajectory_table(vp, co);
  REQUIRE(table.entries.size() > 100);

  for (std::size_t i = 1; i < table.entries.size(); ++i) {
    CHECK(table.entries[i].ionization_time > table.entries[i - 1].ionization_time);
  }
  for (const auto& tr : table.entries) {
    CHECK(tr.return_time > tr.ionization_time);
    CHECK(tr.excursion_time > 0.0);
    CHECK(tr.excursion_time < 1.5 * p.period());
    CHECK(tr.photon_energy >= ip_of_field(co, field_at(p, tr.return_time)));
    CHECK(std::abs(excursion(vp, tr.ionization_time, tr.return_time)) < 1e-6);
    // Impulse identity.
    const double v = tr.return_velocity.dot(p.polarization);
    CHECK(std::abs(v - (vp.along(tr.return_time) - vp.along(tr.ionization_time))) < 1e-12);
    CHECK((tr.branch == Branch::short_ || tr.branch == Branch::long_));
  }

  // One half-cycle dominates the emission above threshold.
  const double threshold = co.field_free_ip() + 0.3 * (table.cutoff_energy() - co.field_free_ip());
  double dominant = 0.0, total = 0.0;
  for (const auto& tr : table.entries) {
    if (tr.photon_energy < threshold) continue;
    total += tr.ionization_weight;
    if (tr.half_cycle == table.dominant_half_cycle) dominant += tr.ionization_weight;
  }
  MESSAGE("dominant half-cycle " << table.dominant_half_cycle << " carries "
                                 << dominant / total << " of the plateau weight");
  CHECK(dominant / total > 0.9);

  // At most one interior maximum of energy versus excursion in every
  // half-cycle with enough samples. Very short excursions may start with a shallow dip from
  // the Stark-shifted Ip at return.
  std::vector<int> indices;
  for (const auto& tr : table.entries) {
    if (indices.empty() || indices.back() != tr.half_cycle) indices.push_back(tr.half_cycle);
  }
  for (int hc : indices) {
    auto v = table.half_cycle(hc);
    if (v.size() < 20) continue;
    std::sort(v.begin(), v.end(), [](const Trajectory& a, const Trajectory& b) {
      return a.excursion_time < b.excursion_time;
    });
    int maxima = 0;
    int dir = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double d = v[i].photon_energy - v[i - 1].photon_energy;
      if (std::abs(d) < 1e-9) continue;
      const int s = d > 0 ? 1 : -1;
      if (dir > 0 && s < 0) ++maxima;
      dir = s;
    }
    // Half-cycles whose returns are cut off by the end of the pulse may
    // never turn over.
    CHECK_MESSAGE(maxima <= 1, "half-cycle " << hc);
    if (hc == table.dominant_half_cycle) CHECK(maxima == 1);
  }
}

TEST_CASE("branch inversion") {
  const auto p = reference_pulse();
  const VectorPotential vp(p);
  const auto co = StarkParameters::carbon_monoxide();
  const auto table = trajectory_table(vp, co);
  const double cut = table.cutoff_energy();
  const auto s = frequency_to_pairs(table, cut, Branch::short_);
  const auto l = frequency_to_pairs(table, cut, Branch::long_);
  CHECK(std::abs(s.ionization_time - l.ionization_time) < 2 * p.period() / 2048);
  CHECK(std::abs(s.return_time - l.return_time) < 2 * p.period() / 2048 * 3);

  const double up = p.ponderomotive_energy();
  const double mid = co.field_free_ip() + 3.17 * up * 0.5;
  const auto ms = frequency_to_pairs(table, mid, Branch::short_);
  const auto ml = frequency_to_pairs(table, mid, Branch::long_);
  CHECK(ms.return_time - ms.ionization_time < ml.return_time - ml.ionization_time);

  CHECK_THROWS_AS(frequency_to_pairs(table, 0.3, Branch::short_), OutOfRangeError);
  CHECK_THROWS_AS(frequency_to_pairs(table, cut * 1.01, Branch::long_), OutOfRangeError);
}

TEST_CASE("serial and parallel tables agree exactly") {
  const auto p = reference_pulse();
  const VectorPotential vp(p);
  const auto co = StarkParameters::carbon_monoxide();
  const auto a = trajectory_table(vp, co, {}, Execution::serial);
  const auto b = trajectory_table(vp, co, {}, Execution::parallel);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].return_time == b.entries[i].return_time);
    CHECK(a.entries[i].photon_energy == b.entries[i].photon_energy);
    CHECK(a.entries[i].branch == b.entries[i].branch);
  }
  CHECK(a.dominant_half_cycle == b.dominant_half_cycle);
}
