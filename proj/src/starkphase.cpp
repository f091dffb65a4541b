#include "starkhhg/starkphase.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "starkhhg/errors.hpp"

namespace starkhhg {

namespace {

// Adaptive G-K over [a, b], split at the pulse edges where F has a kink.
template <class F>
double integrate_over_pulse(F&& f, const LaserPulse& pulse, double a,
                            double b) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> cuts{a};
  for (double edge : {0.0, pulse.duration()}) {
    if (edge > a && edge < b) cuts.push_back(edge);
  }
  cuts.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15,
                                                1e-14);
  }
  return sum;
}

}  // namespace

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::time_integral: return "time_integral";
    case Formulation::return_velocity: return "return_velocity";
    case Formulation::frequency_timedep: return "frequency_timedep";
    case Formulation::frequency_analytic: return "frequency_analytic";
  }
  return "unknown";
}

double dipole_along_field(const StarkParameters& params,
                          const LaserPulse& pulse) {
  return params.lab_dipole().dot(pulse.polarization);
}

double polarizability_along_field(const StarkParameters& params,
                                  const LaserPulse& pulse) {
  return pulse.polarization.dot(params.lab_polarizability() *
                                pulse.polarization);
}

double phase1_time_integral(const StarkParameters& params,
                            const LaserPulse& pulse, double t_ion,
                            double t_rec) {
  if (!(t_rec > t_ion)) throw DomainError("phase1_time_integral: need t > t'");
  const double mu = dipole_along_field(params, pulse);
  if (mu == 0.0) return 0.0;
  auto f = [&](double t) { return pulse.field(t); };
  return -mu * integrate_over_pulse(f, pulse, t_ion, t_rec);
}

double phase2_time_integral(const StarkParameters& params,
                            const LaserPulse& pulse, double t_ion,
                            double t_rec) {
  if (!(t_rec > t_ion)) throw DomainError("phase2_time_integral: need t > t'");
  const double alpha = polarizability_along_field(params, pulse);
  if (alpha == 0.0) return 0.0;
  auto f = [&](double t) {
    const double e = pulse.field(t);
    return e * e;
  };
  return -0.5 * alpha * integrate_over_pulse(f, pulse, t_ion, t_rec);
}

double phase1_return_velocity(const StarkParameters& params,
                              const Trajectory& trajectory) {
  return params.lab_dipole().dot(trajectory.return_velocity);
}

FrequencyPhase phase1_frequency_timedep(const StarkParameters& params,
                                        const VectorPotential& vp,
                                        const TrajectoryTable& table,
                                        double omega, Branch branch) {
  const LaserPulse& pulse = vp.pulse();
  const double mu = dipole_along_field(params, pulse);
  const ReturnPair pair = frequency_to_pairs(table, omega, branch);
  const double ip = ip_of_field(params, field_at(pulse, pair.return_time));
  const double kinetic = omega - ip;
  if (kinetic <= 0.0) return {0.0, kinetic < 0.0};
  const double v = vp.along(pair.return_time) - vp.along(pair.ionization_time);
  const double s = (mu * v) >= 0.0 ? 1.0 : -1.0;
  return {s * std::abs(mu) * std::sqrt(2.0 * kinetic), false};
}

FrequencyPhase phase1_analytic(const StarkParameters& params,
                               const LaserPulse& pulse, double omega,
                               int sign) {
  const double kinetic = omega - params.field_free_ip();
  if (kinetic < 0.0) return {0.0, true};
  const double mu_cos = dipole_along_field(params, pulse);
  return {(sign >= 0 ? 1.0 : -1.0) * mu_cos * std::sqrt(2.0 * kinetic), false};
}

CutoffScaling cutoff_and_scaling(const LaserPulse& pulse,
                                 const StarkParameters& params) {
  CutoffScaling out;
  out.ponderomotive_energy = pulse.ponderomotive_energy();
  out.cutoff_energy = 3.17 * out.ponderomotive_energy + params.field_free_ip();
  const double alpha = polarizability_along_field(params, pulse);
  if (pulse.peak_field_au == 0.0 || alpha == 0.0) return out;
  // Carrier without envelope, peak of a half-cycle at s = 0.
  const double f0 = pulse.peak_field_au;
  const double w0 = pulse.omega_au;
  auto f2 = [&](double s) {
    const double e = f0 * std::cos(w0 * s);
    return e * e;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double span = 2.0 * pulse.period() / 3.0;
  out.phase2_cutoff_estimate =
      -0.5 * alpha *
      gauss_kronrod<double, 61>::integrate(f2, 0.0, span, 15, 1e-15);
  return out;
}

int recollision_sign(const LaserPulse& pulse, const TrajectoryTable& table) {
  const Eigen::Vector3d polarization = pulse.polarization;
  double best = -1.0;
  int sign = 1;
  for (const auto& tr : table.entries) {
    if (tr.half_cycle == table.dominant_half_cycle && tr.photon_energy > best) {
      best = tr.photon_energy;
      sign = tr.return_velocity.dot(polarization) >= 0.0 ? 1 : -1;
    }
  }
  return sign;
}

std::vector<StarkPhaseRecord> stark_phase_records(
    const StarkParameters& params, const VectorPotential& vp,
    const TrajectoryTable& table, Formulation formulation,
    const std::vector<double>& omega_grid) {
  const LaserPulse& pulse = vp.pulse();
  std::vector<StarkPhaseRecord> out;
  if (formulation == Formulation::time_integral ||
      formulation == Formulation::return_velocity) {
    for (const auto& tr : table.entries) {
      if (tr.half_cycle != table.dominant_half_cycle) continue;
      StarkPhaseRecord rec;
      rec.omega = tr.photon_energy;
      rec.branch = tr.branch;
      rec.formulation = formulation;
      rec.phase_order1 =
          formulation == Formulation::time_integral
              ? phase1_time_integral(params, pulse, tr.ionization_time,
                                     tr.return_time)
              : phase1_return_velocity(params, tr);
      rec.phase_order2 = phase2_time_integral(params, pulse,
                                              tr.ionization_time, tr.return_time);
      out.push_back(rec);
    }
    return out;
  }
  const int sign = recollision_sign(pulse, table);
  for (Branch branch : {Branch::short_, Branch::long_}) {
    for (double omega : omega_grid) {
      StarkPhaseRecord rec;
      rec.omega = omega;
      rec.branch = branch;
      rec.formulation = formulation;
      if (formulation == Formulation::frequency_analytic) {
        const auto p = phase1_analytic(params, pulse, omega, sign);
        rec.phase_order1 = p.phase;
        rec.below_threshold = p.below_threshold;
        rec.phase_order2 = std::numeric_limits<double>::quiet_NaN();
        out.push_back(rec);
        continue;
      }
      try {
        const auto p = phase1_frequency_timedep(params, vp, table, omega, branch);
        const ReturnPair pair = frequency_to_pairs(table, omega, branch);
        rec.phase_order1 = p.phase;
        rec.below_threshold = p.below_threshold;
        rec.phase_order2 = phase2_time_integral(params, pulse,
                                                pair.ionization_time,
                                                pair.return_time);
        out.push_back(rec);
      } catch (const OutOfRangeError&) {
        // outside the classical range of this branch
      }
    }
    if (formulation == Formulation::frequency_analytic) break;
  }
  return out;
}

}  // namespace starkhhg
