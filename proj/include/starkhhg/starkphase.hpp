#pragma once

#include <string_view>
#include <vector>

#include "starkhhg/molecule.hpp"
#include "starkhhg/pulse.hpp"
#include "starkhhg/trajectories.hpp"

namespace starkhhg {

// Sign convention: the first-order phase is positive when the return
// velocity has a positive component along the lab-frame dipole.

enum class Formulation {
  time_integral,       // quadrature of -mu.F and -F^T alpha F / 2
  return_velocity,     // mu . rdot(t, t')
  frequency_timedep,   // sgn(mu.rdot) |mu.e| sqrt(2 (omega - Ip(F(t))))
  frequency_analytic,  // +-mu cos(theta) sqrt(2 (omega - Ip))
};

std::string_view to_string(Formulation f);

struct StarkPhaseRecord {
  double omega = 0.0;
  double phase_order1 = 0.0;
  double phase_order2 = 0.0;
  Branch branch = Branch::short_;
  Formulation formulation = Formulation::time_integral;
  bool below_threshold = false;
};

// Dipole projected on the polarization axis, mu.e.
double dipole_along_field(const StarkParameters& params, const LaserPulse& pulse);
// e^T alpha e.
double polarizability_along_field(const StarkParameters& params,
                                  const LaserPulse& pulse);

double phase1_time_integral(const StarkParameters& params,
                            const LaserPulse& pulse, double t_ion,
                            double t_rec);
double phase2_time_integral(const StarkParameters& params,
                            const LaserPulse& pulse, double t_ion,
                            double t_rec);
double phase1_return_velocity(const StarkParameters& params,
                              const Trajectory& trajectory);

struct FrequencyPhase {
  double phase = 0.0;
  bool below_threshold = false;
};

// Resolves (t', t) on the branch, then evaluates the return-velocity form
// with the Stark-shifted Ip at recombination. Propagates OutOfRangeError.
FrequencyPhase phase1_frequency_timedep(const StarkParameters& params,
                                        const VectorPotential& vp,
                                        const TrajectoryTable& table,
                                        double omega, Branch branch);

// Closed form with the field-free Ip; sign is the direction of the return
// velocity along the polarization axis (+1 or -1). Below threshold the phase is 0 and the flag is set.
FrequencyPhase phase1_analytic(const StarkParameters& params,
                               const LaserPulse& pulse, double omega,
                               int sign);

struct CutoffScaling {
  double ponderomotive_energy = 0.0;
  double cutoff_energy = 0.0;
  // Second-order Stark phase integrated over [t_peak, t_peak + 2T/3] of the bare carrier.
  double phase2_cutoff_estimate = 0.0;
};

CutoffScaling cutoff_and_scaling(const LaserPulse& pulse,
                                 const StarkParameters& params);

// Direction of the return velocity along the polarization axis for the
// cutoff trajectory of the dominant half-cycle.
int recollision_sign(const LaserPulse& pulse, const TrajectoryTable& table);

// Records for CLI output: per trajectory of the dominant half-cycle for the
// time-domain formulations, per omega for the frequency formulations.
std::vector<StarkPhaseRecord> stark_phase_records(
    const StarkParameters& params, const VectorPotential& vp,
    const TrajectoryTable& table, Formulation formulation,
    const std::vector<double>& omega_grid);

}  // namespace starkhhg
