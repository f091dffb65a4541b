#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "starkhhg/execution.hpp"
#include "starkhhg/molecule.hpp"
#include "starkhhg/pulse.hpp"

namespace starkhhg {

enum class Branch { short_, long_ };

std::string_view to_string(Branch b);

struct Trajectory {
  double ionization_time = 0.0;
  double return_time = 0.0;
  Eigen::Vector3d return_velocity = Eigen::Vector3d::Zero();
  double excursion_time = 0.0;
  double photon_energy = 0.0;
  Branch branch = Branch::short_;
  int half_cycle = 0;
  // Quasi-static tunnelling factor exp(-2 (2 Ip(F(t')))^{3/2} / (3 |F(t')|)),
  // normalized to the largest value in the table.
  double ionization_weight = 0.0;
};

struct TrajectoryOptions {
  int samples_per_cycle = 2048;
  bool first_return_only = true;
  int scan_steps_per_cycle = 512;
  double root_tolerance_au = 1e-8;
};

enum class IpModel { stark, field_free };

// Electron position x(t) = int_{t'}^{t} [A(t'') - A(t')] dt'' for release at
// the origin with zero velocity at t'.
double excursion(const VectorPotential& vp, double t_ion, double t);

// Ascending zero crossings of the excursion in (t', end of pulse]. The
// degenerate root t = t' is excluded. Throws DomainError when t' is outside
// the pulse.
std::vector<double> solve_returns(const VectorPotential& vp, double t_ion,
                                  const TrajectoryOptions& options = {});

// omega = |rdot|^2 / 2 + Ip(F(t)) (or the field-free Ip). Throws DomainError
// unless t > t' and the electron is back at the origin.
double photon_energy(const VectorPotential& vp, const StarkParameters& params,
                     double t_ion, double t_rec,
                     IpModel ip_model = IpModel::stark);

struct TrajectoryTable {
  std::vector<Trajectory> entries;  // ordered by ionization time
  int dominant_half_cycle = 0;
  double ip_field_free = 0.0;
  double omega0 = 0.0;

  std::vector<Trajectory> half_cycle(int index) const;
  // Maximum photon energy in the dominant half-cycle.
  double cutoff_energy() const;
};

// Scans ionization times over the pulse and keeps the returning
// trajectories. Branches are assigned per half-cycle: short iff the
// excursion is not longer than that of the maximum-energy trajectory.
TrajectoryTable trajectory_table(const VectorPotential& vp,
                                 const StarkParameters& params,
                                 const TrajectoryOptions& options = {},
                                 Execution exec = Execution::parallel);

struct ReturnPair {
  double ionization_time = 0.0;
  double return_time = 0.0;
};

// Inverse of omega(t, t') on one branch of the dominant half-cycle, by linear
// interpolation between the bracketing table entries. Throws OutOfRangeError
// outside [threshold, cutoff].
ReturnPair frequency_to_pairs(const TrajectoryTable& table, double omega,
                              Branch branch);

}  // namespace starkhhg
