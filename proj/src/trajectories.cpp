#include "starkhhg/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <boost/math/tools/toms748_solve.hpp>

#include "starkhhg/errors.hpp"

namespace starkhhg {

std::string_view to_string(Branch b) {
  return b == Branch::short_ ? "short" : "long";
}

double excursion(const VectorPotential& vp, double t_ion, double t) {
  return vp.integral(t) - vp.integral(t_ion) - vp.along(t_ion) * (t - t_ion);
}

std::vector<double> solve_returns(const VectorPotential& vp, double t_ion,
                                  const TrajectoryOptions& options) {
  const LaserPulse& pulse = vp.pulse();
  const double end = pulse.duration();
  if (!std::isfinite(t_ion) || t_ion < 0.0 || t_ion > end) {
    throw DomainError("solve_returns: ionization time outside the pulse");
  }
  std::vector<double> roots;
  const double h = pulse.period() / options.scan_steps_per_cycle;
  double ta = t_ion + 1e-3 * h;
  if (ta >= end) return roots;
  double ra = excursion(vp, t_ion, ta);

  auto f = [&](double t) { return excursion(vp, t_ion, t); };
  while (ta < end) {
    const double tb = std::min(ta + h, end);
    const double rb = excursion(vp, t_ion, tb);
    if (rb == 0.0) {
      roots.push_back(tb);
    } else if ((ra < 0.0) != (rb < 0.0) && ra != 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = [](double a, double b) {
        return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(a), 1.0);
      };
      auto [lo, hi] =
          boost::math::tools::toms748_solve(f, ta, tb, ra, rb, tol, iters);
      const double flo = std::abs(f(lo));
      const double fhi = std::abs(f(hi));
      const double root = flo <= fhi ? lo : hi;
      if (std::min(flo, fhi) > options.root_tolerance_au) {
        throw NumericalError("solve_returns: root refinement did not converge");
      }
      roots.push_back(root);
    }
    if (options.first_return_only && !roots.empty()) break;
    ta = tb;
    ra = rb;
  }
  return roots;
}

double photon_energy(const VectorPotential& vp, const StarkParameters& params,
                     double t_ion, double t_rec, IpModel ip_model) {
  if (!std::isfinite(t_ion) || !std::isfinite(t_rec) || !(t_rec > t_ion)) {
    throw DomainError("photon_energy: require t > t'");
  }
  if (std::abs(excursion(vp, t_ion, t_rec)) > 1e-6) {
    throw DomainError("photon_energy: (t', t) is not a return pair");
  }
  const double v = vp.along(t_rec) - vp.along(t_ion);
  const double ip = ip_model == IpModel::stark
                        ? ip_of_field(params, field_at(vp.pulse(), t_rec))
                        : params.field_free_ip();
  return 0.5 * v * v + ip;
}

namespace {

int half_cycle_index(const LaserPulse& pulse, double t) {
  return static_cast<int>(
      std::floor((pulse.omega_au * t + pulse.cep_rad) / std::numbers::pi));
}

std::vector<Trajectory> trajectories_from(const VectorPotential& vp,
                                          const StarkParameters& params,
                                          const TrajectoryOptions& options,
                                          double t_ion) {
  const LaserPulse& pulse = vp.pulse();
  std::vector<Trajectory> out;
  const double f_ion = pulse.field(t_ion);
  if (f_ion == 0.0) return out;
  for (double t_rec : solve_returns(vp, t_ion, options)) {
    Trajectory tr;
    tr.ionization_time = t_ion;
    tr.return_time = t_rec;
    const double v = vp.along(t_rec) - vp.along(t_ion);
    tr.return_velocity = v * pulse.polarization;
    tr.excursion_time = t_rec - t_ion;
    tr.photon_energy =
        0.5 * v * v + ip_of_field(params, field_at(pulse, t_rec));
    tr.half_cycle = half_cycle_index(pulse, t_ion);
    const double ip_ion = ip_of_field(params, field_at(pulse, t_ion));
    // log of the tunnelling factor; normalized after the scan
    tr.ionization_weight =
        -2.0 * std::pow(2.0 * ip_ion, 1.5) / (3.0 * std::abs(f_ion));
    out.push_back(tr);
  }
  return out;
}

void classify(TrajectoryTable& table) {
  std::map<int, double> cutoff_excursion;
  std::map<int, double> cutoff_energy;
  for (const auto& tr : table.entries) {
    auto it = cutoff_energy.find(tr.half_cycle);
    if (it == cutoff_energy.end() || tr.photon_energy > it->second) {
      cutoff_energy[tr.half_cycle] = tr.photon_energy;
      cutoff_excursion[tr.half_cycle] = tr.excursion_time;
    }
  }
  double log_max = -std::numeric_limits<double>::infinity();
  for (const auto& tr : table.entries) {
    log_max = std::max(log_max, tr.ionization_weight);
  }
  std::map<int, double> total_weight;
  for (auto& tr : table.entries) {
    tr.branch = tr.excursion_time <= cutoff_excursion[tr.half_cycle]
                    ? Branch::short_
                    : Branch::long_;
    tr.ionization_weight = std::exp(tr.ionization_weight - log_max);
    total_weight[tr.half_cycle] += tr.ionization_weight;
  }
  double best = -1.0;
  for (const auto& [index, w] : total_weight) {
    if (w > best) {
      best = w;
      table.dominant_half_cycle = index;
    }
  }
}

}  // namespace

std::vector<Trajectory> TrajectoryTable::half_cycle(int index) const {
  std::vector<Trajectory> out;
  for (const auto& tr : entries) {
    if (tr.half_cycle == index) out.push_back(tr);
  }
  return out;
}

double TrajectoryTable::cutoff_energy() const {
  double best = 0.0;
  for (const auto& tr : entries) {
    if (tr.half_cycle == dominant_half_cycle) {
      best = std::max(best, tr.photon_energy);
    }
  }
  return best;
}

TrajectoryTable trajectory_table(const VectorPotential& vp,
                                 const StarkParameters& params,
                                 const TrajectoryOptions& options,
                                 Execution exec) {
  if (options.samples_per_cycle < 512) {
    throw DomainError("trajectory_table: need >= 512 samples per cycle");
  }
  const LaserPulse& pulse = vp.pulse();
  const double dt = pulse.period() / options.samples_per_cycle;
  const int n = static_cast<int>(std::floor(pulse.duration() / dt));

  std::vector<std::vector<Trajectory>> per_sample(n + 1);
  if (exec == Execution::serial) {
    for (int i = 1; i < n; ++i) {
      per_sample[i] = trajectories_from(vp, params, options, i * dt);
    }
  } else {
    // Exceptions must not escape the parallel region.
    std::optional<std::string> failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 1; i < n; ++i) {
      try {
        per_sample[i] = trajectories_from(vp, params, options, i * dt);
      } catch (const std::exception& e) {
#pragma omp critical
        failure = e.what();
      }
    }
    if (failure) throw NumericalError(*failure);
  }

  TrajectoryTable table;
  table.ip_field_free = params.field_free_ip();
  table.omega0 = pulse.omega_au;
  for (auto& v : per_sample) {
    table.entries.insert(table.entries.end(), v.begin(), v.end());
  }
  classify(table);
  return table;
}

ReturnPair frequency_to_pairs(const TrajectoryTable& table, double omega,
                              Branch branch) {
  std::vector<Trajectory> hc = table.half_cycle(table.dominant_half_cycle);
  if (hc.empty()) throw OutOfRangeError("no trajectories in dominant half-cycle");
  const auto peak = std::max_element(
      hc.begin(), hc.end(), [](const Trajectory& a, const Trajectory& b) {
        return a.photon_energy < b.photon_energy;
      });
  const std::size_t ipk = static_cast<std::size_t>(peak - hc.begin());
  if (omega > peak->photon_energy) {
    throw OutOfRangeError("frequency above the classical cutoff");
  }
  // Walk away from the cutoff entry: later ionization for short, earlier for
  // long, within a contiguous run of the branch.
  const int dir = branch == Branch::short_ ? 1 : -1;
  std::size_t prev = ipk;
  for (long i = static_cast<long>(ipk) + dir;
       i >= 0 && i < static_cast<long>(hc.size()); i += dir) {
    const Trajectory& a = hc[prev];
    const Trajectory& b = hc[static_cast<std::size_t>(i)];
    if (i != static_cast<long>(ipk) && b.branch != branch) break;
    const double lo = std::min(a.photon_energy, b.photon_energy);
    const double hi = std::max(a.photon_energy, b.photon_energy);
    if (omega >= lo && omega <= hi) {
      const double span = b.photon_energy - a.photon_energy;
      const double w = span == 0.0 ? 0.0 : (omega - a.photon_energy) / span;
      return {a.ionization_time + w * (b.ionization_time - a.ionization_time),
              a.return_time + w * (b.return_time - a.return_time)};
    }
    prev = static_cast<std::size_t>(i);
  }
  if (omega == peak->photon_energy) {
    return {peak->ionization_time, peak->return_time};
  }
  throw OutOfRangeError("frequency below the branch threshold");
}

}  // namespace starkhhg
