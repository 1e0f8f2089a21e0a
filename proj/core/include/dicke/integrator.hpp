#ifndef DICKE_INTEGRATOR_HPP
#define DICKE_INTEGRATOR_HPP

#include <vector>

#include "dicke/ladder.hpp"
#include "dicke/rates.hpp"

// Numerically exact evolution of the rate equations with an adaptive
// embedded Runge-Kutta pair (Dormand-Prince 4(5)), plus a dense
// matrix-exponential oracle for small state spaces.

namespace dicke {

struct SolverConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 1e30;  // additionally capped at 2 / max outflow
  // Snapshot entries in [-floor, 0) are clamped to 0; anything below
  // -floor is reported as an instability.  Negative means automatic:
  // sqrt(dim) * (abs_tol + rel_tol) * accepted steps, the scale of
  // benign accumulated noise in components far below the distribution
  // front.
  double negativity_floor = -1.0;
  std::size_t max_steps = 10'000'000;  // attempted steps before giving up
  std::vector<double> snapshot_times;  // nondecreasing, first >= 0

  void validate() const;
};

struct Snapshot {
  double tau = 0.0;
  std::vector<double> p;  // linear domain, on the generator's state space
};

// Integrate dp/dtau = G p from p0 (linear-domain values on g's state
// space) and report dense-output snapshots at the requested times.
// Small negative snapshot entries are clamped to 0; negativity beyond
// the configured floor is reported as instability (see SolverConfig).
std::vector<Snapshot> evolve(const Generator& g, const std::vector<double>& p0,
                             const SolverConfig& cfg);

std::vector<Snapshot> evolve(const Generator& g, const PureDistribution& p0,
                             const SolverConfig& cfg);
std::vector<Snapshot> evolve(const Generator& g, const JointDistribution& p0,
                             const SolverConfig& cfg);

// Independent oracle: exp(G tau) p0 via dense scaling-and-squaring.
// Rejects state spaces larger than 4096.
std::vector<double> evolve_dense_oracle(const Generator& g,
                                        const std::vector<double>& p0, double tau);

// Snapshot dump, CSV with header tau,n[,r],p.
void write_snapshots_csv(const Generator& g, const std::vector<Snapshot>& snaps,
                         std::ostream& os);

}  // namespace dicke

#endif
