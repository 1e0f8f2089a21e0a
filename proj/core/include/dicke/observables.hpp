#ifndef DICKE_OBSERVABLES_HPP
#define DICKE_OBSERVABLES_HPP

#include "dicke/ladder.hpp"

// Physical observables: magnetization mu (mean excited fraction),
// radiance rho = <S+S->/N^2, incoherent emission rate, dark-excitation
// statistics, the incoherent photon budget and the superradiance
// threshold.

namespace dicke {

struct ObservableSample {
  double tau = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double one_norm = 0.0;
  double incoherent_rate = 0.0;  // (gamma/N) sum p_{n,r} (n + r)
  double dark_mean = 0.0;        // <r>
};

// mu = sum P_n n/N, rho = sum P_n n (N - n + 1)/N^2.  Rejects inputs
// whose one-norm deviates from 1 by more than tol.
struct PureObservables {
  double mu, rho;
};
PureObservables pure_observables(const PureDistribution& p, double tol = 1e-6);

// On the lossy ladder a state (n, r) carries n + r excitations, of
// which n decay collectively:
//   mu = <n + r>/N, rho = sum p_{n,r} n (N - 2r - n + 1)/N^2.
ObservableSample joint_observables(const JointDistribution& p, double gamma,
                                   double tau = 0.0, double tol = 1e-6);

// Continuum observables at universal time T = e^tau / N (z = 1/T):
//   mu = z e^z E1(z),  rho = (1 + z) mu - z.
PureObservables continuum_observables(double T);

double one_norm_distance(const PureDistribution& a, const PureDistribution& b);
double one_norm_distance(const JointDistribution& a, const JointDistribution& b);

// Expected number of incoherently lost photons over the whole decay:
//   gamma [gamma_E + ln N + e^N E1(N)].
double n_loss_formula(int N, double gamma);

// Atom number above which the radiance peaks at t > 0: gamma^2 + 2 gamma + 2.
double threshold_N(double gamma);

// d^2 mu / dt^2 at t = 0 in unscaled time: gamma^2/2 + gamma - N/2 + 1.
// Divide by N^2 for the curvature in rescaled time tau.
double initial_curvature(int N, double gamma);

}  // namespace dicke

#endif
