#ifndef DICKE_CLOSEDFORM_HPP
#define DICKE_CLOSEDFORM_HPP

#include "dicke/ladder.hpp"

// Closed-form distributions for collective decay: the early-time
// solution Q, the literature continuum solution Pbar, the piecewise
// asymptotic solution R (with matching time tau1), the universal
// N-independent density, and the loss-ladder solution built from R, a
// Poissonian dark-excitation distribution F and the effective time T_n.
// All evaluations run in log domain and return log-domain
// distributions; closed forms are deliberately not exactly normalized.

namespace dicke {

struct ClosedFormParams {
  double delta0 = 0.75;  // early-time exponent, tau0 = delta0 ln N
  double delta1 = 0.4;   // matching exponent, tau1 = (1 + delta1) ln N
  int lambda = 0;        // continuum offset, 0 or 1

  double tau0(int N) const;
  double tau1(int N) const;
  void validate() const;  // 0 < delta0 < 1, 0 < delta1 < 1/2, lambda in {0,1}
};

// Q_n(tau) = e^{-tau} (1 - e^{-tau})^{N-n};  one-norm 1 - (1-e^{-tau})^{N+1}.
PureDistribution eval_Q(int N, double tau);

// Pbar_n(tau) = (N/n)^2 exp[-tau - e^{-tau} N (N - n + lambda)/n], Pbar_0 = 0.
PureDistribution eval_Pbar(int N, double tau, int lambda = 0);

// Large-N limit of ||Pbar(tau)||_1 at fixed tau > 0:
//   exp(-tau - lambda e^{-tau}) / (1 - exp(-e^{-tau})).
double pbar_norm_limit(double tau, int lambda = 0);

// Piecewise solution: R^< for tau <= tau1, binomial-propagated R^> after.
PureDistribution eval_R(int N, double tau, const ClosedFormParams& params = {});

// N-independent density N p(x, T) = exp[(1 - 1/x)/T] / (T x^2), x = n/N,
// T = e^tau / N.
double eval_universal(double x, double T);

// Poisson weight F_r(x) = e^{-gamma x} (gamma x)^r / r!.
double eval_F(int r, double x, double gamma);

// Effective time accumulated by the dark-excitation channel; 0 <= T_n <= tau.
// tau0 > 0 selects the variant matched at tau0 instead of 0.
double eval_T(int N, int n, double tau, double tau0 = 0.0);

// Loss-ladder solution: R_{n+2r}(tau) F_r(T_n(tau)) before tau1, and the
// double-binomial propagation (n at rate 1, r at rate gamma/N) after.
JointDistribution eval_R_loss(int N, double gamma, double tau,
                              const ClosedFormParams& params = {});

namespace detail {
// Branch evaluators, exposed so the tau1 matching can be checked exactly.
PureDistribution eval_R_early(int N, double tau, const ClosedFormParams& params = {});
PureDistribution eval_R_late(int N, double tau, const ClosedFormParams& params = {});
JointDistribution eval_R_loss_early(int N, double gamma, double tau,
                                    const ClosedFormParams& params = {});
JointDistribution eval_R_loss_late(int N, double gamma, double tau,
                                   const ClosedFormParams& params = {});
}  // namespace detail

}  // namespace dicke

#endif
