#include "dicke/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "dicke/specfun.hpp"

namespace dicke {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

void check_physical(double one_norm, double tol, const char* who) {
  if (std::abs(one_norm - 1.0) > tol)
    throw std::invalid_argument(std::string(who) + ": input not normalized within tol");
}
}  // namespace

PureObservables pure_observables(const PureDistribution& p, double tol) {
  const PureDistribution lin = p.to_linear();
  check_physical(lin.one_norm(), tol, "pure_observables");
  const double N = lin.N;
  double mu = 0.0, rho = 0.0;
  for (int n = 0; n <= lin.N; ++n) {
    mu += lin.values[n] * n / N;
    rho += lin.values[n] * n * (N - n + 1.0) / (N * N);
  }
  return {mu, rho};
}

ObservableSample joint_observables(const JointDistribution& p, double gamma,
                                   double tau, double tol) {
  const JointDistribution lin = p.to_linear();
  const double norm = lin.one_norm();
  check_physical(norm, tol, "joint_observables");
  const double N = lin.N;
  ObservableSample s;
  s.tau = tau;
  s.one_norm = norm;
  for (int r = 0; r <= lin.N / 2; ++r)
    for (int n = 0; n <= lin.N - 2 * r; ++n) {
      const double w = lin.at(n, r);
      s.mu += w * (n + r) / N;
      s.rho += w * n * (N - 2.0 * r - n + 1.0) / (N * N);
      s.dark_mean += w * r;
    }
  s.incoherent_rate = gamma * s.mu;  // (gamma/N) <n + r>
  return s;
}

PureObservables continuum_observables(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("continuum_observables: T must be > 0");
  const double z = 1.0 / T;
  const double mu = z * exp_integral_e1_scaled(z);
  const double rho = (1.0 + z) * mu - z;
  return {mu, rho};
}

double one_norm_distance(const PureDistribution& a, const PureDistribution& b) {
  if (a.N != b.N) throw std::invalid_argument("one_norm_distance: mismatched state spaces");
  const PureDistribution la = a.to_linear(), lb = b.to_linear();
  double d = 0.0;
  for (int n = 0; n <= a.N; ++n) d += std::abs(la.values[n] - lb.values[n]);
  return d;
}

double one_norm_distance(const JointDistribution& a, const JointDistribution& b) {
  if (a.N != b.N) throw std::invalid_argument("one_norm_distance: mismatched state spaces");
  const JointDistribution la = a.to_linear(), lb = b.to_linear();
  double d = 0.0;
  for (std::size_t i = 0; i < la.values.size(); ++i)
    d += std::abs(la.values[i] - lb.values[i]);
  return d;
}

double n_loss_formula(int N, double gamma) {
  if (N < 1) throw std::invalid_argument("n_loss_formula: N must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("n_loss_formula: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  return gamma * (kEulerGamma + std::log(static_cast<double>(N)) +
                  exp_integral_e1_scaled(static_cast<double>(N)));
}

double threshold_N(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("threshold_N: gamma must be >= 0");
  return gamma * gamma + 2.0 * gamma + 2.0;
}

double initial_curvature(int N, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("initial_curvature: gamma must be >= 0");
  return gamma * gamma / 2.0 + gamma - N / 2.0 + 1.0;
}

}  // namespace dicke
