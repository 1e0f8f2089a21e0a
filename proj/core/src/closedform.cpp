#include "dicke/closedform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dicke/specfun.hpp"

namespace dicke {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double xlogy_real(double a, double logv) { return a == 0.0 ? 0.0 : a * logv; }

// ln R^<_n(tau) on the full ladder; R^<_0 = 0.
std::vector<double> log_R_less(int N, double tau) {
  std::vector<double> out(N + 1, kNegInf);
  const double logN = std::log(static_cast<double>(N));
  const double l1me = std::log1p(-std::exp(-tau));  // ln(1 - e^{-tau})
  for (int n = 1; n <= N; ++n) {
    double expo = static_cast<double>(N) * (N - n) / n;
    out[n] = 2.0 * (logN - std::log(static_cast<double>(n))) - tau + xlogy_real(expo, l1me);
  }
  return out;
}

double log_F(int r, double x, double gamma) {
  const double mean = gamma * x;
  if (mean == 0.0) return r == 0 ? 0.0 : kNegInf;
  return -mean + xlogy_count(r, std::log(mean)) - std::lgamma(r + 1.0);
}

}  // namespace

double ClosedFormParams::tau0(int N) const { return delta0 * std::log(static_cast<double>(N)); }
double ClosedFormParams::tau1(int N) const {
  return (1.0 + delta1) * std::log(static_cast<double>(N));
}

void ClosedFormParams::validate() const {
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("ClosedFormParams: need 0 < delta0 < 1");
  if (!(delta1 > 0.0 && delta1 < 0.5))
    throw std::invalid_argument("ClosedFormParams: need 0 < delta1 < 1/2");
  if (lambda != 0 && lambda != 1)
    throw std::invalid_argument("ClosedFormParams: lambda must be 0 or 1");
}

PureDistribution eval_Q(int N, double tau) {
  if (N < 1) throw std::invalid_argument("eval_Q: N must be >= 1");
  if (tau < 0.0) throw std::invalid_argument("eval_Q: tau must be >= 0");
  PureDistribution q{N, Domain::Log, false, std::vector<double>(N + 1, kNegInf)};
  const double l1me = std::log1p(-std::exp(-tau));
  for (int n = 0; n <= N; ++n) q.values[n] = -tau + xlogy_count(N - n, l1me);
  return q;
}

PureDistribution eval_Pbar(int N, double tau, int lambda) {
  if (N < 1) throw std::invalid_argument("eval_Pbar: N must be >= 1");
  if (tau < 0.0) throw std::invalid_argument("eval_Pbar: tau must be >= 0");
  if (lambda != 0 && lambda != 1) throw std::invalid_argument("eval_Pbar: lambda must be 0 or 1");
  PureDistribution p{N, Domain::Log, false, std::vector<double>(N + 1, kNegInf)};
  const double logN = std::log(static_cast<double>(N));
  const double emt = std::exp(-tau);
  for (int n = 1; n <= N; ++n) {
    p.values[n] = 2.0 * (logN - std::log(static_cast<double>(n))) - tau -
                  emt * static_cast<double>(N) * (N - n + lambda) / n;
  }
  return p;
}

double pbar_norm_limit(double tau, int lambda) {
  if (!(tau > 0.0)) throw std::invalid_argument("pbar_norm_limit: tau must be > 0");
  const double emt = std::exp(-tau);
  return std::exp(-tau - lambda * emt) / (-std::expm1(-emt));
}

PureDistribution eval_R(int N, double tau, const ClosedFormParams& params) {
  if (N < 1) throw std::invalid_argument("eval_R: N must be >= 1");
  if (tau < 0.0) throw std::invalid_argument("eval_R: tau must be >= 0");
  params.validate();
  return tau <= params.tau1(N) ? detail::eval_R_early(N, tau, params)
                               : detail::eval_R_late(N, tau, params);
}

PureDistribution detail::eval_R_early(int N, double tau, const ClosedFormParams&) {
  return {N, Domain::Log, false, log_R_less(N, tau)};
}

PureDistribution detail::eval_R_late(int N, double tau, const ClosedFormParams& params) {
  // R^>_n = sum_m C(m, n) e^{-n d} (1 - e^{-d})^{m-n} R^<_m(tau1), d = tau - tau1.
  const double tau1 = params.tau1(N);
  const std::vector<double> at_tau1 = log_R_less(N, tau1);
  const double d = tau - tau1;
  const double l1med = std::log1p(-std::exp(-d));
  PureDistribution r{N, Domain::Log, false, std::vector<double>(N + 1, kNegInf)};
  std::vector<double> terms;
  for (int n = 0; n <= N; ++n) {
    terms.clear();
    for (int m = n; m <= N; ++m)
      terms.push_back(log_binomial(m, n) - n * d + xlogy_count(m - n, l1med) + at_tau1[m]);
    r.values[n] = log_sum_exp(terms);
  }
  return r;
}

double eval_universal(double x, double T) {
  if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("eval_universal: x must be in (0, 1]");
  if (!(T > 0.0)) throw std::invalid_argument("eval_universal: T must be > 0");
  return std::exp((1.0 - 1.0 / x) / T) / (T * x * x);
}

double eval_F(int r, double x, double gamma) {
  if (r < 0 || x < 0.0 || gamma < 0.0)
    throw std::invalid_argument("eval_F: need r, x, gamma >= 0");
  return std::exp(log_F(r, x, gamma));
}

double eval_T(int N, int n, double tau, double tau0) {
  if (n < 0 || n > N) throw std::invalid_argument("eval_T: need 0 <= n <= N");
  if (tau < 0.0) throw std::invalid_argument("eval_T: tau must be >= 0");
  if (n == 0) return 0.0;
  const double w = n + std::exp(tau0 - tau) * (N - n);
  double t = tau + static_cast<double>(n) / N - n / w + std::log(w / N);
  if (t < 0.0) t = 0.0;  // formula is >= 0 up to rounding
  if (t > tau) t = tau;
  return t;
}

JointDistribution eval_R_loss(int N, double gamma, double tau,
                              const ClosedFormParams& params) {
  if (N < 1) throw std::invalid_argument("eval_R_loss: N must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("eval_R_loss: gamma must be >= 0");
  if (tau < 0.0) throw std::invalid_argument("eval_R_loss: tau must be >= 0");
  params.validate();
  return tau <= params.tau1(N) ? detail::eval_R_loss_early(N, gamma, tau, params)
                               : detail::eval_R_loss_late(N, gamma, tau, params);
}

JointDistribution detail::eval_R_loss_early(int N, double gamma, double tau,
                                            const ClosedFormParams&) {
  JointDistribution out{N, Domain::Log, false,
                        std::vector<double>(joint_dim(N), kNegInf)};
  const std::vector<double> logR = log_R_less(N, tau);
  for (int r = 0; r <= N / 2; ++r)
    for (int n = 0; n <= N - 2 * r; ++n)
      out.at(n, r) = logR[n + 2 * r] + log_F(r, eval_T(N, n, tau), gamma);
  return out;
}

JointDistribution detail::eval_R_loss_late(int N, double gamma, double tau,
                                           const ClosedFormParams& params) {
  // Double-binomial propagation of the matched state: n decays at unit
  // rate, r at rate gamma / N.
  const double tau1 = params.tau1(N);
  const JointDistribution at_tau1 = eval_R_loss_early(N, gamma, tau1, params);
  const double d = tau - tau1;
  const double l1med_n = std::log1p(-std::exp(-d));
  const double l1med_r = std::log1p(-std::exp(-gamma * d / N));
  JointDistribution out{N, Domain::Log, false,
                        std::vector<double>(joint_dim(N), kNegInf)};
  std::vector<double> terms;
  for (int r = 0; r <= N / 2; ++r)
    for (int n = 0; n <= N - 2 * r; ++n) {
      terms.clear();
      for (int rp = r; rp <= N / 2; ++rp) {
        const double rpart = log_binomial(rp, r) - gamma * r * d / N +
                             xlogy_count(rp - r, l1med_r);
        for (int np = n; np <= N - 2 * rp; ++np)
          terms.push_back(rpart + log_binomial(np, n) - n * d +
                          xlogy_count(np - n, l1med_n) + at_tau1.at(np, rp));
      }
      if (!terms.empty()) out.at(n, r) = log_sum_exp(terms);
    }
  return out;
}

}  // namespace dicke
