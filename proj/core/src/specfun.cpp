#include "dicke/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dicke {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Series E1(z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k k!).
double e1_series(double z) {
  double sum = 0.0;
  double term = 1.0;  // z^k / k! accumulated below
  for (int k = 1; k <= 60; ++k) {
    term *= z / k;
    double contrib = term / k;
    sum += (k % 2 == 1) ? contrib : -contrib;
    if (contrib < 1e-18 * std::abs(sum + 1.0)) break;
  }
  return -kEulerGamma - std::log(z) + sum;
}

// Modified Lentz evaluation of the continued fraction for exp(z) E1(z),
//   exp(z) E1(z) = 1/(z+1- 1/(z+3- 4/(z+5- 9/(...)))).
double e1_scaled_cf(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 300; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double exp_integral_e1(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("exp_integral_e1: z must be > 0");
  if (z <= 1.0) return e1_series(z);
  return std::exp(-z) * e1_scaled_cf(z);
}

double exp_integral_e1_scaled(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("exp_integral_e1_scaled: z must be > 0");
  if (z <= 1.0) return std::exp(z) * e1_series(z);
  return e1_scaled_cf(z);
}

double log_binomial(long long m, long long k) {
  if (k < 0 || m < 0 || k > m) throw std::invalid_argument("log_binomial: need 0 <= k <= m");
  if (k == 0 || k == m) return 0.0;
  return std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(m - k) + 1.0);
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  double mx = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(mx) && mx < 0) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - mx);
  return mx + std::log(sum);
}

double xlogy_count(long long k, double logv) {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * logv;
}

}  // namespace dicke
