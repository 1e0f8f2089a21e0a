#ifndef DICKE_SPECFUN_HPP
#define DICKE_SPECFUN_HPP

#include <span>

// Numerically stable special functions used throughout the closed-form
// solutions: the exponential integral E1, its exp-scaled variant,
// log-binomials, and log-sum-exp accumulation.

namespace dicke {

// E1(z) = int_z^inf exp(-y)/y dy, z > 0.  Power series for z <= 1,
// continued fraction for z > 1.
double exp_integral_e1(double z);

// exp(z) * E1(z), overflow-free for any z up to 1e308.
double exp_integral_e1_scaled(double z);

// ln C(m, k), 0 <= k <= m, via log-gamma; O(1) per call.
double log_binomial(long long m, long long k);

// ln sum_i exp(t_i); exact -inf for all-(-inf) input; rejects empty input.
double log_sum_exp(std::span<const double> terms);

// k * logv with the convention 0 * (-inf) = 0, for powers of possibly
// exact-zero factors in log domain.
double xlogy_count(long long k, double logv);

}  // namespace dicke

#endif
