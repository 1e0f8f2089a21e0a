#include "dicke/rates.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dicke {

bool is_pure_family(RateFamily family) {
  switch (family) {
    case RateFamily::PureExact:
    case RateFamily::PureEarly:
    case RateFamily::PureLate:
      return true;
    default:
      return false;
  }
}

Generator::Generator(int N, RateFamily family, double gamma)
    : N_(N), family_(family), gamma_(is_pure_family(family) ? 0.0 : gamma) {
  if (N < 1) throw std::invalid_argument("Generator: N must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("Generator: gamma must be >= 0");
  switch (family) {
    case RateFamily::PureExact:
    case RateFamily::PureEarly:
    case RateFamily::PureLate:
      dim_ = static_cast<std::size_t>(N + 1);
      break;
    case RateFamily::LossExact:
    case RateFamily::LossEarly:
    case RateFamily::LossApprox:
    case RateFamily::LossLate:
      dim_ = joint_dim(N);
      break;
    default:
      throw std::invalid_argument("Generator: unknown rate family");
  }
}

double Generator::outflow(int n, int r) const {
  const double N = N_;
  const double s = N - 2.0 * r;
  switch (family_) {
    case RateFamily::PureExact:
      return n * (N - n + 1.0) / N;
    case RateFamily::PureEarly:
      return N - n + 1.0;
    case RateFamily::PureLate:
      return n;
    case RateFamily::LossExact:
      return n * (s - n + 1.0) / N + gamma_ * (n + r) / N;
    case RateFamily::LossEarly:
      return s - n + 1.0 + gamma_;
    case RateFamily::LossApprox:
      return n * (s - n + 1.0) / N + gamma_ * n / N;
    case RateFamily::LossLate:
      return n + gamma_ * r / N;
  }
  return 0.0;
}

double Generator::rate_collective(int n, int r) const {
  if (n < 1) return 0.0;
  const double N = N_;
  const double s = N - 2.0 * r;
  switch (family_) {
    case RateFamily::PureExact:
      return n * (N - n + 1.0) / N;
    case RateFamily::PureEarly:
      return N - n + 1.0;
    case RateFamily::PureLate:
      return n;
    case RateFamily::LossExact:
      return n * (s - n + 1.0) / N +
             gamma_ / N * n * (N + 2.0) * (s - n + 1.0) / (s * (s + 2.0));
    case RateFamily::LossEarly:
      return s - n + 1.0;
    case RateFamily::LossApprox:
      return n * (s - n + 1.0) / N + gamma_ * n * (N - n) / (N * N);
    case RateFamily::LossLate:
      return n;
  }
  return 0.0;
}

double Generator::rate_gain_dark(int n, int r) const {
  // Target is (n-2, r+1); the numerators vanish exactly where the
  // target leaves the triangle, so the guard only avoids 0/0.
  if (n < 2 || is_pure_family(family_)) return 0.0;
  const double N = N_;
  const double s = N - 2.0 * r;
  switch (family_) {
    case RateFamily::LossExact:
      return gamma_ / N * n * (n - 1.0) * (N - r + 1.0) / (s * (s + 1.0));
    case RateFamily::LossEarly:
      return gamma_;
    case RateFamily::LossApprox:
      return gamma_ * n * n / (N * N);
    default:
      return 0.0;
  }
}

double Generator::rate_lose_dark(int n, int r) const {
  if (r < 1 || is_pure_family(family_)) return 0.0;
  const double N = N_;
  const double s = N - 2.0 * r;
  switch (family_) {
    case RateFamily::LossExact:
      return gamma_ / N * (s - n + 1.0) * (s - n + 2.0) * r / ((s + 2.0) * (s + 1.0));
    case RateFamily::LossLate:
      return gamma_ * r / N;
    default:
      return 0.0;
  }
}

void Generator::apply(std::span<const double> p, std::span<double> dp) const {
  if (p.size() != dim_ || dp.size() != dim_)
    throw std::invalid_argument("Generator::apply: dimension mismatch");
  std::fill(dp.begin(), dp.end(), 0.0);
  if (is_pure_family(family_)) {
    for (int n = 0; n <= N_; ++n) {
      const double a = p[n];
      if (a == 0.0) continue;
      dp[n] -= outflow(n) * a;
      if (n >= 1) dp[n - 1] += rate_collective(n) * a;
    }
    return;
  }
  for (int r = 0; r <= N_ / 2; ++r) {
    const std::size_t row = joint_index(N_, 0, r);
    for (int n = 0; n <= N_ - 2 * r; ++n) {
      const double a = p[row + n];
      if (a == 0.0) continue;
      dp[row + n] -= outflow(n, r) * a;
      if (n >= 1) dp[row + n - 1] += rate_collective(n, r) * a;
      if (n >= 2) dp[joint_index(N_, n - 2, r + 1)] += rate_gain_dark(n, r) * a;
      if (r >= 1) dp[joint_index(N_, n, r - 1)] += rate_lose_dark(n, r) * a;
    }
  }
}

std::vector<Transition> Generator::materialize() const {
  std::vector<Transition> out;
  if (is_pure_family(family_)) {
    for (int n = 1; n <= N_; ++n) out.push_back({n, 0, n - 1, 0, rate_collective(n)});
    return out;
  }
  for (int r = 0; r <= N_ / 2; ++r)
    for (int n = 0; n <= N_ - 2 * r; ++n) {
      if (n >= 1) out.push_back({n, r, n - 1, r, rate_collective(n, r)});
      if (n >= 2) out.push_back({n, r, n - 2, r + 1, rate_gain_dark(n, r)});
      if (r >= 1) out.push_back({n, r, n, r - 1, rate_lose_dark(n, r)});
    }
  return out;
}

double Generator::max_outflow() const {
  double mx = 0.0;
  if (is_pure_family(family_)) {
    for (int n = 0; n <= N_; ++n) mx = std::max(mx, outflow(n));
  } else {
    for (int r = 0; r <= N_ / 2; ++r)
      for (int n = 0; n <= N_ - 2 * r; ++n) mx = std::max(mx, outflow(n, r));
  }
  return mx;
}

void Generator::dump_csv(std::ostream& os) const {
  os << "source_n,source_r,target_n,target_r,rate\n";
  for (const Transition& t : materialize())
    os << t.src_n << ',' << t.src_r << ',' << t.dst_n << ',' << t.dst_r << ','
       << t.rate << '\n';
}

double verify_conservation(const Generator& g) {
  const int N = g.atom_count();
  double mx = 0.0;
  if (is_pure_family(g.family())) {
    for (int n = 1; n <= N; ++n)
      mx = std::max(mx, std::abs(g.outflow(n) - g.rate_collective(n)));
    return mx;
  }
  for (int r = 0; r <= N / 2; ++r)
    for (int n = 0; n <= N - 2 * r; ++n) {
      double in = g.rate_collective(n, r) + g.rate_gain_dark(n, r) + g.rate_lose_dark(n, r);
      mx = std::max(mx, std::abs(g.outflow(n, r) - in));
    }
  return mx;
}

}  // namespace dicke
