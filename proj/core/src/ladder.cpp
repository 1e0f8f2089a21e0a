#include "dicke/ladder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dicke {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double linear_sum(const std::vector<double>& v, Domain d) {
  double s = 0.0;
  for (double x : v) s += (d == Domain::Linear) ? x : std::exp(x);
  return s;
}

std::vector<double> convert(const std::vector<double>& v, Domain from, Domain to) {
  if (from == to) return v;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (to == Domain::Linear)
      out[i] = std::isinf(v[i]) && v[i] < 0 ? 0.0 : std::exp(v[i]);
    else
      out[i] = v[i] > 0.0 ? std::log(v[i]) : kNegInf;
  }
  return out;
}
}  // namespace

double PureDistribution::one_norm() const { return linear_sum(values, domain); }

PureDistribution PureDistribution::to_linear() const {
  return {N, Domain::Linear, normalized, convert(values, domain, Domain::Linear)};
}

PureDistribution PureDistribution::to_log() const {
  return {N, Domain::Log, normalized, convert(values, domain, Domain::Log)};
}

double& JointDistribution::at(int n, int r) { return values[joint_index(N, n, r)]; }
double JointDistribution::at(int n, int r) const { return values[joint_index(N, n, r)]; }

double JointDistribution::one_norm() const { return linear_sum(values, domain); }

JointDistribution JointDistribution::to_linear() const {
  return {N, Domain::Linear, normalized, convert(values, domain, Domain::Linear)};
}

JointDistribution JointDistribution::to_log() const {
  return {N, Domain::Log, normalized, convert(values, domain, Domain::Log)};
}

PureDistribution JointDistribution::marginal_n() const {
  JointDistribution lin = to_linear();
  PureDistribution out{N, Domain::Linear, normalized, std::vector<double>(N + 1, 0.0)};
  for (int r = 0; r <= N / 2; ++r)
    for (int n = 0; n <= N - 2 * r; ++n) out.values[n] += lin.at(n, r);
  return out;
}

bool in_triangle(int N, int n, int r) {
  return r >= 0 && r <= N / 2 && n >= 0 && n <= N - 2 * r;
}

std::size_t joint_dim(int N) {
  if (N < 1) throw std::invalid_argument("joint_dim: N must be >= 1");
  std::size_t dim = 0;
  for (int r = 0; r <= N / 2; ++r) dim += static_cast<std::size_t>(N - 2 * r + 1);
  return dim;
}

std::size_t joint_index(int N, int n, int r) {
  if (!in_triangle(N, n, r)) throw std::out_of_range("joint_index: (n, r) outside triangle");
  // Offset of row r: sum_{r'=0}^{r-1} (N - 2r' + 1) = r (N + 2 - r).
  return static_cast<std::size_t>(r) * (N + 2 - r) + n;
}

LadderIndex joint_unindex(int N, std::size_t flat) {
  if (flat >= joint_dim(N)) throw std::out_of_range("joint_unindex: flat index out of range");
  int r = 0;
  std::size_t offset = 0;
  while (offset + static_cast<std::size_t>(N - 2 * r + 1) <= flat) {
    offset += static_cast<std::size_t>(N - 2 * r + 1);
    ++r;
  }
  return {static_cast<int>(flat - offset), r};
}

PureDistribution pure_inverted_state(int N) {
  if (N < 1) throw std::invalid_argument("pure_inverted_state: N must be >= 1");
  PureDistribution p{N, Domain::Linear, true, std::vector<double>(N + 1, 0.0)};
  p.values[N] = 1.0;
  return p;
}

JointDistribution joint_inverted_state(int N) {
  if (N < 1) throw std::invalid_argument("joint_inverted_state: N must be >= 1");
  JointDistribution p{N, Domain::Linear, true, std::vector<double>(joint_dim(N), 0.0)};
  p.at(N, 0) = 1.0;
  return p;
}

}  // namespace dicke
