#include "dicke/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace dicke {

namespace {

// Dormand-Prince 4(5) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

void axpy(Vec& out, const Vec& y, double h, std::initializer_list<std::pair<const Vec*, double>> ks) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& [k, c] : ks) acc += c * (*k)[i];
    out[i] = y[i] + h * acc;
  }
}

Vec clamp_snapshot(const Vec& p, double floor, double tau) {
  Vec out = p;
  for (double& x : out) {
    if (std::isnan(x))
      throw std::runtime_error("evolve: instability, NaN entry at tau=" +
                               std::to_string(tau));
    if (x < 0.0) {
      if (x < -floor)
        throw std::runtime_error("evolve: instability, entry " + std::to_string(x) +
                                 " below the negativity floor at tau=" +
                                 std::to_string(tau));
      x = 0.0;
    }
  }
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be > 0");
  if (!(max_step > 0.0)) throw std::invalid_argument("SolverConfig: max_step must be > 0");
  if (snapshot_times.empty())
    throw std::invalid_argument("SolverConfig: snapshot_times must be nonempty");
  if (snapshot_times.front() < 0.0)
    throw std::invalid_argument("SolverConfig: snapshot times must be >= 0");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("SolverConfig: snapshot times must be nondecreasing");
  if (max_steps == 0)
    throw std::invalid_argument("SolverConfig: max_steps must be > 0");
}

std::vector<Snapshot> evolve(const Generator& g, const std::vector<double>& p0,
                             const SolverConfig& cfg) {
  cfg.validate();
  if (p0.size() != g.dim()) throw std::invalid_argument("evolve: p0 dimension mismatch");

  const std::size_t dim = g.dim();
  // Explicit RK stability cap for the stiffest mode.  Steps near the
  // stability boundary let barely-damped stiff modes ring through the
  // far tail of the distribution, so stay a factor 2 inside it.
  const double hmax = std::min(cfg.max_step, 1.0 / std::max(g.max_outflow(), 1e-300));
  const double tau_end = cfg.snapshot_times.back();

  std::size_t accepted = 0;
  auto neg_floor = [&] {
    if (cfg.negativity_floor >= 0.0) return cfg.negativity_floor;
    return std::sqrt(static_cast<double>(dim)) * (cfg.abs_tol + cfg.rel_tol) *
           static_cast<double>(accepted + 1);
  };

  std::vector<Snapshot> snaps;
  snaps.reserve(cfg.snapshot_times.size());
  std::size_t next_snap = 0;
  while (next_snap < cfg.snapshot_times.size() && cfg.snapshot_times[next_snap] == 0.0) {
    snaps.push_back({0.0, clamp_snapshot(p0, neg_floor(), 0.0)});
    ++next_snap;
  }
  if (next_snap == cfg.snapshot_times.size()) return snaps;

  Vec y = p0, ytmp(dim), ynew(dim);
  Vec k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  g.apply(y, k1);

  double tau = 0.0;
  double h = std::min(hmax, 1e-2);

  std::size_t attempts = 0;
  while (tau < tau_end) {
    if (++attempts > cfg.max_steps)
      throw std::runtime_error("evolve: step budget exceeded");
    if (h < 1e-14 * std::max(1.0, tau))
      throw std::runtime_error("evolve: step underflow (tolerance failure)");
    h = std::min(h, tau_end - tau);

    axpy(ytmp, y, h, {{&k1, a21}});
    g.apply(ytmp, k2);
    axpy(ytmp, y, h, {{&k1, a31}, {&k2, a32}});
    g.apply(ytmp, k3);
    axpy(ytmp, y, h, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
    g.apply(ytmp, k4);
    axpy(ytmp, y, h, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
    g.apply(ytmp, k5);
    axpy(ytmp, y, h, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
    g.apply(ytmp, k6);
    axpy(ynew, y, h, {{&k1, b1}, {&k3, b3}, {&k4, b4}, {&k5, b5}, {&k6, b6}});
    g.apply(ynew, k7);  // FSAL

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                       e6 * k6[i] + e7 * k7[i]);
      double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / dim);

    if (err <= 1.0) {
      // Emit dense-output snapshots inside (tau, tau + h].
      while (next_snap < cfg.snapshot_times.size() &&
             cfg.snapshot_times[next_snap] <= tau + h + 1e-14 * std::max(1.0, tau)) {
        const double ts = std::min(cfg.snapshot_times[next_snap], tau + h);
        const double th = (ts - tau) / h;
        Vec yi(dim);
        for (std::size_t i = 0; i < dim; ++i) {
          const double c2 = ynew[i] - y[i];
          const double c3 = h * k1[i] - c2;
          const double c4 = c2 - h * k7[i] - c3;
          const double c5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                 d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
          yi[i] = y[i] + th * (c2 + (1.0 - th) * (c3 + th * (c4 + (1.0 - th) * c5)));
        }
        snaps.push_back({ts, clamp_snapshot(yi, neg_floor(), ts)});
        ++next_snap;
      }
      ++accepted;
      tau += h;
      y.swap(ynew);
      k1.swap(k7);
      if (next_snap == cfg.snapshot_times.size()) break;
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    h = std::min(h, hmax);
  }
  return snaps;
}

std::vector<Snapshot> evolve(const Generator& g, const PureDistribution& p0,
                             const SolverConfig& cfg) {
  if (!is_pure_family(g.family()))
    throw std::invalid_argument("evolve: pure distribution on a loss generator");
  if (p0.N != g.atom_count()) throw std::invalid_argument("evolve: atom count mismatch");
  return evolve(g, p0.to_linear().values, cfg);
}

std::vector<Snapshot> evolve(const Generator& g, const JointDistribution& p0,
                             const SolverConfig& cfg) {
  if (is_pure_family(g.family()))
    throw std::invalid_argument("evolve: joint distribution on a pure generator");
  if (p0.N != g.atom_count()) throw std::invalid_argument("evolve: atom count mismatch");
  return evolve(g, p0.to_linear().values, cfg);
}

std::vector<double> evolve_dense_oracle(const Generator& g,
                                        const std::vector<double>& p0, double tau) {
  const std::size_t dim = g.dim();
  if (dim > 4096) throw std::invalid_argument("evolve_dense_oracle: state space too large");
  if (p0.size() != dim) throw std::invalid_argument("evolve_dense_oracle: dimension mismatch");
  if (tau < 0.0) throw std::invalid_argument("evolve_dense_oracle: tau must be >= 0");

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);
  const int N = g.atom_count();
  const bool pure = is_pure_family(g.family());
  auto index = [&](int n, int r) {
    return pure ? static_cast<std::size_t>(n) : joint_index(N, n, r);
  };
  if (pure) {
    for (int n = 0; n <= N; ++n) G(n, n) = -g.outflow(n);
  } else {
    for (int r = 0; r <= N / 2; ++r)
      for (int n = 0; n <= N - 2 * r; ++n)
        G(index(n, r), index(n, r)) = -g.outflow(n, r);
  }
  for (const Transition& t : g.materialize())
    G(index(t.dst_n, t.dst_r), index(t.src_n, t.src_r)) += t.rate;

  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(p0.data(), dim);
  Eigen::VectorXd out = (G * tau).exp() * v;
  return std::vector<double>(out.data(), out.data() + dim);
}

void write_snapshots_csv(const Generator& g, const std::vector<Snapshot>& snaps,
                         std::ostream& os) {
  const bool pure = is_pure_family(g.family());
  const int N = g.atom_count();
  os << (pure ? "tau,n,p\n" : "tau,n,r,p\n");
  char buf[64];
  for (const Snapshot& s : snaps) {
    for (std::size_t i = 0; i < s.p.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", s.p[i]);
      if (pure) {
        os << s.tau << ',' << i << ',' << buf << '\n';
      } else {
        LadderIndex li = joint_unindex(N, i);
        os << s.tau << ',' << li.n << ',' << li.r << ',' << buf << '\n';
      }
    }
  }
}

}  // namespace dicke
