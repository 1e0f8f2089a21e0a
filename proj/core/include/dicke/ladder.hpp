#ifndef DICKE_LADDER_HPP
#define DICKE_LADDER_HPP

#include <cstddef>
#include <vector>

// State spaces for collective decay of N two-level emitters.
//
// The "pure" ladder is indexed by n, the number of removable collective
// excitations, n in {0..N}.  The "lossy" ladder additionally tracks the
// number of dark excitations r, with r in {0..floor(N/2)} and
// n in {0..N-2r} (a triangular index set).

namespace dicke {

enum class Domain { Linear, Log };

// Probability vector over the pure ladder, values[n] for n = 0..N.
// Log-domain storage uses -inf for exact zeros; conversion back to
// linear clamps -inf to 0.  `normalized` marks states that claim unit
// one-norm (closed-form solutions are deliberately sub-/super-normalized
// and carry normalized = false).
struct PureDistribution {
  int N = 0;
  Domain domain = Domain::Linear;
  bool normalized = true;
  std::vector<double> values;

  double one_norm() const;
  PureDistribution to_linear() const;
  PureDistribution to_log() const;
};

// Probability table over the (n, r) triangle, stored flat, row-major by
// r (all n at r=0, then all n at r=1, ...).
struct JointDistribution {
  int N = 0;
  Domain domain = Domain::Linear;
  bool normalized = true;
  std::vector<double> values;

  double& at(int n, int r);
  double at(int n, int r) const;

  double one_norm() const;
  JointDistribution to_linear() const;
  JointDistribution to_log() const;

  // Marginal over r, in linear domain.
  PureDistribution marginal_n() const;
};

struct LadderIndex {
  int n = 0;
  int r = 0;
};

bool in_triangle(int N, int n, int r);

// Number of (n, r) states: sum_{r=0}^{floor(N/2)} (N - 2r + 1).
// Equals (N/2 + 1)^2 for even N.  Rejects N < 1.
std::size_t joint_dim(int N);

// Flat index of (n, r), row-major by r.  Rejects out-of-triangle input.
std::size_t joint_index(int N, int n, int r);

// Inverse of joint_index.
LadderIndex joint_unindex(int N, std::size_t flat);

// Fully inverted initial states: delta_{n,N} and delta_{n,N} delta_{r,0}.
PureDistribution pure_inverted_state(int N);
JointDistribution joint_inverted_state(int N);

}  // namespace dicke

#endif
