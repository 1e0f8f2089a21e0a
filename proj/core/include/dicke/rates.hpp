#ifndef DICKE_RATES_HPP
#define DICKE_RATES_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "dicke/ladder.hpp"

// Transition-rate generators for the collective-decay rate equations,
// in rescaled time tau = N t.
//
// Pure families act on the ladder n = 0..N with a single arc n -> n-1.
// Loss families act on the (n, r) triangle with up to three outgoing
// arcs per state:
//   (n, r) -> (n-1, r)    collective decay,       rate Gamma2
//   (n, r) -> (n-2, r+1)  dark-excitation gain,   rate Gamma3
//   (n, r) -> (n, r-1)    dark-excitation decay,  rate Gamma4
// and total outflow Gamma1.  Probability-conserving families satisfy
// Gamma1 = Gamma2 + Gamma3 + Gamma4 identically; the linearized early
// families leak at the state-space edge by construction.

namespace dicke {

enum class RateFamily {
  PureExact,   // gamma_n = n (N - n + 1) / N
  PureEarly,   // gamma_n = N - n + 1
  PureLate,    // gamma_n = n
  LossExact,   // full four-rate stencil
  LossEarly,   // linearized around the fully inverted corner
  LossApprox,  // simplified stencil with the r-decay channel dropped
  LossLate,    // linearized around n = 0, keeping the gamma r / N decay
};

bool is_pure_family(RateFamily family);

struct Transition {
  int src_n, src_r;
  int dst_n, dst_r;
  double rate;
};

class Generator {
 public:
  // gamma is the incoherent/collective ratio; pure families ignore it.
  Generator(int N, RateFamily family, double gamma = 0.0);

  int atom_count() const { return N_; }
  RateFamily family() const { return family_; }
  double gamma() const { return gamma_; }
  std::size_t dim() const { return dim_; }

  // Closed-form rate evaluation (pure and reentrant).  Out-of-triangle
  // or boundary arcs are exact zeros.
  double outflow(int n, int r = 0) const;       // Gamma1 (pure: gamma_n)
  double rate_collective(int n, int r = 0) const;  // Gamma2
  double rate_gain_dark(int n, int r) const;       // Gamma3
  double rate_lose_dark(int n, int r) const;       // Gamma4

  // dp = G p (master-equation right-hand side), lazily evaluated.
  void apply(std::span<const double> p, std::span<double> dp) const;

  // Sparse off-diagonal arcs, only those with an in-range target.
  std::vector<Transition> materialize() const;

  double max_outflow() const;

  void dump_csv(std::ostream& os) const;

 private:
  int N_;
  RateFamily family_;
  double gamma_;
  std::size_t dim_;
};

// Max over states of |Gamma1 - (Gamma2 + Gamma3 + Gamma4)| for loss
// families, evaluating the formulas as written (arcs leaving the
// triangle excluded); identically 0 for pure families.
double verify_conservation(const Generator& g);

}  // namespace dicke

#endif
