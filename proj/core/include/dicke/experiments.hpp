#ifndef DICKE_EXPERIMENTS_HPP
#define DICKE_EXPERIMENTS_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dicke/closedform.hpp"
#include "dicke/ladder.hpp"

// Scripted desk-scale studies: convergence of the asymptotic solutions
// to the integrated rate equations, the universal burst curve and its
// peak, pulse timing, the superradiance threshold, and the incoherent
// photon budget.  Results are persisted as deterministic CSV/JSON.

namespace dicke {

inline constexpr const char* kCodeVersion = "dicke 0.1.0";

// Desk-scale feasibility budgets for the integrator.
inline constexpr int kMaxPureAtoms = 5000;
inline constexpr int kMaxLossAtoms = 600;

struct TauGridSpec {
  double tau_min = 0.1;
  double tau_max_log_factor = 3.0;  // tau_max = factor * ln N
  int points = 200;
};

// Linear spacing near tau = 0, uniform in T = e^tau across the burst.
std::vector<double> make_tau_grid(double tau_min, double tau_max, int points);

struct ExperimentResult {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;  // echoed verbatim
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string created_at;  // empty unless the caller stamps it
  std::string code_version = kCodeVersion;
};

enum class ReferenceSolution { Asymptotic, Literature };

// One-norm error ||exact - reference||_1 on a tau grid, per N.
// gamma > 0 (or force_loss_ladder) runs on the (n, r) ladder against the
// loss solution; otherwise the pure ladder against R (or Pbar for
// ReferenceSolution::Literature).  Columns: N, tau, err.
ExperimentResult run_convergence(const std::vector<int>& Ns, double gamma,
                                 const TauGridSpec& grid = {},
                                 const ClosedFormParams& params = {},
                                 ReferenceSolution reference = ReferenceSolution::Asymptotic,
                                 bool force_loss_ladder = false);

double max_error_for(const ExperimentResult& convergence, int N);

// Columns: T, mu, rho.
ExperimentResult run_universal_curve(const std::vector<double>& T_grid);

struct UniversalPeak {
  double T, rho, mu;
};
// Golden-section refinement of argmax_T rho(T) to |dT| <= 1e-4.
UniversalPeak find_peak();

// argmax_tau of the exact radiance, by grid scan plus parabolic refinement.
double run_pulse_timing(int N);

// Second derivative of mu at t = 0 in unscaled time, from a forward
// finite difference of the emission rate along the integrated dynamics.
double measured_initial_curvature(int N, double gamma);

// Columns: gamma, empirical_N, predicted_N (smallest N whose measured
// initial curvature drops to <= 0, against ceil(gamma^2 + 2 gamma + 2)).
ExperimentResult run_threshold_scan(const std::vector<double>& gammas);

// Columns: N, gamma, measured, formula.  Integrates the incoherent
// emission rate over tau in [0, 4 ln N] by trapezoidal quadrature.
ExperimentResult run_nloss(int N, double gamma);

enum class ResultFormat { Csv, Json };

// Deterministic output: 17 significant digits, fixed column order; JSON
// carries the full metadata, CSV the rows only.
void write_results(const ExperimentResult& result, const std::filesystem::path& path,
                   ResultFormat format);

ExperimentResult read_results_json(const std::filesystem::path& path);

}  // namespace dicke

#endif
