#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/experiments.hpp"
#include "dicke/observables.hpp"

using namespace dicke;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "dicke-test-XXXXXX";
    std::string s = path.string();
    REQUIRE(mkdtemp(s.data()) != nullptr);
    path = s;
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("make_tau_grid shape") {
  const auto grid = make_tau_grid(0.1, 9.0, 200);
  CHECK(grid.size() == 200);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid.back() == doctest::Approx(9.0).epsilon(1e-12));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  // Tail is uniform in T = e^tau.
  const double dT = std::exp(grid[150]) - std::exp(grid[149]);
  CHECK(std::exp(grid[199]) - std::exp(grid[198]) == doctest::Approx(dT).epsilon(1e-9));
  CHECK_THROWS_AS(make_tau_grid(0.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_tau_grid(2.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("find_peak nails the universal-curve maximum") {
  const UniversalPeak peak = find_peak();
  CHECK(std::abs(peak.T - 1.391) <= 0.001);
  CHECK(std::abs(peak.rho - 0.196) <= 0.001);
  CHECK(std::abs(peak.mu - 0.532) <= 0.002);
}

TEST_CASE("run_universal_curve tabulates the continuum observables") {
  const std::vector<double> T{0.5, 1.0, 1.391, 2.0};
  const ExperimentResult res = run_universal_curve(T);
  CHECK(res.columns == std::vector<std::string>{"T", "mu", "rho"});
  REQUIRE(res.rows.size() == 4);
  for (std::size_t i = 0; i < T.size(); ++i) {
    const auto ref = continuum_observables(T[i]);
    CHECK(res.rows[i][0] == T[i]);
    CHECK(res.rows[i][1] == ref.mu);
    CHECK(res.rows[i][2] == ref.rho);
  }
  CHECK_THROWS_AS(run_universal_curve({1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("measured curvature matches the closed form") {
  for (auto [N, gamma] : std::vector<std::pair<int, double>>{{6, 1.0}, {10, 2.0}, {20, 1.0}}) {
    const double measured = measured_initial_curvature(N, gamma);
    const double expected = initial_curvature(N, gamma);
    CHECK(std::abs(measured - expected) <=
          1e-3 * std::abs(expected) + 1e-6);
  }
}

TEST_CASE("threshold scan reproduces the formula for small gamma") {
  const ExperimentResult res = run_threshold_scan({0.0, 1.0});
  CHECK(res.columns == std::vector<std::string>{"gamma", "empirical_N", "predicted_N"});
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0][1] == 2.0);
  CHECK(res.rows[0][2] == 2.0);
  CHECK(res.rows[1][1] == 5.0);
  CHECK(res.rows[1][2] == 5.0);
}

TEST_CASE("run_pulse_timing finds a positive burst time") {
  const double tau5 = run_pulse_timing(5);
  CHECK(tau5 > 0.0);
  // Finite-size deviation from the large-N law is much larger at N=5.
  CHECK(std::abs(tau5 - std::log(5.0) - 0.330) > 0.05);
  CHECK_THROWS_AS(run_pulse_timing(kMaxPureAtoms + 1), std::invalid_argument);
}

TEST_CASE("run_nloss at gamma=0 measures exactly zero") {
  const ExperimentResult res = run_nloss(40, 0.0);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0][2] == 0.0);
  CHECK(res.rows[0][3] == 0.0);
  CHECK_THROWS_AS(run_nloss(kMaxLossAtoms + 1, 0.5), std::invalid_argument);
}

TEST_CASE("run_convergence shrinks with N and honors budgets") {
  TauGridSpec spec;
  spec.points = 60;
  const ExperimentResult res = run_convergence({5, 20}, 0.0, spec);
  CHECK(res.columns == std::vector<std::string>{"N", "tau", "err"});
  const double e5 = max_error_for(res, 5), e20 = max_error_for(res, 20);
  CHECK(std::isfinite(e5));
  CHECK(std::isfinite(e20));
  CHECK(e20 < e5);
  CHECK_THROWS_AS(max_error_for(res, 7), std::invalid_argument);
  CHECK_THROWS_AS(run_convergence({kMaxPureAtoms + 1}, 0.0, spec), std::invalid_argument);
  CHECK_THROWS_AS(run_convergence({kMaxLossAtoms + 1}, 1.0, spec), std::invalid_argument);
}

TEST_CASE("pure path and gamma=0 loss path produce identical error curves") {
  TauGridSpec spec;
  spec.points = 40;
  const ExperimentResult pure = run_convergence({12}, 0.0, spec);
  const ExperimentResult loss = run_convergence({12}, 0.0, spec, {},
                                                ReferenceSolution::Asymptotic, true);
  REQUIRE(pure.rows.size() == loss.rows.size());
  for (std::size_t i = 0; i < pure.rows.size(); ++i) {
    CHECK(pure.rows[i][1] == loss.rows[i][1]);
    CHECK(std::abs(pure.rows[i][2] - loss.rows[i][2]) <= 1e-9);
  }
}

TEST_CASE("literature reference is pure-ladder only") {
  TauGridSpec spec;
  spec.points = 24;
  CHECK_THROWS_AS(run_convergence({10}, 0.5, spec, {}, ReferenceSolution::Literature),
                  std::invalid_argument);
  const ExperimentResult res =
      run_convergence({10}, 0.0, spec, {}, ReferenceSolution::Literature);
  CHECK(std::isfinite(max_error_for(res, 10)));
}

TEST_CASE("results are written deterministically and round-trip") {
  TempDir dir;
  ExperimentResult res;
  res.name = "demo";
  res.parameters = {{"gamma", "0.5"}, {"points", "3"}};
  res.columns = {"x", "y"};
  res.rows = {{0.1, 1.0 / 3.0}, {0.2, 2e-17}, {0.30000000000000004, -5.5}};

  const auto csv = dir.path / "demo.csv";
  const auto json = dir.path / "demo.json";
  write_results(res, csv, ResultFormat::Csv);
  write_results(res, json, ResultFormat::Json);
  const std::string csv_bytes = slurp(csv), json_bytes = slurp(json);

  // Byte-for-byte reproducibility.
  write_results(res, csv, ResultFormat::Csv);
  write_results(res, json, ResultFormat::Json);
  CHECK(slurp(csv) == csv_bytes);
  CHECK(slurp(json) == json_bytes);

  // CSV header matches the declared columns; 17-digit floats round-trip.
  CHECK(csv_bytes.rfind("x,y\n", 0) == 0);
  const ExperimentResult back = read_results_json(json);
  CHECK(back.name == res.name);
  CHECK(back.parameters == res.parameters);
  CHECK(back.columns == res.columns);
  REQUIRE(back.rows.size() == res.rows.size());
  for (std::size_t i = 0; i < res.rows.size(); ++i)
    for (std::size_t k = 0; k < res.rows[i].size(); ++k)
      CHECK(back.rows[i][k] == res.rows[i][k]);
  CHECK(back.code_version == kCodeVersion);

  ExperimentResult empty = res;
  empty.rows.clear();
  CHECK_THROWS_AS(write_results(empty, csv, ResultFormat::Csv), std::invalid_argument);
}

TEST_CASE("experiment reruns are bit-stable end to end") {
  TempDir dir;
  TauGridSpec spec;
  spec.points = 30;
  const auto a = dir.path / "a.json", b = dir.path / "b.json";
  write_results(run_convergence({8, 14}, 0.0, spec), a, ResultFormat::Json);
  write_results(run_convergence({8, 14}, 0.0, spec), b, ResultFormat::Json);
  CHECK(slurp(a) == slurp(b));
}
