#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dicke/closedform.hpp"
#include "dicke/experiments.hpp"
#include "dicke/integrator.hpp"
#include "dicke/observables.hpp"
#include "dicke/rates.hpp"
#include "svg.hpp"

namespace dicke {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string default_outdir() {
  const char* env = std::getenv("DICKE_OUTDIR");
  return env && *env ? env : ".";
}

// Flat key=value config text, or a previously written JSON manifest
// (recognized by a leading '{'); either way the result is a list of
// extra command-line tokens injected *before* the user's flags so that
// explicit flags win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  std::string text = buffer.str();
  std::vector<std::string> tokens;
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    for (const auto& [k, v] : j.at("options").items()) {
      tokens.push_back("--" + k);
      tokens.push_back(v.get<std::string>());
    }
    return tokens;
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const std::size_t eq = line.find('=', start);
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    tokens.push_back("--" + line.substr(start, eq - start));
    tokens.push_back(line.substr(eq + 1));
  }
  return tokens;
}

void write_manifest(const std::string& command, const fs::path& outdir,
                    const std::vector<std::pair<std::string, std::string>>& options) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["options"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : options) j["options"][k] = v;
  const fs::path path = outdir / (command + "_manifest.json");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("manifest: cannot open " + path.string());
  os << j.dump(2) << '\n';
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ",") + fmt17(x);
  return out;
}

struct CommonOpts {
  std::string outdir = default_outdir();
  std::string config;  // consumed before parsing; echoed for reference only
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  std::size_t max_steps = 10'000'000;

  void attach(CLI::App* cmd) {
    cmd->add_option("--outdir", outdir, "Output directory")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--config", config,
                    "key=value file or manifest JSON; flags override it")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--rel-tol", rel_tol, "Solver relative tolerance")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--abs-tol", abs_tol, "Solver absolute tolerance")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--max-steps", max_steps, "Solver step budget")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  SolverConfig solver(std::vector<double> taus) const {
    SolverConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    cfg.max_steps = max_steps;
    cfg.snapshot_times = std::move(taus);
    return cfg;
  }

  fs::path ensure_outdir() const {
    fs::path p(outdir);
    fs::create_directories(p);
    return p;
  }
};

struct ParamOpts {
  double delta0 = 0.75, delta1 = 0.4;
  int lambda = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--delta0", delta0, "Early-time exponent delta0")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--delta1", delta1, "Matching exponent delta1")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--lambda", lambda, "Continuum offset (0 or 1)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  ClosedFormParams params() const {
    ClosedFormParams p;
    p.delta0 = delta0;
    p.delta1 = delta1;
    p.lambda = lambda;
    p.validate();
    return p;
  }
};

int cmd_evolve(const CommonOpts& common, int N, double gamma, double tau) {
  if (tau < 0.0) throw std::invalid_argument("evolve: tau must be >= 0");
  const fs::path out = common.ensure_outdir();
  const bool loss = gamma > 0.0;
  if (N < 1 || N > (loss ? kMaxLossAtoms : kMaxPureAtoms))
    throw std::invalid_argument("evolve: N outside the feasibility budget");

  Generator g(N, loss ? RateFamily::LossExact : RateFamily::PureExact, gamma);
  const std::vector<Snapshot> snaps =
      loss ? evolve(g, joint_inverted_state(N), common.solver({tau}))
           : evolve(g, pure_inverted_state(N), common.solver({tau}));

  if (loss) {
    JointDistribution p{N, Domain::Linear, true, snaps.back().p};
    const ObservableSample s = joint_observables(p, gamma, tau);
    std::cout << "tau=" << fmt6(tau) << " mu=" << fmt6(s.mu) << " rho=" << fmt6(s.rho)
              << " incoherent_rate=" << fmt6(s.incoherent_rate)
              << " dark_mean=" << fmt6(s.dark_mean) << '\n';
  } else {
    PureDistribution p{N, Domain::Linear, true, snaps.back().p};
    const PureObservables s = pure_observables(p);
    std::cout << "P = (";
    for (int n = 0; n <= N; ++n) std::cout << (n ? ", " : "") << fmt6(p.values[n]);
    std::cout << ")\n";
    std::cout << "tau=" << fmt6(tau) << " mu=" << fmt6(s.mu) << " rho=" << fmt6(s.rho)
              << '\n';
  }

  std::ofstream csv(out / "evolve.csv", std::ios::binary);
  write_snapshots_csv(g, snaps, csv);
  write_manifest("evolve", out,
                 {{"n", std::to_string(N)},
                  {"gamma", fmt17(gamma)},
                  {"tau", fmt17(tau)},
                  {"rel-tol", fmt17(common.rel_tol)},
                  {"abs-tol", fmt17(common.abs_tol)},
                  {"max-steps", std::to_string(common.max_steps)},
                  {"outdir", common.outdir}});
  return 0;
}

int cmd_closedform(const CommonOpts& common, const ParamOpts& po, int N, double gamma,
                   double tau, const std::string& which) {
  const fs::path out = common.ensure_outdir();
  const ClosedFormParams params = po.params();
  ExperimentResult table;
  table.name = "closedform_" + which;
  table.parameters = {{"n", std::to_string(N)},  {"gamma", fmt17(gamma)},
                      {"tau", fmt17(tau)},       {"delta0", fmt17(params.delta0)},
                      {"delta1", fmt17(params.delta1)}, {"lambda", std::to_string(params.lambda)}};
  double norm = 0.0;
  if (which == "rloss") {
    const JointDistribution d = eval_R_loss(N, gamma, tau, params).to_linear();
    table.columns = {"n", "r", "value"};
    for (int r = 0; r <= N / 2; ++r)
      for (int n = 0; n <= N - 2 * r; ++n)
        table.rows.push_back({(double)n, (double)r, d.at(n, r)});
    norm = d.one_norm();
  } else {
    PureDistribution d;
    if (which == "q")
      d = eval_Q(N, tau);
    else if (which == "pbar")
      d = eval_Pbar(N, tau, params.lambda);
    else if (which == "r")
      d = eval_R(N, tau, params);
    else
      throw std::invalid_argument("closedform: --which must be q, pbar, r or rloss");
    d = d.to_linear();
    table.columns = {"n", "value"};
    for (int n = 0; n <= N; ++n) table.rows.push_back({(double)n, d.values[n]});
    norm = d.one_norm();
  }
  std::cout << "one_norm=" << fmt17(norm) << '\n';
  write_results(table, out / ("closedform_" + which + ".csv"), ResultFormat::Csv);
  write_results(table, out / ("closedform_" + which + ".json"), ResultFormat::Json);
  write_manifest("closedform", out,
                 {{"n", std::to_string(N)},
                  {"gamma", fmt17(gamma)},
                  {"tau", fmt17(tau)},
                  {"which", which},
                  {"delta0", fmt17(params.delta0)},
                  {"delta1", fmt17(params.delta1)},
                  {"lambda", std::to_string(params.lambda)},
                  {"outdir", common.outdir}});
  return 0;
}

int cmd_converge(const CommonOpts& common, const ParamOpts& po, std::vector<int> Ns,
                 double gamma, int points, double tau_min, double tau_max_factor,
                 const std::string& reference) {
  const fs::path out = common.ensure_outdir();
  TauGridSpec spec;
  spec.tau_min = tau_min;
  spec.tau_max_log_factor = tau_max_factor;
  spec.points = points;
  ReferenceSolution ref;
  if (reference == "asymptotic")
    ref = ReferenceSolution::Asymptotic;
  else if (reference == "literature")
    ref = ReferenceSolution::Literature;
  else
    throw std::invalid_argument("converge: --reference must be asymptotic or literature");

  const ExperimentResult res = run_convergence(Ns, gamma, spec, po.params(), ref);
  for (int N : Ns)
    std::cout << "N=" << N << " max_err=" << fmt17(max_error_for(res, N)) << '\n';
  write_results(res, out / "converge.csv", ResultFormat::Csv);
  write_results(res, out / "converge.json", ResultFormat::Json);
  emit_svg(res, "tau", {"err"}, out / "converge.svg", false, true);
  write_manifest("converge", out,
                 {{"ns", join_ints(Ns)},
                  {"gamma", fmt17(gamma)},
                  {"points", std::to_string(points)},
                  {"tau-min", fmt17(tau_min)},
                  {"tau-max-factor", fmt17(tau_max_factor)},
                  {"reference", reference},
                  {"delta0", fmt17(po.delta0)},
                  {"delta1", fmt17(po.delta1)},
                  {"lambda", std::to_string(po.lambda)},
                  {"outdir", common.outdir}});
  return 0;
}

int cmd_curve(const CommonOpts& common, double tmin, double tmax, int points) {
  if (!(tmin > 0.0) || !(tmax > tmin) || points < 2)
    throw std::invalid_argument("curve: need 0 < tmin < tmax and points >= 2");
  const fs::path out = common.ensure_outdir();
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = tmin + (tmax - tmin) * i / (points - 1);
  const ExperimentResult res = run_universal_curve(grid);
  const UniversalPeak peak = find_peak();
  std::cout << "peak: T*=" << fmt6(peak.T) << " rho*=" << fmt6(peak.rho)
            << " mu*=" << fmt6(peak.mu) << '\n';
  write_results(res, out / "curve.csv", ResultFormat::Csv);
  emit_svg(res, "T", {"mu", "rho"}, out / "curve.svg");
  write_manifest("curve", out,
                 {{"tmin", fmt17(tmin)},
                  {"tmax", fmt17(tmax)},
                  {"points", std::to_string(points)},
                  {"outdir", common.outdir}});
  return 0;
}

int cmd_threshold(const CommonOpts& common, const std::vector<double>& gammas) {
  const fs::path out = common.ensure_outdir();
  const ExperimentResult res = run_threshold_scan(gammas);
  for (const auto& row : res.rows)
    std::cout << "gamma=" << fmt6(row[0]) << " empirical_N=" << (int)row[1]
              << " predicted_N=" << (int)row[2] << '\n';
  write_results(res, out / "threshold.csv", ResultFormat::Csv);
  write_manifest("threshold", out,
                 {{"gammas", join_doubles(gammas)}, {"outdir", common.outdir}});
  return 0;
}

int cmd_nloss(const CommonOpts& common, int N, double gamma) {
  const fs::path out = common.ensure_outdir();
  const ExperimentResult res = run_nloss(N, gamma);
  std::cout << "measured=" << fmt17(res.rows[0][2]) << " formula=" << fmt17(res.rows[0][3])
            << '\n';
  write_results(res, out / "nloss.csv", ResultFormat::Csv);
  write_manifest("nloss", out,
                 {{"n", std::to_string(N)},
                  {"gamma", fmt17(gamma)},
                  {"outdir", common.outdir}});
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Collective-decay rate-equation laboratory"};
  app.require_subcommand(1);

  CommonOpts common;
  ParamOpts po;

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the exact rate equations");
  int ev_n = 2;
  double ev_gamma = 0.0, ev_tau = 1.0;
  evolve_cmd->add_option("--n", ev_n, "Atom count")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  evolve_cmd->add_option("--gamma", ev_gamma, "Incoherent/collective ratio")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  evolve_cmd->add_option("--tau", ev_tau, "Snapshot time (rescaled)")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  common.attach(evolve_cmd);

  // closedform
  auto* closed_cmd = app.add_subcommand("closedform", "Tabulate a closed-form solution");
  int cf_n = 20;
  double cf_gamma = 0.0, cf_tau = 1.0;
  std::string cf_which = "r";
  closed_cmd->add_option("--n", cf_n, "Atom count")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  closed_cmd->add_option("--gamma", cf_gamma, "Incoherent/collective ratio")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  closed_cmd->add_option("--tau", cf_tau, "Evaluation time")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  closed_cmd->add_option("--which", cf_which, "q, pbar, r or rloss")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  common.attach(closed_cmd);
  po.attach(closed_cmd);

  // converge
  auto* conv_cmd = app.add_subcommand("converge", "Exact-vs-closed-form error curves");
  std::vector<int> cv_ns{5, 20, 100};
  double cv_gamma = 0.0, cv_tau_min = 0.1, cv_factor = 3.0;
  int cv_points = 200;
  std::string cv_reference = "asymptotic";
  conv_cmd->add_option("--ns", cv_ns, "Atom counts")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  conv_cmd->add_option("--gamma", cv_gamma, "Incoherent/collective ratio")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  conv_cmd->add_option("--points", cv_points, "Grid points")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  conv_cmd->add_option("--tau-min", cv_tau_min, "Grid start")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  conv_cmd->add_option("--tau-max-factor", cv_factor, "Grid end as a multiple of ln N")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  conv_cmd->add_option("--reference", cv_reference, "asymptotic or literature")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  common.attach(conv_cmd);
  po.attach(conv_cmd);

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "Universal burst curve and its peak");
  double cu_tmin = 0.1, cu_tmax = 10.0;
  int cu_points = 200;
  curve_cmd->add_option("--tmin", cu_tmin, "Smallest T")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  curve_cmd->add_option("--tmax", cu_tmax, "Largest T")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  curve_cmd->add_option("--points", cu_points, "Grid points")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  common.attach(curve_cmd);

  // threshold
  auto* thr_cmd = app.add_subcommand("threshold", "Empirical vs predicted burst threshold");
  std::vector<double> th_gammas{0.0, 1.0, 2.0};
  thr_cmd->add_option("--gammas", th_gammas, "Loss ratios to scan")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  common.attach(thr_cmd);

  // nloss
  auto* nl_cmd = app.add_subcommand("nloss", "Incoherent photon budget");
  int nl_n = 100;
  double nl_gamma = 0.5;
  nl_cmd->add_option("--n", nl_n, "Atom count")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  nl_cmd->add_option("--gamma", nl_gamma, "Incoherent/collective ratio")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  common.attach(nl_cmd);

  // Inject --config file contents ahead of the explicit flags so the
  // flags win; the file is located with a light pre-scan.
  std::vector<std::string> args;
  try {
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size())
        config_path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0)
        config_path = args[i].substr(9);
    }
    if (!config_path.empty() && !args.empty()) {
      const std::vector<std::string> extra = config_tokens(config_path);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    // CLI11 consumes tokens in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (evolve_cmd->parsed()) return cmd_evolve(common, ev_n, ev_gamma, ev_tau);
    if (closed_cmd->parsed())
      return cmd_closedform(common, po, cf_n, cf_gamma, cf_tau, cf_which);
    if (conv_cmd->parsed())
      return cmd_converge(common, po, cv_ns, cv_gamma, cv_points, cv_tau_min, cv_factor,
                          cv_reference);
    if (curve_cmd->parsed()) return cmd_curve(common, cu_tmin, cu_tmax, cu_points);
    if (thr_cmd->parsed()) return cmd_threshold(common, th_gammas);
    if (nl_cmd->parsed()) return cmd_nloss(common, nl_n, nl_gamma);
    std::cerr << "usage error: no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dicke
