#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "svg.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string output;
};

// Run the installed CLI binary with stdout+stderr captured to a file.
RunResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path capture = scratch / "capture.txt";
  const std::string cmd =
      std::string(DICKE_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream is(capture);
  std::ostringstream os;
  os << is.rdbuf();
  return {WEXITSTATUS(raw), os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string s = (fs::temp_directory_path() / "dicke-cli-XXXXXX").string();
    REQUIRE(mkdtemp(s.data()) != nullptr);
    path = s;
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("evolve prints the N=2 analytic chain") {
  TempDir dir;
  const RunResult r =
      run_cli("evolve --n 2 --tau 1 --outdir " + dir.path.string(), dir.path);
  CHECK(r.code == 0);
  CHECK(r.output.find("0.264241") != std::string::npos);
  CHECK(r.output.find("0.367879") != std::string::npos);
  CHECK(fs::exists(dir.path / "evolve.csv"));
  CHECK(fs::exists(dir.path / "evolve_manifest.json"));
  CHECK(slurp(dir.path / "evolve.csv").rfind("tau,n,p\n", 0) == 0);
}

TEST_CASE("curve prints the universal peak and writes artifacts") {
  TempDir dir;
  const RunResult r =
      run_cli("curve --tmin 0.1 --tmax 10 --outdir " + dir.path.string(), dir.path);
  CHECK(r.code == 0);
  CHECK(r.output.find("T*=1.39") != std::string::npos);
  CHECK(r.output.find("rho*=0.19") != std::string::npos);
  CHECK(fs::exists(dir.path / "curve.csv"));
  const std::string svg = slurp(dir.path / "curve.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("closedform tabulates a distribution") {
  TempDir dir;
  const RunResult r = run_cli(
      "closedform --n 10 --tau 2 --which q --outdir " + dir.path.string(), dir.path);
  CHECK(r.code == 0);
  CHECK(r.output.find("one_norm=") != std::string::npos);
  CHECK(slurp(dir.path / "closedform_q.csv").rfind("n,value\n", 0) == 0);
}

TEST_CASE("usage errors exit with code 2") {
  TempDir dir;
  CHECK(run_cli("no-such-command", dir.path).code == 2);
  CHECK(run_cli("evolve --no-such-flag 3", dir.path).code == 2);
  CHECK(run_cli("evolve --n 0 --outdir " + dir.path.string(), dir.path).code == 2);
  CHECK(run_cli("", dir.path).code == 2);
  CHECK(run_cli("closedform --which nonsense --outdir " + dir.path.string(), dir.path)
            .code == 2);
}

TEST_CASE("numeric failures exit with code 1") {
  TempDir dir;
  // An absurdly small step budget cannot reach the requested time.
  const RunResult r = run_cli(
      "evolve --n 50 --tau 5 --max-steps 3 --outdir " + dir.path.string(), dir.path);
  CHECK(r.code == 1);
  CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  TempDir dir;
  const RunResult r = run_cli("--help", dir.path);
  CHECK(r.code == 0);
  CHECK(r.output.find("evolve") != std::string::npos);
}

TEST_CASE("rerunning from the manifest reproduces outputs byte-for-byte") {
  TempDir dir;
  const fs::path a = dir.path / "a", b = dir.path / "b";
  const RunResult first = run_cli(
      "converge --ns 6,10 --points 30 --gamma 0 --outdir " + a.string(), dir.path);
  REQUIRE(first.code == 0);
  const RunResult second =
      run_cli("converge --config " + (a / "converge_manifest.json").string() +
                  " --outdir " + b.string(),
              dir.path);
  REQUIRE(second.code == 0);
  CHECK(slurp(a / "converge.csv") == slurp(b / "converge.csv"));
  CHECK(slurp(a / "converge.json") == slurp(b / "converge.json"));
  CHECK(slurp(a / "converge.svg") == slurp(b / "converge.svg"));
  CHECK(first.output == second.output);
}

TEST_CASE("flags win over config-file values") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.cfg";
  {
    std::ofstream os(cfg);
    os << "# comment line\n";
    os << "n=2\n";
    os << "tau=0.25\n";
  }
  const RunResult r = run_cli("evolve --config " + cfg.string() + " --tau 1 --outdir " +
                                  dir.path.string(),
                              dir.path);
  CHECK(r.code == 0);
  CHECK(r.output.find("tau=1.000000") != std::string::npos);
  CHECK(r.output.find("0.264241") != std::string::npos);  // n=2 came from the file
}

TEST_CASE("emit_svg rejects degenerate tables") {
  TempDir dir;
  dicke::ExperimentResult table;
  table.name = "t";
  table.columns = {"x", "y"};
  table.rows = {{1.0, 2.0}};
  CHECK_THROWS_AS(dicke::emit_svg(table, "x", {"y"}, dir.path / "t.svg"),
                  std::invalid_argument);
  table.rows = {{1.0, 2.0}, {1.0, 3.0}};
  CHECK_THROWS_AS(dicke::emit_svg(table, "x", {"y"}, dir.path / "t.svg"),
                  std::invalid_argument);  // all-equal x
  table.rows = {{1.0, 2.0}, {2.0, 3.0}};
  CHECK_THROWS_AS(dicke::emit_svg(table, "missing", {"y"}, dir.path / "t.svg"),
                  std::invalid_argument);
  CHECK_NOTHROW(dicke::emit_svg(table, "x", {"y"}, dir.path / "t.svg"));

  // Log-y output stays finite for zero-clipped values.
  table.rows = {{1.0, 0.0}, {2.0, 1e-3}, {3.0, 1.0}};
  CHECK_NOTHROW(dicke::emit_svg(table, "x", {"y"}, dir.path / "t2.svg", false, true));
  const std::string svg = slurp(dir.path / "t2.svg");
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
}
