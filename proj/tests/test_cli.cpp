#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is folded into the captured text
// when `merge` is set.
Run run(const std::string& args, bool merge = false, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" THREADSPLIT_CLI "' " + args;
  cmd += merge ? " 2>&1" : " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "threadsplit_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

std::string corpus(const char* name) { return std::string(THREADSPLIT_SOURCE_DIR "/corpus/") + name; }

}  // namespace

TEST_CASE("exit codes") {
  const auto pts = scratch("one.txt", "0.5 0.1 0.2 0.3\n");
  CHECK(run("verify --spec " + corpus("m0_minkowski.spec") + " --points " + pts.string()).code == 0);

  const auto dust = scratch("dust.spec", "[metric]\nPhi = 1\ng11 = 1\ng22 = 1\ng33 = 1\n"
                                         "[matter]\nmode = explicit\nrho = 1\np = 0\n");
  const Run v = run("verify --spec " + dust.string() + " --points " + pts.string());
  CHECK(v.code == 1);
  CHECK(nlohmann::json::parse(v.out)["points"][0]["status"] == "violation");

  const auto bad = scratch("bad.spec", "[metric]\nPhi = 1\ng11 = 1\ng33 = 1\n");
  const Run e = run("verify --spec " + bad.string() + " --points " + pts.string(), true);
  CHECK(e.code == 2);
  CHECK(e.out.find("MissingKey g22") != std::string::npos);

  CHECK(run("verify --spec /nonexistent/x.spec --points " + pts.string()).code == 2);
  CHECK(run("verify --bogus-flag").code == 2);
  CHECK(run("verify --spec " + corpus("m0_minkowski.spec") + " --grid x0=0:1:2 --random 3").code == 2);
}

TEST_CASE("a point outside the metric's domain is an input error for that point") {
  const auto pts = scratch("two.txt", "0 0 0 0\n# comment\n0, 0.5, 0, 0\n");
  const auto spec = scratch("sing.spec", "[metric]\nPhi = 1\ng11 = 1\ng22 = 1\ng33 = x1\n");
  const Run r = run("verify --spec " + spec.string() + " --points " + pts.string());
  CHECK(r.code == 2);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["points"].size() == 2);
  CHECK(j["points"][0]["status"] == "input-error");
  CHECK(j["points"][0]["error"].get<std::string>().rfind("SingularSpatialMetric", 0) == 0);
  CHECK(j["points"][1]["status"] == "ok");
}

TEST_CASE("empty point file gives a valid empty report") {
  const auto pts = scratch("empty.txt", "");
  const Run r = run("verify --spec " + corpus("m0_minkowski.spec") + " --points " + pts.string());
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["points"].empty());
  CHECK(j["summary"].empty());
  CHECK(j["spec_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("csv report") {
  const Run r = run("verify --spec " + corpus("m1_flrw.spec") + " --grid x0=1:3:3 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("check,max_residual\n", 0) == 0);
  CHECK(r.out.find("\ncosmo.friedmann.9.23,") != std::string::npos);
}

TEST_CASE("json report structure on a grid") {
  const Run r = run("verify --spec " + corpus("m1_flrw.spec") + " --grid x0=1:3:5,x1=0.5");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["points"].size() == 5);
  CHECK(j["points"][2]["x"][0] == 2.0);
  CHECK(j["points"][2]["x"][1] == 0.5);
  CHECK(j["points"][2]["x"][2] == 0.0);
  CHECK(j["summary"]["cosmo.friedmann.9.23"].get<double>() < 1e-12);
}

TEST_CASE("ref_form forms that disagree are flagged, not failed") {
  const Run r = run("verify --spec " + corpus("m2_almost_flrw.spec") + " --random 4 --seed 3 --box x0=1:3");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  bool found = false;
  for (const auto& f : j["flags"]) {
    if (f.get<std::string>().rfind("PAPER-DISCREPANCY:cosmo.9.22-vs-7.6", 0) == 0) found = true;
  }
  CHECK(found);
  CHECK(j["summary"]["cosmo.9.22-corrected-vs-7.6"].get<double>() < 1e-12);
}

TEST_CASE("check selection") {
  const Run r = run("verify --spec " + corpus("m5_generic.spec") +
                    " --random 2 --box x0=0.5:1,x1=-0.5:0.5 --checks oracle,cons");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(!j["summary"].empty());
  for (const auto& [name, v] : j["summary"].items()) {
    CAPTURE(name);
    CHECK((name.rfind("oracle", 0) == 0 || name.rfind("cons", 0) == 0));
  }
}

TEST_CASE("output is deterministic across thread counts") {
  const std::string args = "verify --spec " + corpus("m3_rotating.spec") + " --random 16 --seed 9 --box x1=-2:2";
  const Run a = run(args + " --threads 1");
  const Run b = run(args + " --threads 4");
  const Run c = run(args, false, "THREADSPLIT_THREADS=3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const Run d = run("verify --spec " + corpus("m3_rotating.spec") + " --random 16 --seed 10 --box x1=-2:2");
  CHECK(a.out != d.out);
}

TEST_CASE("out file and scalar kernels") {
  const fs::path out = fs::temp_directory_path() / "threadsplit_cli_test" / "report.json";
  const std::string args = "verify --spec " + corpus("m5_generic.spec") + " --random 3 --box x0=0.5:1";
  CHECK(run(args + " --out " + out.string()).code == 0);
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(nlohmann::json::parse(text)["points"].size() == 3);
  const Run s = run(args, false, "THREADSPLIT_SIMD=scalar");
  const auto js = nlohmann::json::parse(s.out);
  const auto jd = nlohmann::json::parse(text);
  CHECK(js["summary"].size() == jd["summary"].size());
}

TEST_CASE("parse and cosmo subcommands") {
  const Run p = run("parse --expr '-x1^2'");
  CHECK(p.code == 0);
  CHECK(p.out == "(neg (^ x1 2))\n");
  const Run bad = run("parse --expr '1 +'", true);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("Syntax") != std::string::npos);

  const Run spec = run("cosmo --a 'x0^2' --A '0.01*cos(x1)' --perfect-fluid --print-spec");
  CHECK(spec.code == 0);
  CHECK(spec.out.find("[cosmology]") != std::string::npos);
  CHECK(spec.out.find("perfect_fluid = true") != std::string::npos);

  const Run c = run("cosmo --a 'x0^2' --grid x0=1:3:3");
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["summary"]["cosmo.friedmann.9.24"].get<double>() < 1e-12);
  CHECK(run("cosmo --a 'x0^2' --rho 1 --grid x0=1").code == 2);
}
