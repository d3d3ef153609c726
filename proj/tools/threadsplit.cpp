#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "threadsplit/cosmology.hpp"
#include "threadsplit/error.hpp"
#include "threadsplit/expr.hpp"
#include "threadsplit/metric.hpp"
#include "threadsplit/pipeline.hpp"
#include "threadsplit/report.hpp"

namespace ts = threadsplit;

namespace {

struct PointSource {
  std::string points_file;
  std::string grid;
  std::size_t random = 0;
  std::uint64_t seed = 1;
  std::string box = "x0=0:1,x1=0:1,x2=0:1,x3=0:1";
};

struct Output {
  double tol = 1e-9;
  int order = ts::kMaxOrder;
  std::vector<std::string> checks;
  std::string out;
  std::string format = "json";
  int threads = 0;
};

void add_run_options(CLI::App* cmd, PointSource& src, Output& o) {
  auto* pts = cmd->add_option("--points", src.points_file, "file with one point (x0 x1 x2 x3) per line");
  auto* grid = cmd->add_option("--grid", src.grid, "grid, e.g. x0=1:3:5,x1=0 (start:stop:count)");
  auto* rnd = cmd->add_option("--random", src.random, "number of pseudo-random points");
  cmd->add_option("--seed", src.seed, "seed for --random")->needs(rnd);
  cmd->add_option("--box", src.box, "box for --random, e.g. x0=1:2,x1=-1:1")->needs(rnd);
  pts->excludes(grid)->excludes(rnd);
  grid->excludes(rnd);
  cmd->add_option("--tol", o.tol, "violation tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--order", o.order, "jet order")->check(CLI::Range(0, ts::kMaxOrder));
  cmd->add_option("--checks", o.checks, "comma-separated residual name prefixes")->delimiter(',');
  cmd->add_option("--out", o.out, "report path (default stdout)");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--threads", o.threads, "worker threads (env THREADSPLIT_THREADS)")->check(CLI::PositiveNumber);
}

std::vector<ts::Point> load_points(const PointSource& src) {
  if (!src.points_file.empty()) return ts::load_points_file(src.points_file);
  if (!src.grid.empty()) return ts::parse_grid(src.grid);
  if (src.random > 0) return ts::random_points(src.random, src.seed, src.box);
  throw ts::Error(ts::ErrorKind::Input, "no points: give --points, --grid or --random");
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("THREADSPLIT_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) {
      throw ts::Error(ts::ErrorKind::Input, std::string("THREADSPLIT_THREADS must be a positive integer, got '") +
                                                env + "'");
    }
    return static_cast<int>(n);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run(const ts::MetricSpec& spec, const std::string& spec_text, const PointSource& src, const Output& o) {
  const auto points = load_points(src);
  ts::RunOptions options;
  options.order = o.order;
  options.tol = o.tol;
  options.checks = o.checks;
  ts::Report report;
  report.spec_sha256 = ts::sha256_hex(spec_text);
  report.points = ts::evaluate_points(spec, points, options, thread_count(o.threads));
  const std::string body = o.format == "csv" ? ts::report_csv(report) : ts::report_json(report);
  if (o.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ts::Error(ts::ErrorKind::Input, "cannot write " + o.out);
    f << body;
    if (!f) throw ts::Error(ts::ErrorKind::Input, "write failed for " + o.out);
  }
  for (const auto& p : report.points) {
    if (p.status == ts::PointStatus::InputError) std::cerr << "point error: " << p.error << "\n";
  }
  return ts::exit_code(report);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ts::Error(ts::ErrorKind::Input, "cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"threadsplit: (1+3) threading verification engine"};
  app.require_subcommand(1);

  std::string spec_path;
  PointSource vsrc;
  Output vout;
  auto* verify = app.add_subcommand("verify", "run the residual suites for a metric spec");
  verify->add_option("--spec", spec_path, "spec file")->required();
  add_run_options(verify, vsrc, vout);

  ts::AlmostFlrw cosmo;
  PointSource csrc;
  Output cout_;
  auto* cosmo_cmd = app.add_subcommand("cosmo", "build an almost-FLRW metric and verify it");
  cosmo_cmd->add_option("--a", cosmo.a, "scale factor a(x0)")->required();
  cosmo_cmd->add_option("--A", cosmo.A, "Bardeen potential A");
  cosmo_cmd->add_option("--B", cosmo.B, "Bardeen potential B");
  cosmo_cmd->add_flag("--perfect-fluid", cosmo.perfect_fluid, "set B = A");
  cosmo_cmd->add_option("--lambda", cosmo.lambda, "cosmological constant");
  cosmo_cmd->add_option("--newton-g", cosmo.newton_g, "Newton constant");
  auto* rho = cosmo_cmd->add_option("--rho", cosmo.rho, "explicit density (default: read off the field equations)");
  auto* pr = cosmo_cmd->add_option("--p", cosmo.p, "explicit pressure");
  rho->needs(pr);
  pr->needs(rho);
  bool print_spec = false;
  cosmo_cmd->add_flag("--print-spec", print_spec, "print the generated spec and exit");
  add_run_options(cosmo_cmd, csrc, cout_);

  std::string expr_text;
  auto* parse = app.add_subcommand("parse", "print the syntax tree of an expression");
  parse->add_option("--expr", expr_text, "expression")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      const std::string text = read_file(spec_path);
      return run(ts::load_spec(text), text, vsrc, vout);
    }
    if (cosmo_cmd->parsed()) {
      if (cosmo.newton_g == 0.0) throw ts::Error(ts::ErrorKind::Input, "--newton-g must be non-zero");
      const std::string text = ts::build_metric_text(cosmo);
      if (print_spec) {
        std::cout << text;
        return 0;
      }
      return run(ts::load_spec(text), text, csrc, cout_);
    }
    if (parse->parsed()) {
      std::cout << ts::parse_expr(expr_text).to_sexpr() << "\n";
      return 0;
    }
  } catch (const ts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
