#include <cmath>
#include <algorithm>
#include <numbers>

#include "doctest.h"
#include "threadsplit/efe.hpp"
#include "threadsplit/pipeline.hpp"

using namespace threadsplit;

namespace {

constexpr const char* kFlat = "[metric]\nPhi = 1\ng11 = 1\ng22 = 1\ng33 = 1\n";

}  // namespace

TEST_CASE("matter read off the field equations satisfies every block") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m5_generic.spec");
  const SplitPoint sp = make_split_point(spec, {0.8, -0.1, 0.3, 0.2});
  const EinsteinSet G = einstein_split(sp);
  const StressEnergy T = stress_energy(spec, sp, G);
  const FluidSplit fl = fluid_split(T, sp.frame);
  const EfeInput in{sp, G, T, fl, spec.lambda, spec.newton_g};
  const ResidualBlock r = efe_residuals(in);
  for (const auto& [name, res] : r.entries()) {
    CAPTURE(name);
    if (res.kind == ResidualKind::Check) CHECK(res.value < 1e-12);
  }
  const ResidualBlock c = conservation_residuals(sp, T, fl);
  for (const auto& [name, res] : c.entries()) {
    CAPTURE(name);
    CHECK(res.value < 1e-12);
  }
}

TEST_CASE("fluid split round trip") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m5_generic.spec");
  const SplitPoint sp = make_split_point(spec, {0.6, 0.3, -0.2, 0.1});
  const StressEnergy T = stress_energy(spec, sp, einstein_split(sp));
  const StressEnergy back = stress_from_fluid(fluid_split(T, sp.frame), sp.frame);
  CHECK(back.T00.value() == doctest::Approx(T.T00.value()));
  for (int i = 0; i < 3; ++i) {
    CHECK(back.Ti0[i].value() == doctest::Approx(T.Ti0[i].value()));
    for (int j = 0; j < 3; ++j) CHECK(back.Tij[i][j].value() == doctest::Approx(T.Tij[i][j].value()));
  }
}

TEST_CASE("vacuum Minkowski with explicit zero matter is ok") {
  const MetricSpec spec = load_spec(std::string(kFlat) + "[matter]\nmode = explicit\nrho = 0\np = 0\n");
  const PointResult r = evaluate_point(spec, {0.1, 0.2, 0.3, 0.4}, {});
  CHECK(r.status == PointStatus::Ok);
}

TEST_CASE("dust in flat space violates the field equations") {
  const MetricSpec spec = load_spec(std::string(kFlat) + "[matter]\nmode = explicit\nrho = 1\np = 0\n");
  const PointResult r = evaluate_point(spec, {0.1, 0.2, 0.3, 0.4}, {});
  CHECK(r.status == PointStatus::Violation);
  CHECK(r.residuals.value("tefe.7.4") == doctest::Approx(16 * std::numbers::pi));
  // conservation still holds: constant rho, nothing moves
  CHECK(r.residuals.value("cons.energy.8.5") < 1e-14);
}

TEST_CASE("anisotropic stress must be trace-free") {
  const MetricSpec spec =
      load_spec(std::string(kFlat) + "[matter]\nmode = explicit\nrho = 0\np = 0\npi11 = 0.1\n");
  const PointResult r = evaluate_point(spec, {0, 0, 0, 0}, {});
  CHECK(r.status == PointStatus::InputError);
  CHECK(r.error.rfind("InvalidMatter", 0) == 0);
}

TEST_CASE("de Sitter is vacuum with a cosmological constant") {
  const MetricSpec spec = load_spec(
      "[metric]\nPhi = 1\ng11 = exp(2*0.5*x0)\ng22 = exp(2*0.5*x0)\ng33 = exp(2*0.5*x0)\n"
      "[constants]\nlambda = 0.75\n");
  const SplitPoint sp = make_split_point(spec, {0.4, 0.0, 0.0, 0.0});
  const StressEnergy T = stress_energy(spec, sp, einstein_split(sp));
  const FluidSplit fl = fluid_split(T, sp.frame);
  CHECK(std::fabs(fl.rho.value()) < 1e-14);
  CHECK(std::fabs(fl.p.value()) < 1e-14);
  const PointResult r = evaluate_point(spec, {0.4, 0.0, 0.0, 0.0}, {});
  CHECK(r.status == PointStatus::Ok);
}

TEST_CASE("conservation needs first derivatives of T") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m4_static.spec");
  RunOptions o;
  o.order = 2;
  const PointResult r = evaluate_point(spec, {0.0, 0.5, 0.0, 0.0}, o);
  const auto& f = r.residuals.flags();
  CHECK(std::find(f.begin(), f.end(), "order-exhausted:conservation") != f.end());
  CHECK(!r.residuals.contains("cons.8.2"));
  CHECK(r.residuals.contains("oracle.4.5a"));
}
