#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "threadsplit/cosmology.hpp"
#include "threadsplit/error.hpp"
#include "threadsplit/pipeline.hpp"

using namespace threadsplit;

namespace {

constexpr double kPi = std::numbers::pi;

bool has_flag_prefix(const PointResult& r, const std::string& prefix) {
  const auto& f = r.residuals.flags();
  return std::any_of(f.begin(), f.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST_CASE("Friedmann residuals in closed form") {
  // a = t^2 at t = 2: H = 1, H' = -1/2, dust with rho = 3/(8 pi a^2)
  const double rho = 3.0 / (8.0 * kPi * 16.0);
  const auto [f1, f2] = friedmann_residuals(4.0, 1.0, -0.5, rho, 0.0, 1.0);
  CHECK(std::fabs(f1) < 1e-15);
  CHECK(std::fabs(f2) < 1e-15);
  const auto [g1, g2] = friedmann_residuals(4.0, 1.0, -0.5, 1.1 * rho, 0.0, 1.0);
  CHECK(g1 == doctest::Approx(-0.1));
  CHECK(g2 == doctest::Approx(0.05));
  const auto [s1, s2] = friedmann_residuals(1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
  CHECK(s1 == 0.0);
  CHECK(s2 == 0.0);
}

TEST_CASE("generated spec text") {
  AlmostFlrw c;
  c.a = "x0^2";
  c.A = "0.1*sin(x1)";
  c.perfect_fluid = true;
  const std::string text = build_metric_text(c);
  CHECK(text.find("[metric]") != std::string::npos);
  CHECK(text.find("[cosmology]") != std::string::npos);
  const MetricSpec spec = build_metric(c);
  REQUIRE(spec.cosmology);
  CHECK(spec.cosmology->B.structurally_equal(spec.cosmology->A));
  CHECK(spec.mode == MatterMode::FromEfe);
}

TEST_CASE("a = 1 with no perturbation is Minkowski") {
  const MetricSpec spec = build_metric({});
  const PointResult r = evaluate_point(spec, {0.3, 0.1, 0.2, 0.4}, {});
  CHECK(r.status == PointStatus::Ok);
  for (const auto& [name, res] : r.residuals.entries()) {
    CAPTURE(name);
    CHECK(res.value == 0.0);
  }
}

TEST_CASE("unperturbed FLRW") {
  AlmostFlrw c;
  c.a = "x0^2";
  const MetricSpec spec = build_metric(c);
  const SplitPoint sp = make_split_point(spec, {2.0, 0.1, -0.2, 0.3});
  const ClosedFormSet set = closed_forms(*spec.cosmology, spec, sp);
  CHECK(set.hubble == doctest::Approx(1.0));
  CHECK(set.hubble_prime == doctest::Approx(-0.5));
  CHECK(sp.kin.theta_trace.value() == doctest::Approx(3.0));
  CHECK(sp.kin.psi.value() == doctest::Approx(1.0));
  CHECK(set.max_error.at("C7") < 1e-14);

  const PointResult r = evaluate_point(spec, {2.0, 0.1, -0.2, 0.3}, {});
  CHECK(r.status == PointStatus::Ok);
  REQUIRE(r.residuals.contains("cosmo.friedmann.9.23"));
  CHECK(r.residuals.value("cosmo.friedmann.9.23") < 1e-13);
  CHECK(r.residuals.value("cosmo.friedmann.9.24") < 1e-13);
  CHECK(r.residuals.value("cosmo.theorem.shear-free") < 1e-14);
  CHECK(r.residuals.value("cosmo.theorem.umbilic") < 1e-13);
  CHECK(r.residuals.value("cosmo.9.20") < 1e-15);
}

TEST_CASE("almost-FLRW closed forms against the general engine") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m2_almost_flrw.spec");
  const Point x{2.0, kPi / 3.0, 0.2, -0.1};
  const SplitPoint sp = make_split_point(spec, x);
  const ClosedFormSet set = closed_forms(*spec.cosmology, spec, sp);
  for (const char* name : {"C6", "C7", "9.5", "9.8", "9.10a", "9.15"}) {
    CAPTURE(name);
    REQUIRE(set.max_error.contains(name));
    CHECK(set.max_error.at(name) < 1e-12);
  }

  const PointResult r = evaluate_point(spec, x, {});
  CHECK(r.status == PointStatus::Ok);
  CHECK(r.residuals.value("cosmo.9.18-vs-7.2") < 1e-12);
  CHECK(r.residuals.value("cosmo.9.20-vs-7.3b") < 1e-12);
  CHECK(r.residuals.value("cosmo.9.21-vs-7.4") < 1e-12);
  CHECK(r.residuals.value("cosmo.9.22-corrected-vs-7.6") < 1e-12);
  CHECK(r.residuals.value("cosmo.9.22-vs-7.6") > 1e-4);
  CHECK(has_flag_prefix(r, "PAPER-DISCREPANCY:cosmo.9.22-vs-7.6"));
  CHECK(!r.residuals.contains("cosmo.friedmann.9.23"));
}

TEST_CASE("distinct potentials skip the perturbed field equations") {
  AlmostFlrw c;
  c.a = "x0";
  c.A = "0.01*x1";
  c.B = "0.02*x2";
  const PointResult r = evaluate_point(build_metric(c), {1.5, 0.2, 0.3, 0.1}, {});
  CHECK(has_flag_prefix(r, "cosmo.perturbed-efe-skipped:A-differs-from-B"));
  CHECK(!r.residuals.contains("cosmo.9.22-vs-7.6"));
  CHECK(r.residuals.contains("cosmo.C7"));
}

TEST_CASE("invalid scale factors") {
  AlmostFlrw c;
  c.a = "x0 + x1";
  CHECK_THROWS_AS((void)build_metric(c), Error);
  c.a = "x0";
  c.A = "x1";
  const PointResult r = evaluate_point(build_metric(c), {1.0, 0.6, 0.0, 0.0}, {});
  CHECK(r.status == PointStatus::InputError);
}
