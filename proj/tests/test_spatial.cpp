#include <cmath>
#include <string>

#include "doctest.h"
#include "threadsplit/metric.hpp"
#include "threadsplit/spatial.hpp"
#include "threadsplit/structure.hpp"

using namespace threadsplit;

namespace {

MetricSpec static_spatial(const std::string& g11, const std::string& g22, const std::string& g33) {
  return load_spec("[metric]\nPhi = 1\ng11 = " + g11 + "\ng22 = " + g22 + "\ng33 = " + g33 + "\n");
}

double max_entry(const ResidualBlock& b) {
  double m = 0.0;
  for (const auto& [name, r] : b.entries()) {
    if (r.kind == ResidualKind::Check) m = std::fmax(m, r.value);
  }
  return m;
}

}  // namespace

TEST_CASE("spatial tensor layout") {
  SpatialTensor t("udd");
  CHECK(t.rank() == 3);
  CHECK(t.size() == 27);
  t({2, 0, 1}) = Jet::constant(5.0);
  int idx[3];
  for (int n = 0; n < t.size(); ++n) {
    t.unflatten(n, idx);
    if (t.flat(n).value() == 5.0) {
      CHECK(idx[0] == 2);
      CHECK(idx[1] == 0);
      CHECK(idx[2] == 1);
    }
  }
  const SpatialTensor s = SpatialTensor::scalar(Jet::constant(2.0));
  CHECK(s.rank() == 0);
  CHECK(s.size() == 1);
  CHECK(s({}).value() == 2.0);
}

TEST_CASE("flat space in cylindrical coordinates has no curvature") {
  const SplitPoint sp = make_split_point(static_spatial("1", "x1^2", "1"), {0.0, 1.3, 0.4, -0.2});
  CHECK(sp.conn.gamma[0][1][1].value() == doctest::Approx(-1.3));
  CHECK(sp.conn.gamma[1][0][1].value() == doctest::Approx(1 / 1.3));
  CHECK(max_abs_value(sp.curv.rbar) < 1e-13);
  CHECK(std::fabs(sp.curv.scalar.value()) < 1e-13);
}

TEST_CASE("unit two-sphere times a line") {
  const SplitPoint sp = make_split_point(static_spatial("1", "sin(x1)^2", "1"), {0.0, 0.9, 0.3, 0.0});
  CHECK(sp.curv.scalar.value() == doctest::Approx(2.0));
  CHECK(sp.curv.ricci[0][0].value() == doctest::Approx(1.0));
  CHECK(sp.curv.ricci[1][1].value() == doctest::Approx(std::sin(0.9) * std::sin(0.9)));
  CHECK(std::fabs(sp.curv.ricci[2][2].value()) < 1e-13);
  // G-bar_33 = -R/2 * g_33
  CHECK(sp.curv.einstein[2][2].value() == doctest::Approx(-1.0));
}

TEST_CASE("metricity and Bianchi identities on a generic metric") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m5_generic.spec");
  const SplitPoint sp = make_split_point(spec, {0.8, -0.1, 0.3, 0.2});
  const ResidualBlock kin = kinematic_residuals(sp.frame, sp.kin, sp.conn);
  CHECK(kin.contains("metricity.spatial"));
  CHECK(kin.contains("metricity.temporal"));
  CHECK(max_entry(kin) < 1e-12);
  const ResidualBlock b = bianchi_residuals(sp.curv, sp.conn, sp.kin, sp.frame);
  for (const char* name : {"vorticity.2.8a", "vorticity.2.8b", "bianchi.3.4", "constraint.3.6", "bianchi.3.13",
                           "bianchi.3.14", "bianchi.3.15"}) {
    CAPTURE(name);
    REQUIRE(b.contains(name));
    CHECK(b.value(name) < 1e-12);
  }
  // vorticity is non-zero here, so the integrable forms are not evaluated
  CHECK(!b.contains("integrable.3.16"));
}

TEST_CASE("covariant derivative of the spatial metric vanishes") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m5_generic.spec");
  const SplitPoint sp = make_split_point(spec, {0.6, 0.2, 0.1, -0.4});
  const SpatialTensor g = SpatialTensor::matrix(sp.frame.gbar, "dd");
  CHECK(max_abs_value(spatial_d(sp, g)) < 1e-13);
  CHECK(max_abs_value(temporal_d(sp, g)) < 1e-13);
  const SpatialTensor ginv = SpatialTensor::matrix(sp.frame.gbar_inv, "uu");
  CHECK(max_abs_value(spatial_d(sp, ginv)) < 1e-13);
}

TEST_CASE("order below three exhausts the Bianchi group") {
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m5_generic.spec");
  CHECK_THROWS_AS((void)make_split_point(spec, {0.6, 0.2, 0.1, -0.4}, 1), Error);
}
