#include <cmath>

#include "doctest.h"
#include "threadsplit/oracle.hpp"
#include "threadsplit/structure.hpp"

using namespace threadsplit;

namespace {

double gap(const SpatialTensor& a, const SpatialTensor& b) {
  double m = 0.0;
  for (int n = 0; n < a.size(); ++n) {
    const double v = b.flat(n).value();
    m = std::fmax(m, std::fabs(a.flat(n).value() - v) / std::fmax(1.0, std::fabs(v)));
  }
  return m;
}

struct Case {
  const char* spec;
  Point x;
};

constexpr Case kCases[] = {
    {"m3_rotating.spec", {0.1, 0.5, 0.2, -0.3}},
    {"m4_static.spec", {0.4, 0.9, -0.2, 0.1}},
    {"m5_generic.spec", {0.8, -0.1, 0.3, 0.2}},
    {"m5_generic.spec", {0.55, 0.4, -0.45, -0.1}},
};

SplitPoint point(const Case& c) {
  return make_split_point(load_spec_file(std::string(THREADSPLIT_SOURCE_DIR "/corpus/") + c.spec), c.x);
}

}  // namespace

TEST_CASE("both structure-equation forms match the oracle") {
  for (const auto& c : kCases) {
    CAPTURE(c.spec);
    const SplitPoint sp = point(c);
    const Metric4 m = assemble_metric4(sp.frame);
    const OracleProjection o = project_frame(riemann4(m), sp.frame);
    for (auto form : {CurvatureSource::SplitK, CurvatureSource::SplitTheta}) {
      const FullCurvature fc = curvature_from_split(sp, form);
      CHECK(gap(fc.iljk, o.full.iljk) < 1e-12);
      CHECK(gap(fc.i0jk, o.full.i0jk) < 1e-12);
      CHECK(gap(fc.il0k, o.full.il0k) < 1e-12);
      CHECK(gap(fc.i00k, o.full.i00k) < 1e-12);
    }
  }
}

TEST_CASE("Ricci split forms match the oracle") {
  for (const auto& c : kCases) {
    CAPTURE(c.spec);
    const SplitPoint sp = point(c);
    const OracleProjection o = project_frame(riemann4(assemble_metric4(sp.frame)), sp.frame);
    for (auto form : {RicciForm::Via56, RicciForm::Via57}) {
      const RicciSet r = ricci_split(sp, form);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(r.ricci[i][j].value() == doctest::Approx(o.ricci.ricci[i][j].value()));
        CHECK(r.r_i0[i].value() == doctest::Approx(o.ricci.r_i0[i].value()));
      }
      CHECK(r.r_00.value() == doctest::Approx(o.ricci.r_00.value()));
      CHECK(r.scalar.value() == doctest::Approx(o.ricci.scalar.value()));
    }
    const Vec3 div = ricci_i0_divergence(sp);
    for (int i = 0; i < 3; ++i) CHECK(div[i].value() == doctest::Approx(o.ricci.r_i0[i].value()));
  }
}

TEST_CASE("identity residuals are small and ref_form forms are probes") {
  const SplitPoint sp = point(kCases[2]);
  const FullCurvature k = curvature_from_split(sp, CurvatureSource::SplitK);
  const FullCurvature t = curvature_from_split(sp, CurvatureSource::SplitTheta);
  ResidualBlock all = structure_residuals(sp, k, t);
  all.merge(curvature_identity_residuals(sp, k));
  all.merge(ricci_residuals(sp, ricci_split(sp, RicciForm::Via56), ricci_split(sp, RicciForm::Via57)));
  for (const auto& [name, r] : all.entries()) {
    CAPTURE(name);
    if (r.kind == ResidualKind::Check) {
      CHECK(r.value < 1e-11);
    } else {
      CHECK(name.rfind("paper.", 0) == 0);
    }
  }
  // The reference forms really do differ on a generic metric.
  CHECK(all.value("paper.4.9a") > 1e-6);
  CHECK(all.value("paper.5.11") > 1e-6);
}

TEST_CASE("vorticity-free forms only when omega vanishes") {
  const SplitPoint rot = point(kCases[0]);
  const ResidualBlock a = curvature_identity_residuals(rot, curvature_from_split(rot, CurvatureSource::SplitK));
  CHECK(!a.contains("integrable.4.12"));
  const SplitPoint st = point(kCases[1]);
  const ResidualBlock b = curvature_identity_residuals(st, curvature_from_split(st, CurvatureSource::SplitK));
  REQUIRE(b.contains("integrable.4.12"));
  CHECK(b.value("integrable.4.12") < 1e-12);
}
