#include <cmath>
#include <vector>

#include "doctest.h"
#include "threadsplit/jet.hpp"
#include "threadsplit/jet_kernels.hpp"
#include "threadsplit/metric.hpp"
#include "threadsplit/pipeline.hpp"
#include "threadsplit/report.hpp"

using namespace threadsplit;

namespace {

std::vector<double> random_coefficients(SplitMix64& rng, int n) {
  std::vector<double> v(kJetSize, 0.0);
  for (int i = 0; i < n; ++i) v[i] = 4.0 * rng.uniform() - 2.0;
  return v;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

// Reference Leibniz product straight from the multi-index table.
std::vector<double> naive_mul(const std::vector<double>& a, const std::vector<double>& b, int order) {
  const auto& t = MultiIndexTable::instance();
  std::vector<double> out(kJetSize, 0.0);
  const int n = kSizeForOrder[order];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const MultiIndex s = t.at(i) + t.at(j);
      if (s.order() > order) continue;
      double c = 1.0;
      for (int k = 0; k < kDim; ++k) {
        // binomial(s_k, i_k)
        const int top = s.exponents[k], pick = t.at(i).exponents[k];
        double b = 1.0;
        for (int q = 0; q < pick; ++q) b = b * (top - q) / (q + 1);
        c *= b;
      }
      out[t.slot(s)] += c * a[i] * b[j];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scalar mul matches the naive Leibniz sum") {
  SplitMix64 rng(42);
  const auto& k = kernels::scalar_kernels();
  for (int order = 0; order <= kMaxOrder; ++order) {
    for (int rep = 0; rep < 50; ++rep) {
      const int n = kSizeForOrder[order];
      const auto a = random_coefficients(rng, n);
      const auto b = random_coefficients(rng, n);
      std::vector<double> out(kJetSize, 0.0);
      k.mul(a.data(), b.data(), out.data(), order);
      CHECK(max_gap(out, naive_mul(a, b, order)) < 1e-13);
    }
  }
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  const kernels::JetKernels* simd = kernels::avx2_kernels();
  if (simd == nullptr || !kernels::cpu_supports(kernels::Isa::Avx2)) {
    MESSAGE("AVX2 kernels not available on this build or CPU; equivalence not exercised");
    return;
  }
  const auto& sc = kernels::scalar_kernels();
  SplitMix64 rng(7);
  for (int order = 0; order <= kMaxOrder; ++order) {
    const int n = kSizeForOrder[order];
    for (int rep = 0; rep < 200; ++rep) {
      const auto a = random_coefficients(rng, n);
      const auto b = random_coefficients(rng, n);
      std::vector<double> o1(kJetSize, 0.0), o2(kJetSize, 0.0);
      sc.add(a.data(), b.data(), o1.data(), n);
      simd->add(a.data(), b.data(), o2.data(), n);
      CHECK(max_gap(o1, o2) == 0.0);
      sc.sub(a.data(), b.data(), o1.data(), n);
      simd->sub(a.data(), b.data(), o2.data(), n);
      CHECK(max_gap(o1, o2) == 0.0);
      sc.scale(a.data(), -1.7, o1.data(), n);
      simd->scale(a.data(), -1.7, o2.data(), n);
      CHECK(max_gap(o1, o2) == 0.0);
      sc.mul(a.data(), b.data(), o1.data(), order);
      simd->mul(a.data(), b.data(), o2.data(), order);
      // FMA contraction changes the rounding, not the result.
      CHECK(max_gap(o1, o2) < 1e-13);
    }
  }
}

TEST_CASE("full pipeline gives the same residuals with either kernel set") {
  if (kernels::avx2_kernels() == nullptr || !kernels::cpu_supports(kernels::Isa::Avx2)) {
    MESSAGE("AVX2 kernels not available; pipeline equivalence not exercised");
    return;
  }
  const MetricSpec spec = load_spec_file(THREADSPLIT_SOURCE_DIR "/corpus/m5_generic.spec");
  const Point x{0.7, 0.2, -0.3, 0.1};
  kernels::select(kernels::Isa::Scalar);
  const PointResult a = evaluate_point(spec, x, {});
  kernels::select(kernels::Isa::Avx2);
  const PointResult b = evaluate_point(spec, x, {});
  REQUIRE(a.residuals.entries().size() == b.residuals.entries().size());
  for (const auto& [name, r] : a.residuals.entries()) {
    CAPTURE(name);
    CHECK(std::fabs(r.value - b.residuals.value(name)) < 1e-12);
  }
  CHECK(a.status == b.status);
}

TEST_CASE("kernel selection") {
  CHECK(std::string(kernels::to_string(kernels::Isa::Scalar)) == "scalar");
  kernels::select(kernels::Isa::Scalar);
  CHECK(kernels::active().isa == kernels::Isa::Scalar);
  if (!kernels::cpu_supports(kernels::Isa::Avx2)) {
    CHECK_THROWS(kernels::select(kernels::Isa::Avx2));
  }
}
