#include "threadsplit/jet_kernels.hpp"
#include "threadsplit/multi_index.hpp"

namespace threadsplit::kernels {

namespace {

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void add_scalar(const double* a, const double* b, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_scalar(const double* a, const double* b, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void scale_scalar(const double* a, double s, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = a[i] * s;
}

void mul_scalar(const double* a, const double* b, double* out, int order) {
  const MulPlan& plan = MulPlan::instance();
  const int slots = kSizeForOrder[order];
  for (int g = 0; g < slots; ++g) {
    const MulPlan::Run& run = plan.runs[g];
    double acc = 0.0;
    for (int t = run.begin; t < run.begin + run.length; ++t) {
      acc += plan.coef[t] * a[plan.lhs[t]] * b[plan.rhs[t]];
    }
    out[g] = acc;
  }
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

const MulPlan& MulPlan::instance() {
  static const MulPlan plan = [] {
    MulPlan p;
    const auto& table = MultiIndexTable::instance();
    for (int g = 0; g < kJetSize; ++g) {
      const MultiIndex& gamma = table.at(g);
      Run run{g, static_cast<int>(p.lhs.size()), 0, static_cast<int>(p.padded_lhs.size()), 0};
      for (int s = 0; s < kJetSize; ++s) {
        const MultiIndex& alpha = table.at(s);
        MultiIndex beta;
        bool below = true;
        int coef = 1;
        for (int c = 0; c < kDim; ++c) {
          if (alpha.exponents[c] > gamma.exponents[c]) {
            below = false;
            break;
          }
          beta.exponents[c] = static_cast<std::uint8_t>(gamma.exponents[c] - alpha.exponents[c]);
          coef *= binomial(gamma.exponents[c], alpha.exponents[c]);
        }
        if (!below) continue;
        p.lhs.push_back(s);
        p.rhs.push_back(table.slot(beta));
        p.coef.push_back(coef);
        ++run.length;
      }
      run.padded_length = run.length <= 4 ? 4 : 8;
      for (int t = 0; t < run.padded_length; ++t) {
        if (t < run.length) {
          p.padded_lhs.push_back(p.lhs[run.begin + t]);
          p.padded_rhs.push_back(p.rhs[run.begin + t]);
          p.padded_coef.push_back(p.coef[run.begin + t]);
        } else {
          p.padded_lhs.push_back(0);
          p.padded_rhs.push_back(0);
          p.padded_coef.push_back(0.0);
        }
      }
      p.runs.push_back(run);
    }
    return p;
  }();
  return plan;
}

const JetKernels& scalar_kernels() {
  static const JetKernels k{Isa::Scalar, add_scalar, sub_scalar, scale_scalar, mul_scalar};
  return k;
}

}  // namespace threadsplit::kernels
